#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ridehail/planar.hpp"
#include "ridehail/rng.hpp"
#include "ridehail/roadnet.hpp"

namespace ridehail::harness {

// Uniformly placed square zone inside the map's bounding box, re-drawn
// (bounded) until it contains road. Throws std::invalid_argument when the
// side exceeds the map extent, NoRoadInZone when no roaded placement is
// found.
roadnet::Zone sample_zone(const roadnet::RoadNetwork& net, std::int64_t side_m, Rng& rng,
                          int max_retries = 1000);

enum class PipelineMode { attack, pnorm, mitigated };

// What to do when an obfuscated location would leave the zone: pad driver
// sampling away from the edge so it cannot happen (the experimental
// control), keep the point as disclosed, or redraw it until it lands inside.
enum class ObfuscatedOutOfZone { pad, keep, drop };

// One sweep cell: a pipeline at one zone size. Every random decision of
// trial t descends from derive_seed(master_seed, cell_label + role, t), so
// cells never perturb each other and reruns are byte-identical.
struct CellSpec {
    PipelineMode mode = PipelineMode::attack;
    std::int64_t zone_side_m = 1000;
    int trials = 30;
    int drivers_per_trial = 1;
    double on_road_threshold_m = roadnet::kOnRoadThresholdM;
    double radius_m = 0.0;  // mitigated mode
    int pnorm_p = 2;        // pnorm mode
    ObfuscatedOutOfZone out_of_zone = ObfuscatedOutOfZone::pad;
    std::uint64_t master_seed = 1;
    std::string cell_label = "cell";

    // Pinned scenario pieces for worked examples and demos; sampling fills
    // whatever is left unset.
    std::optional<roadnet::Zone> fixed_zone;
    std::optional<PlanarPoint> fixed_rider;
    std::optional<PlanarPoint> fixed_driver;
};

struct TrialRecord {
    int trial = 0;
    int driver = 0;
    std::uint64_t candidates = 0;
    bool hit = false;
    bool exact = false;
    double elapsed_ms = 0.0;  // wall clock; never part of deterministic reports
};

// Runs one cell; records come back in (trial, driver) order regardless of
// worker count.
std::vector<TrialRecord> run_cell(const roadnet::RoadNetwork& net, const CellSpec& spec,
                                  int threads = 1);

struct ExperimentConfig {
    std::string road_source;  // "grid:ROWSxCOLS:SPACING[:ORIGIN_X,ORIGIN_Y]" or a file path
    std::vector<std::int64_t> zone_sides_m = {1000, 1414, 2000, 3000, 5000, 10000, 20000, 30000};
    int trials_per_size = 30;
    std::optional<double> obfuscation_radius_m;
    std::optional<int> pnorm_p;
    std::uint64_t master_seed = 1;
    std::string output_path = "sweep.csv";
    double on_road_threshold_m = roadnet::kOnRoadThresholdM;
    int threads = 1;
    std::string timings_path;  // empty = do not write the (non-deterministic) timing sidecar
    std::optional<roadnet::Zone> fixed_zone;
    std::optional<PlanarPoint> fixed_rider;
    std::optional<PlanarPoint> fixed_driver;
};

struct SweepCellResult {
    std::string map_label;
    std::int64_t zone_side_m = 0;
    std::string mode;
    std::string status = "ok";  // or "error: ..."
    int trials = 0;
    double avg = 0.0;
    double exact_pct = 0.0;
    double hit_pct = 0.0;
    std::vector<TrialRecord> records;
};

struct SweepReport {
    std::string map_label;
    std::vector<SweepCellResult> cells;
};

// Flat key = value file; '#' starts a comment. Keys match the
// ExperimentConfig field names.
ExperimentConfig load_config_file(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Builds the network named by road_source: either a synthetic grid spec or a
// .csv / .geojson file.
roadnet::RoadNetwork load_road_source(const std::string& source);

SweepReport run_sweep(const roadnet::RoadNetwork& net, const ExperimentConfig& cfg);

// Aggregate rows, per-trial rows, and the optional timing sidecar. The two
// report writers are deterministic byte-for-byte under a fixed config.
void write_sweep_csv(const std::string& path, const SweepReport& report);
void write_trials_csv(const std::string& path, const SweepReport& report);
void write_timings_csv(const std::string& path, const SweepReport& report);

// Recompute a cell's aggregate statistics from its per-trial records;
// write_sweep_csv emits exactly these.
void recompute_aggregates(SweepCellResult& cell);

}  // namespace ridehail::harness
