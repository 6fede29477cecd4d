#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ridehail/harness.hpp"
#include "ridehail/planar.hpp"
#include "ridehail/rng.hpp"
#include "ridehail/roadnet.hpp"

namespace ridehail::mitigation {

// The defense's single knob: drivers disclose a uniform random point within
// radius_m of their true location instead of the location itself.
struct ObfuscationParams {
    double radius_m = 0.0;
};

// Uniform-over-area point of the closed disk around true_loc, rounded to
// whole meters. Rejection keeps the rounded point inside the disk too, so
// the disclosed offset never exceeds radius_m. The point may be off road and
// outside any zone; the protocol constrains neither.
PlanarPoint obfuscate(const PlanarPoint& true_loc, const ObfuscationParams& params, Rng& rng);

// The rider's weakened filter once obfuscation is in play: a lattice point
// is plausible if any road lies within radius_m of it (an obfuscated
// location sits within radius_m of its on-road driver). Zone filtering is
// unchanged: disclosed points come from drivers advertising this zone.
std::vector<PlanarPoint> predict_driver_mitigated(const roadnet::Zone& zone,
                                                  const PlanarPoint& rider, std::uint64_t d,
                                                  const roadnet::RoadNetwork& net,
                                                  const ObfuscationParams& params);

// Per-driver prediction-set sizes; their mean is the anonymity measure.
struct AnonymityReport {
    std::vector<std::int64_t> per_driver_candidates;
    std::vector<std::uint8_t> hit;  // disclosed location inside the prediction set
    double mean_anonymity = 0.0;
    double hit_pct = 0.0;
};

struct ExperimentSpec {
    std::int64_t zone_side_m = 2000;
    int trials = 25;
    std::uint64_t seed = 1;
    std::string label = "mitigate";
    double on_road_threshold_m = roadnet::kOnRoadThresholdM;  // baseline filter only
    harness::ObfuscatedOutOfZone out_of_zone = harness::ObfuscatedOutOfZone::pad;
};

// Per trial: random zone, random rider, random on-road driver, obfuscate,
// disclose the exact squared distance to the obfuscated point, run the
// weakened filter, record the set size and whether the disclosed point
// survived its own filter.
AnonymityReport run_mitigated_experiment(const roadnet::RoadNetwork& net,
                                         const ObfuscationParams& params,
                                         const ExperimentSpec& spec);

// The same experiment without obfuscation: the plain attack under
// spec.on_road_threshold_m. Shares the seed derivation with the mitigated
// run, so a radius-0 mitigated report against a threshold-0 baseline is
// byte-identical.
AnonymityReport run_unmitigated_experiment(const roadnet::RoadNetwork& net,
                                           const ExperimentSpec& spec);

// CSV with header trial,candidates,hit.
void write_experiment_csv(const std::string& path, const AnonymityReport& report);

}  // namespace ridehail::mitigation
