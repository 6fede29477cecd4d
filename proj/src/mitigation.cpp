#include "ridehail/mitigation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ridehail/geometry.hpp"

namespace ridehail::mitigation {

PlanarPoint obfuscate(const PlanarPoint& true_loc, const ObfuscationParams& params, Rng& rng) {
    const double r = params.radius_m;
    if (r < 0.0) throw std::invalid_argument("obfuscate: radius must be >= 0");
    if (r == 0.0) return true_loc;
    const double r2 = r * r;
    for (;;) {
        const double dx = rng.next_real(-r, r);
        const double dy = rng.next_real(-r, r);
        if (dx * dx + dy * dy > r2) continue;  // uniform over the disk
        const auto ix = std::llround(dx);
        const auto iy = std::llround(dy);
        // Keep the rounded offset inside the disk as well, so the disclosed
        // point is never farther than r from the true location.
        if (static_cast<double>(ix) * ix + static_cast<double>(iy) * iy > r2) continue;
        return {true_loc.x + ix, true_loc.y + iy, true_loc.zone};
    }
}

std::vector<PlanarPoint> predict_driver_mitigated(const roadnet::Zone& zone,
                                                  const PlanarPoint& rider, std::uint64_t d,
                                                  const roadnet::RoadNetwork& net,
                                                  const ObfuscationParams& params) {
    std::vector<PlanarPoint> out;
    for (const auto& o : geometry::enumerate_circle(d).offsets) {
        const PlanarPoint c{rider.x + o.dx, rider.y + o.dy, rider.zone};
        if (zone.contains(c) && net.has_road_within(c, params.radius_m)) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

AnonymityReport report_from_records(const std::vector<harness::TrialRecord>& records) {
    AnonymityReport rep;
    std::uint64_t total = 0, hits = 0;
    for (const auto& r : records) {
        rep.per_driver_candidates.push_back(static_cast<std::int64_t>(r.candidates));
        rep.hit.push_back(r.hit ? 1 : 0);
        total += r.candidates;
        hits += r.hit ? 1 : 0;
    }
    const auto n = static_cast<double>(records.size());
    if (n > 0) {
        rep.mean_anonymity = static_cast<double>(total) / n;
        rep.hit_pct = 100.0 * static_cast<double>(hits) / n;
    }
    return rep;
}

harness::CellSpec base_spec(const ExperimentSpec& spec) {
    harness::CellSpec cell;
    cell.zone_side_m = spec.zone_side_m;
    cell.trials = spec.trials;
    cell.master_seed = spec.seed;
    cell.cell_label = spec.label;
    cell.out_of_zone = spec.out_of_zone;
    return cell;
}

}  // namespace

AnonymityReport run_mitigated_experiment(const roadnet::RoadNetwork& net,
                                         const ObfuscationParams& params,
                                         const ExperimentSpec& spec) {
    auto cell = base_spec(spec);
    cell.mode = harness::PipelineMode::mitigated;
    cell.radius_m = params.radius_m;
    return report_from_records(harness::run_cell(net, cell));
}

AnonymityReport run_unmitigated_experiment(const roadnet::RoadNetwork& net,
                                           const ExperimentSpec& spec) {
    auto cell = base_spec(spec);
    cell.mode = harness::PipelineMode::attack;
    cell.on_road_threshold_m = spec.on_road_threshold_m;
    return report_from_records(harness::run_cell(net, cell));
}

void write_experiment_csv(const std::string& path, const AnonymityReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "trial,candidates,hit\n";
    for (std::size_t i = 0; i < report.per_driver_candidates.size(); ++i) {
        out << i << ',' << report.per_driver_candidates[i] << ','
            << static_cast<int>(report.hit[i]) << '\n';
    }
}

}  // namespace ridehail::mitigation
