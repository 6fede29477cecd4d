#include "ridehail/attack.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace ridehail::attack {

namespace {

std::vector<PlanarPoint> filter_offsets(const geometry::LatticeSolutionSet& solutions,
                                        const roadnet::Zone& zone, const PlanarPoint& rider,
                                        const roadnet::RoadNetwork& net, double threshold_m) {
    std::vector<PlanarPoint> out;
    for (const auto& o : solutions.offsets) {
        const PlanarPoint c{rider.x + o.dx, rider.y + o.dy, rider.zone};
        if (zone.contains(c) && net.is_on_road(c, threshold_m)) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

AttackReport assemble(std::vector<PredictionSet> predictions,
                      const std::vector<PlanarPoint>& drivers) {
    AttackReport report;
    report.predictions = std::move(predictions);
    report.hit.resize(report.predictions.size());
    std::uint64_t total = 0;
    std::uint64_t exact = 0;
    for (std::size_t i = 0; i < report.predictions.size(); ++i) {
        const auto& pred = report.predictions[i];
        total += pred.candidates.size();
        if (pred.candidates.size() == 1) ++exact;
        report.hit[i] = pred.contains(drivers[i]) ? 1 : 0;
    }
    const auto n = static_cast<double>(report.predictions.size());
    if (n > 0) {
        report.avg = static_cast<double>(total) / n;
        report.exact_pct = 100.0 * static_cast<double>(exact) / n;
    }
    return report;
}

}  // namespace

bool PredictionSet::contains(const PlanarPoint& p) const {
    return std::binary_search(candidates.begin(), candidates.end(), p);
}

std::uint64_t pnorm_value(const PlanarPoint& a, const PlanarPoint& b, int p) {
    if (p <= 0 || p % 2 != 0) {
        throw geometry::InvalidExponent("pnorm_value: p must be a positive even integer");
    }
    auto abs_pow = [p](std::int64_t v) {
        unsigned __int128 acc = 1;
        const auto base = static_cast<std::uint64_t>(v < 0 ? -v : v);
        for (int i = 0; i < p; ++i) acc *= base;
        return acc;
    };
    const unsigned __int128 total = abs_pow(a.x - b.x) + abs_pow(a.y - b.y);
    if (total > std::numeric_limits<std::uint64_t>::max()) {
        throw geometry::ParameterTooLarge("pnorm_value: norm exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(total);
}

RideSnapshot make_snapshot(const roadnet::Zone& zone, const PlanarPoint& rider,
                           std::vector<PlanarPoint> drivers, int norm_exponent) {
    RideSnapshot s;
    s.zone = zone;
    s.rider = rider;
    s.drivers = std::move(drivers);
    s.disclosed.reserve(s.drivers.size());
    for (const auto& d : s.drivers) {
        s.disclosed.push_back(norm_exponent == 2
                                  ? static_cast<std::uint64_t>(squared_distance(rider, d))
                                  : pnorm_value(rider, d, norm_exponent));
    }
    return s;
}

void validate_snapshot(const RideSnapshot& snapshot, const roadnet::RoadNetwork& net,
                       double on_road_threshold_m, int norm_exponent) {
    if (snapshot.drivers.size() != snapshot.disclosed.size()) {
        throw SnapshotInvalid("snapshot: drivers/disclosed size mismatch");
    }
    if (!snapshot.zone.contains(snapshot.rider)) {
        throw SnapshotInvalid("snapshot: rider outside zone");
    }
    for (std::size_t i = 0; i < snapshot.drivers.size(); ++i) {
        const auto& d = snapshot.drivers[i];
        const auto tag = " (driver " + std::to_string(i) + ")";
        if (!snapshot.zone.contains(d)) throw SnapshotInvalid("snapshot: driver outside zone" + tag);
        if (!net.is_on_road(d, on_road_threshold_m)) {
            throw SnapshotInvalid("snapshot: driver off road" + tag);
        }
        const std::uint64_t expect =
            norm_exponent == 2 ? static_cast<std::uint64_t>(squared_distance(snapshot.rider, d))
                               : pnorm_value(snapshot.rider, d, norm_exponent);
        if (snapshot.disclosed[i] != expect) {
            throw SnapshotInvalid("snapshot: disclosed norm not exact" + tag);
        }
    }
}

std::vector<PlanarPoint> predict_driver(const roadnet::Zone& zone, const PlanarPoint& rider,
                                        std::uint64_t d, const roadnet::RoadNetwork& net,
                                        double on_road_threshold_m, std::uint64_t max_n) {
    return filter_offsets(geometry::enumerate_circle(d, max_n), zone, rider, net,
                          on_road_threshold_m);
}

std::vector<PlanarPoint> predict_driver_pnorm(const roadnet::Zone& zone, const PlanarPoint& rider,
                                              int p, std::uint64_t d,
                                              const roadnet::RoadNetwork& net,
                                              double on_road_threshold_m) {
    return filter_offsets(geometry::enumerate_pnorm(p, d), zone, rider, net, on_road_threshold_m);
}

AttackReport run_attack(const RideSnapshot& snapshot, const roadnet::RoadNetwork& net,
                        double on_road_threshold_m) {
    std::vector<PredictionSet> predictions;
    predictions.reserve(snapshot.disclosed.size());
    for (std::size_t i = 0; i < snapshot.disclosed.size(); ++i) {
        predictions.push_back(
            {i, predict_driver(snapshot.zone, snapshot.rider, snapshot.disclosed[i], net,
                               on_road_threshold_m)});
    }
    return assemble(std::move(predictions), snapshot.drivers);
}

AttackReport run_attack_pnorm(const RideSnapshot& snapshot, int p,
                              const roadnet::RoadNetwork& net, double on_road_threshold_m) {
    std::vector<PredictionSet> predictions;
    predictions.reserve(snapshot.disclosed.size());
    for (std::size_t i = 0; i < snapshot.disclosed.size(); ++i) {
        predictions.push_back(
            {i, predict_driver_pnorm(snapshot.zone, snapshot.rider, p, snapshot.disclosed[i], net,
                                     on_road_threshold_m)});
    }
    return assemble(std::move(predictions), snapshot.drivers);
}

}  // namespace ridehail::attack
