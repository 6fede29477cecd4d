#pragma once

#include <cstdint>
#include <vector>

#include "ridehail/geometry.hpp"
#include "ridehail/planar.hpp"
#include "ridehail/roadnet.hpp"

namespace ridehail::attack {

struct SnapshotInvalid : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// One ride request as the rider sees it, plus the ground truth the attack is
// scored against. disclosed[i] is the exact integer norm between the rider
// and drivers[i] (squared Euclidean, or the p-norm value in the variant);
// the attack routine never reads `drivers`.
struct RideSnapshot {
    roadnet::Zone zone;
    PlanarPoint rider;
    std::vector<PlanarPoint> drivers;
    std::vector<std::uint64_t> disclosed;
};

// Candidate locations the rider ends up with for one driver: in-zone,
// norm-exact, and on road. Sorted.
struct PredictionSet {
    std::size_t driver_index = 0;
    std::vector<PlanarPoint> candidates;

    bool contains(const PlanarPoint& p) const;
};

struct AttackReport {
    std::vector<PredictionSet> predictions;
    std::vector<std::uint8_t> hit;  // ground truth in the prediction set?
    double avg = 0.0;               // mean candidate count
    double exact_pct = 0.0;         // share of drivers pinned to one point
};

// Builds a snapshot with exactly-computed disclosed norms.
RideSnapshot make_snapshot(const roadnet::Zone& zone, const PlanarPoint& rider,
                           std::vector<PlanarPoint> drivers, int norm_exponent = 2);

// The attack's premises: everyone in the zone, drivers on road, disclosed
// norms exact. Malformed snapshots are rejected here rather than silently
// producing reports whose guarantees do not hold.
void validate_snapshot(const RideSnapshot& snapshot, const roadnet::RoadNetwork& net,
                       double on_road_threshold_m = roadnet::kOnRoadThresholdM,
                       int norm_exponent = 2);

// Candidate set for a single disclosed distance: every lattice point at
// exactly distance sqrt(d) from the rider that is inside the zone and within
// threshold of a road.
std::vector<PlanarPoint> predict_driver(const roadnet::Zone& zone, const PlanarPoint& rider,
                                        std::uint64_t d, const roadnet::RoadNetwork& net,
                                        double on_road_threshold_m = roadnet::kOnRoadThresholdM,
                                        std::uint64_t max_n = geometry::kDefaultMaxCircleN);

// Same, but candidates come from the p-norm curve |x|^p + |y|^p = d.
std::vector<PlanarPoint> predict_driver_pnorm(const roadnet::Zone& zone, const PlanarPoint& rider,
                                              int p, std::uint64_t d,
                                              const roadnet::RoadNetwork& net,
                                              double on_road_threshold_m =
                                                  roadnet::kOnRoadThresholdM);

// Runs predict_driver per driver independently and aggregates the
// statistics. Counts accumulate as integers; the only division happens once
// at the end.
AttackReport run_attack(const RideSnapshot& snapshot, const roadnet::RoadNetwork& net,
                        double on_road_threshold_m = roadnet::kOnRoadThresholdM);

AttackReport run_attack_pnorm(const RideSnapshot& snapshot, int p,
                              const roadnet::RoadNetwork& net,
                              double on_road_threshold_m = roadnet::kOnRoadThresholdM);

// Exact |dx|^p + |dy|^p for even p; throws ParameterTooLarge if the value
// does not fit 64 bits.
std::uint64_t pnorm_value(const PlanarPoint& a, const PlanarPoint& b, int p);

}  // namespace ridehail::attack
