#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ridehail/planar.hpp"
#include "ridehail/roadnet.hpp"

namespace ridehail::matching {

// Endpoints lie in disconnected parts of the road graph.
struct Unreachable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Constant-speed travel: shortest path over the road graph, plus the time to
// reach the graph from an off-road point. A stand-in for a routing service
// that keeps the driver ordering structure while staying offline and
// deterministic.
struct TravelModel {
    double speed_mps = 8.33;  // ~30 km/h
    // Seconds to join the graph from off the road; unset means
    // off-graph distance / speed.
    std::optional<double> fixed_access_penalty_s;
};

// All travel times out of one origin: one shortest-path run, then O(1) per
// destination. travel_time() below is the two-point convenience form.
class TravelTimeField {
public:
    TravelTimeField(const roadnet::RoadNetwork& net, const PlanarPoint& origin,
                    const TravelModel& model = {});

    double seconds_to(const PlanarPoint& p) const;  // throws Unreachable

private:
    const roadnet::RoadNetwork* net_;
    TravelModel model_;
    roadnet::RoadEntry origin_entry_;
    double origin_access_s_ = 0.0;
    std::vector<double> node_dist_m_;  // from the origin's entry point
};

double travel_time(const roadnet::RoadNetwork& net, const PlanarPoint& from, const PlanarPoint& to,
                   const TravelModel& model = {});

enum class MatchMode { oride, mitigated };

struct AccuracyConfig {
    std::int64_t zone_side_m = 2000;
    int drivers_per_trial = 400;
    double radius_m = 50.0;  // obfuscation radius in mitigated mode
    int trials = 25;
    std::uint64_t seed = 1;
    std::string label = "accuracy";
    TravelModel model;
};

struct AccuracyTrial {
    int trial = 0;
    int selected_driver = 0;
    double t_selected_s = 0.0;  // time for the metric-chosen driver
    double t_best_s = 0.0;      // minimum over all drivers
    bool within_minute = false;
};

struct AccuracyReport {
    int trials = 0;
    double within_one_minute_pct = 0.0;
    std::vector<AccuracyTrial> rows;
};

// Per trial: a rider and `drivers_per_trial` on-road drivers in a random
// zone. The dispatcher picks the driver with the smallest squared Euclidean
// distance to the rider, measured on true locations (oride) or obfuscated
// ones (mitigated); the pick then drives from its true location. Counts the
// trials where the pick is within a minute of the fastest possible driver.
AccuracyReport evaluate_accuracy(const roadnet::RoadNetwork& net, const AccuracyConfig& cfg,
                                 MatchMode mode);

void write_accuracy_csv(const std::string& path, const AccuracyReport& report);

}  // namespace ridehail::matching
