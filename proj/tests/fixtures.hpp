#pragma once

// Shared test scenarios.

#include <string>
#include <vector>

#include "ridehail/attack.hpp"
#include "ridehail/roadnet.hpp"

namespace fixtures {

using ridehail::PlanarPoint;
using ridehail::roadnet::RoadNetwork;
using ridehail::roadnet::RoadSegment;
using ridehail::roadnet::Zone;

// The single-driver worked example: rider at the origin, driver at (4, 3),
// disclosed distance 25. The circle carries twelve lattice points; the road
// stubs below put exactly {(-4,3), (4,3), (5,0), (0,-5)} within 3 m of a
// road and keep the other eight strictly farther away, so the filtered
// prediction set has size 4 and the report reads avg = 4, exact = 0.
inline std::vector<RoadSegment> worked_example_segments() {
    return {
        {"east", {6, 2}, {9, 2}},      // covers (4,3) and (5,0), both at ~2.24 m
        {"west", {-6, 5}, {-9, 6}},    // covers (-4,3) at ~2.83 m
        {"south", {-1, -7}, {2, -8}},  // covers (0,-5) at ~2.21 m
    };
}

inline Zone worked_example_zone() { return {{-10, -10}, 20}; }

inline PlanarPoint worked_example_rider() { return {0, 0}; }
inline PlanarPoint worked_example_driver() { return {4, 3}; }

inline std::vector<PlanarPoint> worked_example_prediction() {
    return {{-4, 3}, {0, -5}, {4, 3}, {5, 0}};  // sorted
}

inline RoadNetwork worked_example_network() {
    return RoadNetwork::build(worked_example_segments());
}

inline std::string test_data_dir() { return RIDEHAIL_TEST_DATA_DIR; }

}  // namespace fixtures
