#include "ridehail/roadnet.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "ridehail/projection.hpp"
#include "ridehail/rng.hpp"

using namespace ridehail;
using roadnet::RoadNetwork;
using roadnet::RoadSegment;
using roadnet::Zone;

namespace {

// Exhaustive scan over all segments; the reference the grid index must match.
double brute_distance(const RoadNetwork& net, const PlanarPoint& p) {
    double best = 1e300;
    for (const auto& s : net.segments()) {
        best = std::min(best, roadnet::point_segment_distance(p, s.a, s.b));
    }
    return best;
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE("roadnet") {

TEST_CASE("single segment network") {
    auto net = RoadNetwork::build({{"s1", {0, 0}, {100, 0}}});
    CHECK(net.min_x() == 0);
    CHECK(net.max_x() == 100);
    CHECK(net.min_y() == 0);
    CHECK(net.max_y() == 0);
    CHECK(net.graph().nodes.size() == 2);
    CHECK(net.graph().segment_length[0] == doctest::Approx(100.0));

    CHECK(net.distance_to_road({50, 3}) == doctest::Approx(3.0));
    CHECK(net.distance_to_road({150, 40}) == doctest::Approx(std::sqrt(50.0 * 50 + 40 * 40)));
    CHECK(net.distance_to_road({50, 0}) == 0.0);
}

TEST_CASE("build validation") {
    CHECK_THROWS_AS(RoadNetwork::build({}), roadnet::EmptyNetwork);
    CHECK_THROWS_AS(RoadNetwork::build({{"a", {0, 0}, {1, 0}}, {"a", {5, 5}, {9, 9}}}),
                    roadnet::InvalidSegment);
    CHECK_THROWS_AS(RoadNetwork::build({{"z", {7, 7}, {7, 7}}}), roadnet::InvalidSegment);
}

TEST_CASE("manhattan grid counts") {
    auto g10 = roadnet::generate_manhattan_grid(100, 10, 10);
    CHECK(g10.size() == 220);
    auto net = RoadNetwork::build(g10);
    CHECK(net.graph().nodes.size() == 121);

    CHECK(roadnet::generate_manhattan_grid(100, 2, 2).size() == 12);
    CHECK(roadnet::generate_manhattan_grid(100, 1, 1).size() == 4);
    CHECK_THROWS_AS(roadnet::generate_manhattan_grid(0, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(roadnet::generate_manhattan_grid(100, 0, 2), std::invalid_argument);
}

TEST_CASE("on-road membership is a closed boundary test") {
    auto net = RoadNetwork::build({{"s1", {0, 0}, {100, 0}}});
    CHECK(net.is_on_road({50, 3}, 3.0));
    CHECK_FALSE(net.is_on_road({50, 3}, 2.999));
    CHECK(net.is_on_road({50, 0}, 0.0));  // exactly on the segment
    CHECK(net.is_on_road({50, 3}));       // default threshold is 3 m

    CHECK(net.has_road_within({50, 49}, 50.0));
    CHECK_FALSE(net.has_road_within({50, 151}, 150.0));
    CHECK(net.has_road_within({50, 0}, 0.0));
    CHECK_FALSE(net.has_road_within({50, 1}, 0.0));
}

TEST_CASE("grid-accelerated distance equals exhaustive scan") {
    Rng rng(derive_seed(11, "roadnet-oracle"));
    // Random mid-size network with segments of varied orientation/length.
    std::vector<RoadSegment> segs;
    for (int i = 0; i < 1000; ++i) {
        PlanarPoint a{rng.next_int(0, 20000), rng.next_int(0, 20000)};
        PlanarPoint b{a.x + rng.next_int(-400, 400), a.y + rng.next_int(-400, 400)};
        if (a.x == b.x && a.y == b.y) b.x += 1;
        segs.push_back({"r" + std::to_string(i), a, b});
    }
    auto net = RoadNetwork::build(segs);
    for (int i = 0; i < 10000; ++i) {
        // Include points far outside the bounding box.
        const PlanarPoint p{rng.next_int(-5000, 25000), rng.next_int(-5000, 25000)};
        const double fast = net.distance_to_road(p);
        const double slow = brute_distance(net, p);
        CAPTURE(p.x);
        CAPTURE(p.y);
        REQUIRE(fast == doctest::Approx(slow).epsilon(1e-9));
    }
}

TEST_CASE("build is order-independent") {
    Rng rng(derive_seed(11, "roadnet-ordering"));
    auto segs = roadnet::generate_manhattan_grid(150, 6, 6);
    auto shuffled = segs;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
        std::swap(shuffled[i - 1], shuffled[rng.next_below(i)]);
    }
    auto n1 = RoadNetwork::build(segs);
    auto n2 = RoadNetwork::build(shuffled);
    for (int i = 0; i < 500; ++i) {
        const PlanarPoint p{rng.next_int(-100, 1000), rng.next_int(-100, 1000)};
        REQUIRE(n1.distance_to_road(p) == n2.distance_to_road(p));
        REQUIRE(n1.nearest(p).segment_index == n2.nearest(p).segment_index);
    }
}

TEST_CASE("sampled points are on road and inside the zone") {
    auto net = RoadNetwork::build(roadnet::generate_manhattan_grid(100, 10, 10));
    const Zone zone{{150, 150}, 500};
    Rng rng(derive_seed(11, "roadnet-sampling"));
    roadnet::ZoneRoadSampler sampler(net, zone);
    for (int i = 0; i < 2000; ++i) {
        const auto p = sampler.sample(rng);
        REQUIRE(zone.contains(p));
        REQUIRE(net.is_on_road(p, 3.0));
    }
}

TEST_CASE("sampling is length-weighted") {
    // Two disjoint segments, 100 m and 300 m; expect a 1:3 split.
    auto net = RoadNetwork::build({{"short", {0, 0}, {100, 0}}, {"long", {0, 500}, {300, 500}}});
    const Zone zone{{-10, -10}, 600};
    Rng rng(derive_seed(11, "roadnet-weights"));
    roadnet::ZoneRoadSampler sampler(net, zone);
    int on_short = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        if (sampler.sample(rng).y == 0) ++on_short;
    }
    // Chi-square with 1 dof against the 1:3 split; 6.63 is the 1% critical
    // value.
    const double expect_short = n * 0.25;
    const double expect_long = n * 0.75;
    const double chi2 = (on_short - expect_short) * (on_short - expect_short) / expect_short +
                        (n - on_short - expect_long) * (n - on_short - expect_long) / expect_long;
    CHECK(chi2 < 6.63);
}

TEST_CASE("zone without road") {
    auto net = RoadNetwork::build({{"s1", {0, 0}, {100, 0}}});
    const Zone empty{{5000, 5000}, 200};
    Rng rng(derive_seed(11, "roadnet-nozone"));
    CHECK_THROWS_AS((void)roadnet::sample_on_road(net, empty, rng), roadnet::NoRoadInZone);
}

TEST_CASE("csv ingest round-trips exactly") {
    const auto path = temp_path("ridehail_roads_fixture.csv");
    {
        std::ofstream out(path);
        out << "road_id,x1,y1,x2,y2\n";
        out << "a,0,0,100,0\n";
        out << "b,-50,20,80,-470\n";
    }
    auto segs = roadnet::ingest(path, roadnet::RoadFileFormat::csv);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].id == "a");
    CHECK(segs[0].a == PlanarPoint{0, 0});
    CHECK(segs[0].b == PlanarPoint{100, 0});
    CHECK(segs[1].id == "b");
    CHECK(segs[1].a == PlanarPoint{-50, 20});
    CHECK(segs[1].b == PlanarPoint{80, -470});

    // write + re-ingest is the identity
    const auto path2 = temp_path("ridehail_roads_fixture2.csv");
    roadnet::write_segments_csv(path2, segs);
    auto again = roadnet::ingest(path2, roadnet::RoadFileFormat::csv);
    REQUIRE(again.size() == segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        CHECK(again[i].id == segs[i].id);
        CHECK(again[i].a == segs[i].a);
        CHECK(again[i].b == segs[i].b);
    }
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("malformed csv rows are reported with their row number") {
    const auto path = temp_path("ridehail_roads_bad.csv");
    {
        std::ofstream out(path);
        out << "road_id,x1,y1,x2,y2\n";
        out << "a,0,0,100,0\n";
        out << "b,0,zero,100,0\n";
    }
    try {
        roadnet::ingest(path, roadnet::RoadFileFormat::csv);
        FAIL("expected ParseError");
    } catch (const roadnet::ParseError& e) {
        CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
    std::remove(path.c_str());
}

TEST_CASE("geojson ingest projects against the reference fixtures") {
    // One street through the NYC fixture point; the projected endpoint must
    // land on the frozen UTM value for (40.7128, -74.0060): (583959, 4507351).
    const auto path = temp_path("ridehail_street.geojson");
    {
        std::ofstream out(path);
        out << R"({"type":"FeatureCollection","features":[
              {"type":"Feature","properties":{"id":"broad"},
               "geometry":{"type":"LineString","coordinates":[
                 [-74.0060,40.7128],[-74.0100,40.7150],[-74.0140,40.7161]]}}]})";
    }
    auto segs = roadnet::ingest(path, roadnet::RoadFileFormat::geojson);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].id == "broad:0");
    CHECK(segs[0].a.x == 583959);
    CHECK(segs[0].a.y == 4507351);
    CHECK(segs[0].a.zone == 18);
    CHECK(segs[1].a == segs[0].b);
    std::remove(path.c_str());
}

TEST_CASE("geojson spanning far-apart zones is rejected") {
    const auto path = temp_path("ridehail_span.geojson");
    {
        std::ofstream out(path);
        out << R"({"type":"FeatureCollection","features":[
              {"type":"Feature","properties":{},
               "geometry":{"type":"LineString","coordinates":[
                 [-74.0,40.7],[-70.0,41.0]]}}]})";
    }
    CHECK_THROWS_AS(roadnet::ingest(path, roadnet::RoadFileFormat::geojson),
                    roadnet::MixedUtmZones);
    std::remove(path.c_str());
}

}  // TEST_SUITE
