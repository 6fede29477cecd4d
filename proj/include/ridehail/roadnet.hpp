#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ridehail/planar.hpp"
#include "ridehail/rng.hpp"

namespace ridehail::roadnet {

struct EmptyNetwork : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidSegment : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NoRoadInZone : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MixedUtmZones : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Drivers count as "on road" within this many meters of a centerline: two
// 3 m lanes, measured from the middle.
inline constexpr double kOnRoadThresholdM = 3.0;

struct RoadSegment {
    std::string id;
    PlanarPoint a;
    PlanarPoint b;
};

// Axis-aligned square region; membership is closed (boundary points are
// inside).
struct Zone {
    PlanarPoint min_corner;
    std::int64_t side_m = 0;

    bool contains(const PlanarPoint& p) const {
        return p.x >= min_corner.x && p.x <= min_corner.x + side_m && p.y >= min_corner.y &&
               p.y <= min_corner.y + side_m;
    }
    std::int64_t max_x() const { return min_corner.x + side_m; }
    std::int64_t max_y() const { return min_corner.y + side_m; }
    // The same square with `margin_m` shaved off every side; side collapses
    // to zero if the margin eats the whole zone.
    Zone shrunk(std::int64_t margin_m) const {
        Zone z{{min_corner.x + margin_m, min_corner.y + margin_m, min_corner.zone},
               side_m - 2 * margin_m};
        if (z.side_m < 0) z.side_m = 0;
        return z;
    }
};

// Nearest point of the network to a query point: which segment, the position
// along it (t in [0,1]), and the distance.
struct RoadEntry {
    std::size_t segment_index = 0;
    double t = 0.0;
    double distance_m = std::numeric_limits<double>::infinity();
};

// Endpoint graph of the network. Endpoints with identical integer
// coordinates are one node (coordinates are whole meters, so the 0.5 m snap
// rule degenerates to exact equality).
struct RoadGraph {
    struct HalfEdge {
        std::uint32_t to;       // node index
        std::uint32_t segment;  // segment index carrying the edge
    };
    std::vector<PlanarPoint> nodes;
    std::vector<std::uint32_t> adjacency_offsets;  // CSR per node
    std::vector<HalfEdge> adjacency;
    std::vector<std::uint32_t> segment_node_a;  // per segment
    std::vector<std::uint32_t> segment_node_b;
    std::vector<double> segment_length;
    std::vector<std::uint32_t> node_component;
};

// Immutable road network with a uniform grid index. The grid only
// accelerates queries; every distance is the exact minimum point-to-segment
// distance over all segments. Safe for any number of concurrent readers.
class RoadNetwork {
public:
    // Segments are canonically sorted by id before indexing, so identical
    // multisets build identical networks regardless of input order.
    static RoadNetwork build(std::vector<RoadSegment> segments, double cell_size_m = 250.0);

    double distance_to_road(const PlanarPoint& p) const { return nearest(p).distance_m; }
    RoadEntry nearest(const PlanarPoint& p) const;

    bool is_on_road(const PlanarPoint& p, double threshold_m = kOnRoadThresholdM) const {
        return distance_to_road(p) <= threshold_m;
    }
    // The mitigation-era filter: some road within r_m of p. Same predicate
    // as is_on_road, kept as its own name because it answers a different
    // question (plausible obfuscated location, not on-road membership).
    bool has_road_within(const PlanarPoint& p, double r_m) const {
        return distance_to_road(p) <= r_m;
    }

    const std::vector<RoadSegment>& segments() const { return segments_; }
    const RoadGraph& graph() const { return graph_; }

    std::int64_t min_x() const { return min_x_; }
    std::int64_t min_y() const { return min_y_; }
    std::int64_t max_x() const { return max_x_; }
    std::int64_t max_y() const { return max_y_; }

private:
    RoadNetwork() = default;

    std::vector<RoadSegment> segments_;
    RoadGraph graph_;

    // bounding box
    std::int64_t min_x_ = 0, min_y_ = 0, max_x_ = 0, max_y_ = 0;

    // uniform grid, CSR layout
    double cell_size_ = 250.0;
    int nx_ = 1, ny_ = 1;
    std::vector<std::uint32_t> cell_offsets_;
    std::vector<std::uint32_t> cell_items_;

    void scan_cell(const PlanarPoint& p, int cx, int cy, RoadEntry& best) const;
};

// Exact point-to-segment distance in doubles (coordinates are well inside
// the exactly-representable integer range).
double point_segment_distance(const PlanarPoint& p, const PlanarPoint& a, const PlanarPoint& b);

// Samples points on the in-zone portion of a network: length-weighted over
// the clipped segments, rounded to whole meters, resampled until the rounded
// point is on road and in the zone. Construction clips once; sampling is
// cheap after that. Throws NoRoadInZone if the zone touches no road.
class ZoneRoadSampler {
public:
    ZoneRoadSampler(const RoadNetwork& net, const Zone& zone);
    PlanarPoint sample(Rng& rng, int max_attempts = 1000000) const;
    double road_length_m() const { return total_len_; }

private:
    struct Piece {
        std::uint32_t segment;
        double t0, t1;
        double cumulative_len;
    };
    const RoadNetwork* net_;
    Zone zone_;
    std::vector<Piece> pieces_;
    double total_len_ = 0.0;
};

// One-shot convenience wrapper around ZoneRoadSampler.
PlanarPoint sample_on_road(const RoadNetwork& net, const Zone& zone, Rng& rng,
                           int max_attempts = 1000000);

// Axis-aligned street grid: (rows+1) horizontals and (cols+1) verticals,
// split into unit blocks so every intersection is a graph node.
std::vector<RoadSegment> generate_manhattan_grid(std::int64_t spacing_m, int rows, int cols,
                                                 PlanarPoint origin = {});

enum class RoadFileFormat { csv, geojson };

// Reads road data. CSV rows are planar segments taken verbatim
// (road_id,x1,y1,x2,y2). GeoJSON LineStrings are geodetic and run through
// the projection, pinned to the zone of the data's centroid.
std::vector<RoadSegment> ingest(const std::string& path, RoadFileFormat format);

void write_segments_csv(const std::string& path, const std::vector<RoadSegment>& segments);

}  // namespace ridehail::roadnet
