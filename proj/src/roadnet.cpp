#include "ridehail/roadnet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "ridehail/projection.hpp"

namespace ridehail::roadnet {

namespace {

struct PointHash {
    std::size_t operator()(const PlanarPoint& p) const {
        std::uint64_t h = static_cast<std::uint64_t>(p.x) * 0x9e3779b97f4a7c15ull;
        h ^= static_cast<std::uint64_t>(p.y) + 0x7f4a7c159e3779b9ull + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

double segment_length_m(const RoadSegment& s) {
    return std::sqrt(static_cast<double>(squared_distance(s.a, s.b)));
}

// Distance from p to the axis-aligned rectangle [x0,x1]x[y0,y1].
double point_rect_distance(double px, double py, double x0, double y0, double x1, double y1) {
    const double dx = px < x0 ? x0 - px : (px > x1 ? px - x1 : 0.0);
    const double dy = py < y0 ? y0 - py : (py > y1 ? py - y1 : 0.0);
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

double point_segment_distance(const PlanarPoint& p, const PlanarPoint& a, const PlanarPoint& b) {
    // All inputs are integers well below 2^53, so the products below are
    // exact doubles. In particular a point exactly on the segment gives
    // cross == 0 and distance exactly 0.0, which the threshold-0 road
    // predicates rely on.
    const double abx = static_cast<double>(b.x - a.x), aby = static_cast<double>(b.y - a.y);
    const double apx = static_cast<double>(p.x - a.x), apy = static_cast<double>(p.y - a.y);
    const double len2 = abx * abx + aby * aby;
    const double u = apx * abx + apy * aby;
    if (u <= 0.0) return std::hypot(apx, apy);
    if (u >= len2) {
        return std::hypot(static_cast<double>(p.x - b.x), static_cast<double>(p.y - b.y));
    }
    const double cross = abx * apy - aby * apx;
    return std::fabs(cross) / std::sqrt(len2);
}

RoadNetwork RoadNetwork::build(std::vector<RoadSegment> segments, double cell_size_m) {
    if (segments.empty()) throw EmptyNetwork("build: no segments");
    if (cell_size_m <= 0.0) throw std::invalid_argument("build: cell size must be positive");

    std::sort(segments.begin(), segments.end(),
              [](const RoadSegment& l, const RoadSegment& r) { return l.id < r.id; });
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        if (s.a.x == s.b.x && s.a.y == s.b.y) {
            throw InvalidSegment("build: segment '" + s.id + "' has zero length");
        }
        if (i > 0 && segments[i - 1].id == s.id) {
            throw InvalidSegment("build: duplicate segment id '" + s.id + "'");
        }
    }

    RoadNetwork net;
    net.segments_ = std::move(segments);
    net.cell_size_ = cell_size_m;

    net.min_x_ = net.max_x_ = net.segments_[0].a.x;
    net.min_y_ = net.max_y_ = net.segments_[0].a.y;
    for (const auto& s : net.segments_) {
        for (const auto* p : {&s.a, &s.b}) {
            net.min_x_ = std::min(net.min_x_, p->x);
            net.max_x_ = std::max(net.max_x_, p->x);
            net.min_y_ = std::min(net.min_y_, p->y);
            net.max_y_ = std::max(net.max_y_, p->y);
        }
    }

    // Grid sized to the bounding box; cap the cell count so degenerate maps
    // (one huge sparse extent) do not explode memory.
    const double width = static_cast<double>(net.max_x_ - net.min_x_) + 1.0;
    const double height = static_cast<double>(net.max_y_ - net.min_y_) + 1.0;
    double cell = cell_size_m;
    auto dims = [&](double c) {
        return std::pair<int, int>{static_cast<int>(width / c) + 1,
                                   static_cast<int>(height / c) + 1};
    };
    while (true) {
        auto [nx, ny] = dims(cell);
        if (static_cast<std::int64_t>(nx) * ny <= 4'000'000) {
            net.nx_ = nx;
            net.ny_ = ny;
            break;
        }
        cell *= 2.0;
    }
    net.cell_size_ = cell;

    // CSR fill: count, prefix-sum, place. Segments are registered in every
    // cell their bounding box overlaps.
    const auto cell_range = [&](const RoadSegment& s) {
        const auto [lo_x, hi_x] = std::minmax(s.a.x, s.b.x);
        const auto [lo_y, hi_y] = std::minmax(s.a.y, s.b.y);
        const int cx0 = static_cast<int>((lo_x - net.min_x_) / cell);
        const int cx1 = static_cast<int>((hi_x - net.min_x_) / cell);
        const int cy0 = static_cast<int>((lo_y - net.min_y_) / cell);
        const int cy1 = static_cast<int>((hi_y - net.min_y_) / cell);
        return std::array<int, 4>{cx0, cx1, cy0, cy1};
    };

    const std::size_t cell_count = static_cast<std::size_t>(net.nx_) * net.ny_;
    net.cell_offsets_.assign(cell_count + 1, 0);
    for (const auto& s : net.segments_) {
        const auto [cx0, cx1, cy0, cy1] = cell_range(s);
        for (int cy = cy0; cy <= cy1; ++cy)
            for (int cx = cx0; cx <= cx1; ++cx)
                ++net.cell_offsets_[static_cast<std::size_t>(cy) * net.nx_ + cx + 1];
    }
    for (std::size_t i = 1; i <= cell_count; ++i) net.cell_offsets_[i] += net.cell_offsets_[i - 1];
    net.cell_items_.resize(net.cell_offsets_.back());
    std::vector<std::uint32_t> cursor(net.cell_offsets_.begin(), net.cell_offsets_.end() - 1);
    for (std::uint32_t si = 0; si < net.segments_.size(); ++si) {
        const auto [cx0, cx1, cy0, cy1] = cell_range(net.segments_[si]);
        for (int cy = cy0; cy <= cy1; ++cy)
            for (int cx = cx0; cx <= cx1; ++cx)
                net.cell_items_[cursor[static_cast<std::size_t>(cy) * net.nx_ + cx]++] = si;
    }

    // Endpoint graph.
    auto& g = net.graph_;
    std::unordered_map<PlanarPoint, std::uint32_t, PointHash> node_of;
    auto intern = [&](const PlanarPoint& p) {
        auto [it, inserted] = node_of.try_emplace(p, static_cast<std::uint32_t>(g.nodes.size()));
        if (inserted) g.nodes.push_back(p);
        return it->second;
    };
    g.segment_node_a.reserve(net.segments_.size());
    g.segment_node_b.reserve(net.segments_.size());
    g.segment_length.reserve(net.segments_.size());
    for (const auto& s : net.segments_) {
        g.segment_node_a.push_back(intern(s.a));
        g.segment_node_b.push_back(intern(s.b));
        g.segment_length.push_back(segment_length_m(s));
    }
    g.adjacency_offsets.assign(g.nodes.size() + 1, 0);
    for (std::uint32_t si = 0; si < net.segments_.size(); ++si) {
        ++g.adjacency_offsets[g.segment_node_a[si] + 1];
        ++g.adjacency_offsets[g.segment_node_b[si] + 1];
    }
    for (std::size_t i = 1; i < g.adjacency_offsets.size(); ++i)
        g.adjacency_offsets[i] += g.adjacency_offsets[i - 1];
    g.adjacency.resize(g.adjacency_offsets.back());
    std::vector<std::uint32_t> acur(g.adjacency_offsets.begin(), g.adjacency_offsets.end() - 1);
    for (std::uint32_t si = 0; si < net.segments_.size(); ++si) {
        const auto u = g.segment_node_a[si];
        const auto v = g.segment_node_b[si];
        g.adjacency[acur[u]++] = {v, si};
        g.adjacency[acur[v]++] = {u, si};
    }

    // Connected components by BFS.
    g.node_component.assign(g.nodes.size(), 0);
    std::vector<char> seen(g.nodes.size(), 0);
    std::vector<std::uint32_t> queue;
    std::uint32_t comp = 0;
    for (std::uint32_t start = 0; start < g.nodes.size(); ++start) {
        if (seen[start]) continue;
        queue.assign(1, start);
        seen[start] = 1;
        while (!queue.empty()) {
            const auto u = queue.back();
            queue.pop_back();
            g.node_component[u] = comp;
            for (std::uint32_t e = g.adjacency_offsets[u]; e < g.adjacency_offsets[u + 1]; ++e) {
                const auto v = g.adjacency[e].to;
                if (!seen[v]) {
                    seen[v] = 1;
                    queue.push_back(v);
                }
            }
        }
        ++comp;
    }

    return net;
}

void RoadNetwork::scan_cell(const PlanarPoint& p, int cx, int cy, RoadEntry& best) const {
    const std::size_t ci = static_cast<std::size_t>(cy) * nx_ + cx;
    for (std::uint32_t k = cell_offsets_[ci]; k < cell_offsets_[ci + 1]; ++k) {
        const std::uint32_t si = cell_items_[k];
        const auto& s = segments_[si];
        const double d = point_segment_distance(p, s.a, s.b);
        if (d < best.distance_m) {
            const double abx = static_cast<double>(s.b.x - s.a.x);
            const double aby = static_cast<double>(s.b.y - s.a.y);
            const double apx = static_cast<double>(p.x - s.a.x);
            const double apy = static_cast<double>(p.y - s.a.y);
            const double t = (apx * abx + apy * aby) / (abx * abx + aby * aby);
            best = {si, std::clamp(t, 0.0, 1.0), d};
        }
    }
}

RoadEntry RoadNetwork::nearest(const PlanarPoint& p) const {
    // Expanding Chebyshev rings around the query's (clamped) cell. Any cell
    // in ring r is at least (r-1)*cell_size away, so once the current best
    // beats that bound the scan is complete and exact.
    const double px = static_cast<double>(p.x);
    const double py = static_cast<double>(p.y);
    int cx = static_cast<int>((px - static_cast<double>(min_x_)) / cell_size_);
    int cy = static_cast<int>((py - static_cast<double>(min_y_)) / cell_size_);
    cx = std::clamp(cx, 0, nx_ - 1);
    cy = std::clamp(cy, 0, ny_ - 1);

    const int max_ring = std::max({cx, nx_ - 1 - cx, cy, ny_ - 1 - cy});
    RoadEntry best;

    auto consider = [&](int x, int y) {
        if (x < 0 || x >= nx_ || y < 0 || y >= ny_) return;
        const double rect = point_rect_distance(
            px, py, static_cast<double>(min_x_) + x * cell_size_,
            static_cast<double>(min_y_) + y * cell_size_,
            static_cast<double>(min_x_) + (x + 1) * cell_size_,
            static_cast<double>(min_y_) + (y + 1) * cell_size_);
        if (rect > best.distance_m) return;
        scan_cell(p, x, y, best);
    };

    for (int r = 0; r <= max_ring; ++r) {
        if (best.distance_m < static_cast<double>(r - 1) * cell_size_) break;
        if (r == 0) {
            consider(cx, cy);
            continue;
        }
        for (int x = cx - r; x <= cx + r; ++x) {
            consider(x, cy - r);
            consider(x, cy + r);
        }
        for (int y = cy - r + 1; y <= cy + r - 1; ++y) {
            consider(cx - r, y);
            consider(cx + r, y);
        }
    }
    return best;
}

ZoneRoadSampler::ZoneRoadSampler(const RoadNetwork& net, const Zone& zone)
    : net_(&net), zone_(zone) {
    const double zx0 = static_cast<double>(zone.min_corner.x);
    const double zy0 = static_cast<double>(zone.min_corner.y);
    const double zx1 = static_cast<double>(zone.max_x());
    const double zy1 = static_cast<double>(zone.max_y());

    const auto& segs = net.segments();
    for (std::uint32_t si = 0; si < segs.size(); ++si) {
        const auto& s = segs[si];
        const double ax = static_cast<double>(s.a.x), ay = static_cast<double>(s.a.y);
        const double dx = static_cast<double>(s.b.x - s.a.x);
        const double dy = static_cast<double>(s.b.y - s.a.y);
        double t0 = 0.0, t1 = 1.0;
        bool ok = true;
        // Liang-Barsky clip against each side.
        const double pq[4][2] = {{-dx, ax - zx0}, {dx, zx1 - ax}, {-dy, ay - zy0}, {dy, zy1 - ay}};
        for (const auto& [pi, qi] : pq) {
            if (pi == 0.0) {
                if (qi < 0.0) {
                    ok = false;
                    break;
                }
            } else {
                const double t = qi / pi;
                if (pi < 0.0) {
                    t0 = std::max(t0, t);
                } else {
                    t1 = std::min(t1, t);
                }
            }
        }
        if (!ok || t0 >= t1) continue;  // outside, or degenerate point touch
        const double len = (t1 - t0) * segment_length_m(s);
        if (len <= 0.0) continue;
        total_len_ += len;
        pieces_.push_back({si, t0, t1, total_len_});
    }
    if (pieces_.empty()) {
        throw NoRoadInZone("sample_on_road: zone has no road");
    }
}

PlanarPoint ZoneRoadSampler::sample(Rng& rng, int max_attempts) const {
    const auto& segs = net_->segments();
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        const double u = rng.next_double() * total_len_;
        auto it = std::lower_bound(pieces_.begin(), pieces_.end(), u,
                                   [](const Piece& pc, double v) { return pc.cumulative_len < v; });
        if (it == pieces_.end()) --it;
        const auto& s = segs[it->segment];
        const double t = it->t0 + rng.next_double() * (it->t1 - it->t0);
        PlanarPoint q{
            std::llround(static_cast<double>(s.a.x) + t * static_cast<double>(s.b.x - s.a.x)),
            std::llround(static_cast<double>(s.a.y) + t * static_cast<double>(s.b.y - s.a.y)),
            s.a.zone};
        if (zone_.contains(q) && net_->is_on_road(q)) return q;
    }
    throw NoRoadInZone("sample_on_road: exhausted rejection budget");
}

PlanarPoint sample_on_road(const RoadNetwork& net, const Zone& zone, Rng& rng, int max_attempts) {
    return ZoneRoadSampler(net, zone).sample(rng, max_attempts);
}

std::vector<RoadSegment> generate_manhattan_grid(std::int64_t spacing_m, int rows, int cols,
                                                 PlanarPoint origin) {
    if (spacing_m <= 0) throw std::invalid_argument("generate_manhattan_grid: spacing must be > 0");
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("generate_manhattan_grid: rows and cols must be >= 1");

    std::vector<RoadSegment> out;
    out.reserve(static_cast<std::size_t>(rows + 1) * cols + static_cast<std::size_t>(cols + 1) * rows);
    auto at = [&](int cx, int cy) {
        return PlanarPoint{origin.x + cx * spacing_m, origin.y + cy * spacing_m, origin.zone};
    };
    for (int r = 0; r <= rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            out.push_back({"h" + std::to_string(r) + "_" + std::to_string(c), at(c, r), at(c + 1, r)});
        }
    }
    for (int c = 0; c <= cols; ++c) {
        for (int r = 0; r < rows; ++r) {
            out.push_back({"v" + std::to_string(c) + "_" + std::to_string(r), at(c, r), at(c, r + 1)});
        }
    }
    return out;
}

namespace {

std::vector<RoadSegment> ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("ingest: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ParseError("ingest: '" + path + "' is empty");
    // Tolerate a UTF-8 BOM and trailing CR.
    if (line.size() >= 3 && line.compare(0, 3, "\xef\xbb\xbf") == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "road_id,x1,y1,x2,y2") {
        throw ParseError("ingest: '" + path + "' row 1: expected header road_id,x1,y1,x2,y2");
    }

    std::vector<RoadSegment> out;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string id, f1, f2, f3, f4, extra;
        if (!std::getline(ss, id, ',') || !std::getline(ss, f1, ',') ||
            !std::getline(ss, f2, ',') || !std::getline(ss, f3, ',') || !std::getline(ss, f4)) {
            throw ParseError("ingest: '" + path + "' row " + std::to_string(row) +
                             ": expected 5 fields");
        }
        RoadSegment s;
        s.id = id;
        try {
            std::size_t pos = 0;
            s.a.x = std::stoll(f1, &pos);
            if (pos != f1.size()) throw std::invalid_argument(f1);
            s.a.y = std::stoll(f2, &pos);
            if (pos != f2.size()) throw std::invalid_argument(f2);
            s.b.x = std::stoll(f3, &pos);
            if (pos != f3.size()) throw std::invalid_argument(f3);
            s.b.y = std::stoll(f4, &pos);
            if (pos != f4.size()) throw std::invalid_argument(f4);
        } catch (const std::exception&) {
            throw ParseError("ingest: '" + path + "' row " + std::to_string(row) +
                             ": non-integer coordinate");
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<RoadSegment> ingest_geojson(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("ingest: cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ParseError("ingest: '" + path + "': " + e.what());
    }
    if (doc.value("type", "") != "FeatureCollection" || !doc.contains("features")) {
        throw ParseError("ingest: '" + path + "': expected a GeoJSON FeatureCollection");
    }

    struct Line {
        std::string id;
        std::vector<projection::GeoPoint> points;
    };
    std::vector<Line> lines;
    double lon_min = 1e9, lon_max = -1e9, lon_sum = 0.0;
    std::size_t vertex_count = 0;

    std::size_t fi = 0;
    for (const auto& feature : doc["features"]) {
        ++fi;
        const auto where = "feature " + std::to_string(fi);
        if (!feature.contains("geometry") || feature["geometry"].is_null()) {
            throw ParseError("ingest: '" + path + "' " + where + ": missing geometry");
        }
        const auto& geom = feature["geometry"];
        if (geom.value("type", "") != "LineString") {
            throw ParseError("ingest: '" + path + "' " + where + ": only LineString supported, got '" +
                             geom.value("type", "?") + "'");
        }
        Line ln;
        ln.id = "f" + std::to_string(fi);
        if (feature.contains("properties") && feature["properties"].is_object()) {
            const auto& props = feature["properties"];
            if (props.contains("id")) {
                ln.id = props["id"].is_string() ? props["id"].get<std::string>()
                                                : props["id"].dump();
            }
        }
        const auto& coords = geom["coordinates"];
        if (!coords.is_array() || coords.size() < 2) {
            throw ParseError("ingest: '" + path + "' " + where + ": LineString needs >= 2 points");
        }
        for (const auto& c : coords) {
            if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) {
                throw ParseError("ingest: '" + path + "' " + where + ": bad coordinate pair");
            }
            const double lon = c[0].get<double>();
            const double lat = c[1].get<double>();
            ln.points.push_back({lat, lon});
            lon_min = std::min(lon_min, lon);
            lon_max = std::max(lon_max, lon);
            lon_sum += lon;
            ++vertex_count;
        }
        lines.push_back(std::move(ln));
    }
    if (lines.empty()) throw ParseError("ingest: '" + path + "': no LineString features");

    // Pin everything to the zone of the centroid. A city extract may
    // straddle one zone boundary; anything wider than a degree of longitude
    // genuinely spans zones and is rejected.
    const double lon_centroid = lon_sum / static_cast<double>(vertex_count);
    const int zone = projection::utm_zone_of(lon_centroid);
    bool all_same_zone = true;
    for (const auto& ln : lines)
        for (const auto& g : ln.points)
            if (projection::utm_zone_of(g.longitude_deg) != zone) all_same_zone = false;
    if (!all_same_zone && lon_max - lon_min > 1.0) {
        throw MixedUtmZones("ingest: '" + path + "' spans UTM zones (lon " +
                            std::to_string(lon_min) + ".." + std::to_string(lon_max) + ")");
    }

    std::vector<RoadSegment> out;
    for (const auto& ln : lines) {
        std::vector<PlanarPoint> pts;
        pts.reserve(ln.points.size());
        for (const auto& g : ln.points) pts.push_back(projection::project(g, zone));
        int k = 0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            if (pts[i] == pts[i + 1]) continue;  // vertices closer than a meter collapse
            out.push_back({ln.id + ":" + std::to_string(k++), pts[i], pts[i + 1]});
        }
    }
    if (out.empty()) throw ParseError("ingest: '" + path + "': all segments collapsed");
    return out;
}

}  // namespace

std::vector<RoadSegment> ingest(const std::string& path, RoadFileFormat format) {
    return format == RoadFileFormat::csv ? ingest_csv(path) : ingest_geojson(path);
}

void write_segments_csv(const std::string& path, const std::vector<RoadSegment>& segments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "road_id,x1,y1,x2,y2\n";
    for (const auto& s : segments) {
        out << s.id << ',' << s.a.x << ',' << s.a.y << ',' << s.b.x << ',' << s.b.y << '\n';
    }
}

}  // namespace ridehail::roadnet
