#include "ridehail/matching.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>

#include "ridehail/csv.hpp"
#include "ridehail/harness.hpp"
#include "ridehail/mitigation.hpp"

namespace ridehail::matching {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double access_seconds(const TravelModel& model, double off_graph_m) {
    return model.fixed_access_penalty_s ? *model.fixed_access_penalty_s
                                        : off_graph_m / model.speed_mps;
}

}  // namespace

TravelTimeField::TravelTimeField(const roadnet::RoadNetwork& net, const PlanarPoint& origin,
                                 const TravelModel& model)
    : net_(&net), model_(model) {
    if (model.speed_mps <= 0.0) throw std::invalid_argument("travel model: speed must be > 0");
    origin_entry_ = net.nearest(origin);
    origin_access_s_ = access_seconds(model, origin_entry_.distance_m);

    const auto& g = net.graph();
    node_dist_m_.assign(g.nodes.size(), kInf);

    // Dijkstra seeded at both endpoints of the entry segment, at the
    // along-segment distances from the entry point.
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    const auto seg = origin_entry_.segment_index;
    const double len = g.segment_length[seg];
    const auto ua = g.segment_node_a[seg];
    const auto ub = g.segment_node_b[seg];
    const double da = origin_entry_.t * len;
    const double db = (1.0 - origin_entry_.t) * len;
    node_dist_m_[ua] = da;
    node_dist_m_[ub] = std::min(node_dist_m_[ub], db);
    heap.push({node_dist_m_[ua], ua});
    heap.push({node_dist_m_[ub], ub});

    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > node_dist_m_[u]) continue;
        for (std::uint32_t e = g.adjacency_offsets[u]; e < g.adjacency_offsets[u + 1]; ++e) {
            const auto& half = g.adjacency[e];
            const double nd = d + g.segment_length[half.segment];
            if (nd < node_dist_m_[half.to]) {
                node_dist_m_[half.to] = nd;
                heap.push({nd, half.to});
            }
        }
    }
}

double TravelTimeField::seconds_to(const PlanarPoint& p) const {
    const auto& g = net_->graph();
    const auto entry = net_->nearest(p);
    const auto seg = entry.segment_index;
    const double len = g.segment_length[seg];
    const auto ua = g.segment_node_a[seg];
    const auto ub = g.segment_node_b[seg];

    double best = std::min(node_dist_m_[ua] + entry.t * len,
                           node_dist_m_[ub] + (1.0 - entry.t) * len);
    if (seg == origin_entry_.segment_index) {
        best = std::min(best, std::fabs(entry.t - origin_entry_.t) * len);
    }
    if (!std::isfinite(best)) {
        throw Unreachable("travel_time: endpoints lie in disconnected road components");
    }
    return best / model_.speed_mps + origin_access_s_ + access_seconds(model_, entry.distance_m);
}

double travel_time(const roadnet::RoadNetwork& net, const PlanarPoint& from, const PlanarPoint& to,
                   const TravelModel& model) {
    return TravelTimeField(net, from, model).seconds_to(to);
}

AccuracyReport evaluate_accuracy(const roadnet::RoadNetwork& net, const AccuracyConfig& cfg,
                                 MatchMode mode) {
    if (cfg.trials < 1) throw std::invalid_argument("evaluate_accuracy: trials must be >= 1");
    if (cfg.drivers_per_trial < 1)
        throw std::invalid_argument("evaluate_accuracy: need at least one driver");

    AccuracyReport report;
    report.trials = cfg.trials;
    int within = 0;

    for (int t = 0; t < cfg.trials; ++t) {
        Rng zone_rng(derive_seed(cfg.seed, cfg.label + "/zone", t));
        Rng rider_rng(derive_seed(cfg.seed, cfg.label + "/rider", t));
        Rng driver_rng(derive_seed(cfg.seed, cfg.label + "/driver", t));
        Rng obf_rng(derive_seed(cfg.seed, cfg.label + "/obfuscate", t));

        const auto zone = harness::sample_zone(net, cfg.zone_side_m, zone_rng);
        const PlanarPoint rider{rider_rng.next_int(zone.min_corner.x, zone.max_x()),
                                rider_rng.next_int(zone.min_corner.y, zone.max_y()),
                                zone.min_corner.zone};

        roadnet::ZoneRoadSampler sampler(net, zone);
        std::vector<PlanarPoint> drivers(cfg.drivers_per_trial);
        for (auto& d : drivers) d = sampler.sample(driver_rng);

        // What the dispatcher sees.
        std::vector<PlanarPoint> disclosed = drivers;
        if (mode == MatchMode::mitigated) {
            for (auto& d : disclosed) d = mitigation::obfuscate(d, {cfg.radius_m}, obf_rng);
        }

        int selected = 0;
        std::int64_t best_metric = std::numeric_limits<std::int64_t>::max();
        for (int i = 0; i < cfg.drivers_per_trial; ++i) {
            const auto m = squared_distance(rider, disclosed[i]);
            if (m < best_metric) {  // ties go to the lowest index
                best_metric = m;
                selected = i;
            }
        }

        const TravelTimeField field(net, rider, cfg.model);
        double t_best = kInf;
        double t_selected = 0.0;
        for (int i = 0; i < cfg.drivers_per_trial; ++i) {
            const double ti = field.seconds_to(drivers[i]);  // drives from the true spot
            if (i == selected) t_selected = ti;
            t_best = std::min(t_best, ti);
        }

        AccuracyTrial row;
        row.trial = t;
        row.selected_driver = selected;
        row.t_selected_s = t_selected;
        row.t_best_s = t_best;
        row.within_minute = t_selected - t_best <= 60.0;
        if (row.within_minute) ++within;
        report.rows.push_back(row);
    }

    report.within_one_minute_pct = 100.0 * static_cast<double>(within) /
                                   static_cast<double>(cfg.trials);
    return report;
}

void write_accuracy_csv(const std::string& path, const AccuracyReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "trial,selected_driver,t_selected_s,t_best_s,within_minute\n";
    for (const auto& r : report.rows) {
        out << r.trial << ',' << r.selected_driver << ',' << csv::fmt_double(r.t_selected_s) << ','
            << csv::fmt_double(r.t_best_s) << ',' << (r.within_minute ? 1 : 0) << '\n';
    }
}

}  // namespace ridehail::matching
