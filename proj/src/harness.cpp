#include "ridehail/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "ridehail/attack.hpp"
#include "ridehail/csv.hpp"
#include "ridehail/mitigation.hpp"

namespace ridehail::harness {

namespace {

PlanarPoint uniform_point_in(const roadnet::Zone& z, Rng& rng) {
    return {rng.next_int(z.min_corner.x, z.max_x()), rng.next_int(z.min_corner.y, z.max_y()),
            z.min_corner.zone};
}

bool zone_has_road(const roadnet::RoadNetwork& net, const roadnet::Zone& z) {
    try {
        roadnet::ZoneRoadSampler probe(net, z);
        return true;
    } catch (const roadnet::NoRoadInZone&) {
        return false;
    }
}

const char* mode_name(PipelineMode m) {
    switch (m) {
        case PipelineMode::attack: return "attack";
        case PipelineMode::pnorm: return "pnorm";
        case PipelineMode::mitigated: return "mitigated";
    }
    return "?";
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

PlanarPoint parse_point(const std::string& value) {
    const auto parts = split(value, ',');
    if (parts.size() != 2) throw std::invalid_argument("expected X,Y: '" + value + "'");
    return {std::stoll(parts[0]), std::stoll(parts[1])};
}

}  // namespace

roadnet::Zone sample_zone(const roadnet::RoadNetwork& net, std::int64_t side_m, Rng& rng,
                          int max_retries) {
    if (side_m <= 0) throw std::invalid_argument("sample_zone: side must be positive");
    const std::int64_t x0 = net.min_x(), x1 = net.max_x() - side_m;
    const std::int64_t y0 = net.min_y(), y1 = net.max_y() - side_m;
    if (x1 < x0 || y1 < y0) {
        throw std::invalid_argument("sample_zone: side " + std::to_string(side_m) +
                                    " exceeds the map extent");
    }
    const std::int32_t band = net.segments().front().a.zone;
    for (int i = 0; i < max_retries; ++i) {
        const roadnet::Zone z{{rng.next_int(x0, x1), rng.next_int(y0, y1), band}, side_m};
        if (zone_has_road(net, z)) return z;
    }
    throw roadnet::NoRoadInZone("sample_zone: no placement with road after " +
                                std::to_string(max_retries) + " tries");
}

std::vector<TrialRecord> run_cell(const roadnet::RoadNetwork& net, const CellSpec& spec,
                                  int threads) {
    if (spec.trials < 1) throw std::invalid_argument("run_cell: trials must be >= 1");
    if (spec.drivers_per_trial < 1)
        throw std::invalid_argument("run_cell: drivers_per_trial must be >= 1");
    if (spec.radius_m < 0) throw std::invalid_argument("run_cell: radius must be >= 0");

    const int dpt = spec.drivers_per_trial;
    std::vector<TrialRecord> records(static_cast<std::size_t>(spec.trials) * dpt);

    auto run_trial = [&](int t) {
        Rng zone_rng(derive_seed(spec.master_seed, spec.cell_label + "/zone", t));
        Rng rider_rng(derive_seed(spec.master_seed, spec.cell_label + "/rider", t));
        Rng driver_rng(derive_seed(spec.master_seed, spec.cell_label + "/driver", t));
        Rng obf_rng(derive_seed(spec.master_seed, spec.cell_label + "/obfuscate", t));

        const roadnet::Zone zone =
            spec.fixed_zone ? *spec.fixed_zone : sample_zone(net, spec.zone_side_m, zone_rng);
        const PlanarPoint rider =
            spec.fixed_rider ? *spec.fixed_rider : uniform_point_in(zone, rider_rng);

        // Under the pad policy, drivers keep radius_m away from the zone edge
        // so their obfuscated locations stay inside.
        roadnet::Zone driver_zone = zone;
        if (spec.mode == PipelineMode::mitigated &&
            spec.out_of_zone == ObfuscatedOutOfZone::pad) {
            driver_zone = zone.shrunk(static_cast<std::int64_t>(std::ceil(spec.radius_m)));
        }
        std::optional<roadnet::ZoneRoadSampler> sampler;
        if (!spec.fixed_driver) sampler.emplace(net, driver_zone);

        const mitigation::ObfuscationParams params{spec.radius_m};
        for (int j = 0; j < dpt; ++j) {
            const PlanarPoint driver = spec.fixed_driver ? *spec.fixed_driver
                                                         : sampler->sample(driver_rng);
            const auto start = std::chrono::steady_clock::now();
            std::vector<PlanarPoint> prediction;
            PlanarPoint target = driver;  // what the filter must still contain
            switch (spec.mode) {
                case PipelineMode::attack: {
                    const auto d = static_cast<std::uint64_t>(squared_distance(rider, driver));
                    prediction = attack::predict_driver(zone, rider, d, net,
                                                        spec.on_road_threshold_m);
                    break;
                }
                case PipelineMode::pnorm: {
                    const auto d = attack::pnorm_value(rider, driver, spec.pnorm_p);
                    prediction = attack::predict_driver_pnorm(zone, rider, spec.pnorm_p, d, net,
                                                              spec.on_road_threshold_m);
                    break;
                }
                case PipelineMode::mitigated: {
                    PlanarPoint disclosed = mitigation::obfuscate(driver, params, obf_rng);
                    if (spec.out_of_zone == ObfuscatedOutOfZone::drop) {
                        for (int k = 0; k < 1000000 && !zone.contains(disclosed); ++k) {
                            disclosed = mitigation::obfuscate(driver, params, obf_rng);
                        }
                    }
                    target = disclosed;
                    const auto d = static_cast<std::uint64_t>(squared_distance(rider, disclosed));
                    prediction = mitigation::predict_driver_mitigated(zone, rider, d, net, params);
                    break;
                }
            }
            const auto stop = std::chrono::steady_clock::now();

            TrialRecord rec;
            rec.trial = t;
            rec.driver = j;
            rec.candidates = prediction.size();
            rec.hit = std::binary_search(prediction.begin(), prediction.end(), target);
            rec.exact = prediction.size() == 1;
            rec.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();
            records[static_cast<std::size_t>(t) * dpt + j] = rec;
        }
    };

    if (threads <= 1) {
        for (int t = 0; t < spec.trials; ++t) run_trial(t);
        return records;
    }

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= spec.trials) return;
            try {
                run_trial(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int count = std::min(threads, spec.trials);
    pool.reserve(count);
    for (int i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return records;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    ExperimentConfig cfg;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config '" + path + "' line " + std::to_string(row) +
                                     ": expected key = value");
        }
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "road_source") {
        cfg.road_source = value;
    } else if (key == "zone_sides_m") {
        cfg.zone_sides_m.clear();
        for (const auto& part : split(value, ',')) cfg.zone_sides_m.push_back(std::stoll(part));
    } else if (key == "trials_per_size") {
        cfg.trials_per_size = std::stoi(value);
    } else if (key == "obfuscation_radius_m") {
        cfg.obfuscation_radius_m = std::stod(value);
    } else if (key == "pnorm_p") {
        cfg.pnorm_p = std::stoi(value);
    } else if (key == "master_seed") {
        cfg.master_seed = std::stoull(value);
    } else if (key == "output_path") {
        cfg.output_path = value;
    } else if (key == "on_road_threshold_m") {
        cfg.on_road_threshold_m = std::stod(value);
    } else if (key == "threads") {
        cfg.threads = std::stoi(value);
    } else if (key == "timings_path") {
        cfg.timings_path = value;
    } else if (key == "fixed_rider") {
        cfg.fixed_rider = parse_point(value);
    } else if (key == "fixed_driver") {
        cfg.fixed_driver = parse_point(value);
    } else if (key == "fixed_zone") {
        const auto parts = split(value, ',');
        if (parts.size() != 3) throw std::invalid_argument("fixed_zone expects X,Y,SIDE");
        cfg.fixed_zone = roadnet::Zone{{std::stoll(parts[0]), std::stoll(parts[1])},
                                       std::stoll(parts[2])};
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

roadnet::RoadNetwork load_road_source(const std::string& source) {
    if (source.rfind("grid:", 0) == 0) {
        const auto parts = split(source.substr(5), ':');
        if (parts.size() < 2 || parts.size() > 3) {
            throw std::invalid_argument("road_source grid spec is grid:ROWSxCOLS:SPACING[:X,Y]");
        }
        const auto dims = split(parts[0], 'x');
        if (dims.size() != 2) throw std::invalid_argument("grid dims must be ROWSxCOLS");
        PlanarPoint origin;
        if (parts.size() == 3) origin = parse_point(parts[2]);
        return roadnet::RoadNetwork::build(roadnet::generate_manhattan_grid(
            std::stoll(parts[1]), std::stoi(dims[0]), std::stoi(dims[1]), origin));
    }
    if (source.size() > 4 && source.substr(source.size() - 4) == ".csv") {
        return roadnet::RoadNetwork::build(roadnet::ingest(source, roadnet::RoadFileFormat::csv));
    }
    if ((source.size() > 8 && source.substr(source.size() - 8) == ".geojson") ||
        (source.size() > 5 && source.substr(source.size() - 5) == ".json")) {
        return roadnet::RoadNetwork::build(
            roadnet::ingest(source, roadnet::RoadFileFormat::geojson));
    }
    throw std::invalid_argument("road_source '" + source +
                                "' is neither a grid spec, .csv, .geojson nor .json");
}

void recompute_aggregates(SweepCellResult& cell) {
    std::uint64_t total = 0, exact = 0, hit = 0;
    for (const auto& r : cell.records) {
        total += r.candidates;
        exact += r.exact ? 1 : 0;
        hit += r.hit ? 1 : 0;
    }
    const auto n = static_cast<double>(cell.records.size());
    if (n > 0) {
        cell.avg = static_cast<double>(total) / n;
        cell.exact_pct = 100.0 * static_cast<double>(exact) / n;
        cell.hit_pct = 100.0 * static_cast<double>(hit) / n;
    }
}

SweepReport run_sweep(const roadnet::RoadNetwork& net, const ExperimentConfig& cfg) {
    PipelineMode mode = PipelineMode::attack;
    if (cfg.pnorm_p) mode = PipelineMode::pnorm;
    if (cfg.obfuscation_radius_m) mode = PipelineMode::mitigated;
    if (cfg.pnorm_p && cfg.obfuscation_radius_m) {
        throw std::invalid_argument("run_sweep: pnorm_p and obfuscation_radius_m are exclusive");
    }

    SweepReport report;
    report.map_label = cfg.road_source.empty() ? "in-memory" : cfg.road_source;
    for (const auto side : cfg.zone_sides_m) {
        SweepCellResult cell;
        cell.map_label = report.map_label;
        cell.zone_side_m = side;
        cell.mode = mode_name(mode);
        cell.trials = cfg.trials_per_size;

        CellSpec spec;
        spec.mode = mode;
        spec.zone_side_m = side;
        spec.trials = cfg.trials_per_size;
        spec.on_road_threshold_m = cfg.on_road_threshold_m;
        spec.radius_m = cfg.obfuscation_radius_m.value_or(0.0);
        spec.pnorm_p = cfg.pnorm_p.value_or(2);
        spec.master_seed = cfg.master_seed;
        spec.cell_label = std::string(mode_name(mode)) + "/" + std::to_string(side);
        spec.fixed_zone = cfg.fixed_zone;
        spec.fixed_rider = cfg.fixed_rider;
        spec.fixed_driver = cfg.fixed_driver;

        try {
            cell.records = run_cell(net, spec, cfg.threads);
            recompute_aggregates(cell);
        } catch (const std::exception& e) {
            cell.status = "error: " + std::string(e.what());
        }
        report.cells.push_back(std::move(cell));
    }
    return report;
}

void write_sweep_csv(const std::string& path, const SweepReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "map,zone_side_m,zone_area_km2,mode,status,trials,avg_candidates,exact_pct,hit_pct\n";
    for (const auto& c : report.cells) {
        const double area_km2 =
            static_cast<double>(c.zone_side_m) * static_cast<double>(c.zone_side_m) / 1e6;
        out << csv::sanitize_field(c.map_label) << ',' << c.zone_side_m << ','
            << csv::fmt_double(area_km2) << ',' << c.mode << ',' << csv::sanitize_field(c.status)
            << ',' << c.trials << ',' << csv::fmt_double(c.avg) << ','
            << csv::fmt_double(c.exact_pct) << ',' << csv::fmt_double(c.hit_pct) << '\n';
    }
}

void write_trials_csv(const std::string& path, const SweepReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "map,zone_side_m,mode,trial,driver,candidates,hit,exact\n";
    for (const auto& c : report.cells) {
        for (const auto& r : c.records) {
            out << csv::sanitize_field(c.map_label) << ',' << c.zone_side_m << ',' << c.mode << ','
                << r.trial << ',' << r.driver << ',' << r.candidates << ',' << (r.hit ? 1 : 0)
                << ',' << (r.exact ? 1 : 0) << '\n';
        }
    }
}

void write_timings_csv(const std::string& path, const SweepReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "map,zone_side_m,mode,trial,driver,elapsed_ms\n";
    for (const auto& c : report.cells) {
        for (const auto& r : c.records) {
            out << csv::sanitize_field(c.map_label) << ',' << c.zone_side_m << ',' << c.mode << ','
                << r.trial << ',' << r.driver << ',' << csv::fmt_double(r.elapsed_ms) << '\n';
        }
    }
}

}  // namespace ridehail::harness
