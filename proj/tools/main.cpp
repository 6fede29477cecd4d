// ridehail — location-harvesting attack and obfuscation experiments on
// distance-disclosing ride-hailing protocols, against offline road data.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ridehail/attack.hpp"
#include "ridehail/csv.hpp"
#include "ridehail/harness.hpp"
#include "ridehail/matching.hpp"
#include "ridehail/mitigation.hpp"
#include "ridehail/polyrecover.hpp"
#include "ridehail/roadnet.hpp"

namespace {

using namespace ridehail;

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
};

harness::ExperimentConfig base_config(const GlobalOpts& g) {
    harness::ExperimentConfig cfg;
    if (!g.config_path.empty()) cfg = harness::load_config_file(g.config_path);
    if (g.seed) cfg.master_seed = *g.seed;
    if (!g.out.empty()) cfg.output_path = g.out;
    return cfg;
}

void write_cell_csv(const std::string& path, const std::vector<harness::TrialRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "trial,driver,candidates,hit,exact\n";
    for (const auto& r : records) {
        out << r.trial << ',' << r.driver << ',' << r.candidates << ',' << (r.hit ? 1 : 0) << ','
            << (r.exact ? 1 : 0) << '\n';
    }
}

int cmd_gen_roads(const std::string& grid, std::int64_t spacing, const std::string& origin,
                  const std::string& out) {
    const auto x = grid.find('x');
    if (x == std::string::npos) throw CLI::ValidationError("--grid", "expected ROWSxCOLS");
    const int rows = std::stoi(grid.substr(0, x));
    const int cols = std::stoi(grid.substr(x + 1));
    PlanarPoint o;
    if (!origin.empty()) {
        const auto comma = origin.find(',');
        if (comma == std::string::npos) throw CLI::ValidationError("--origin", "expected X,Y");
        o = {std::stoll(origin.substr(0, comma)), std::stoll(origin.substr(comma + 1))};
    }
    const auto segments = roadnet::generate_manhattan_grid(spacing, rows, cols, o);
    roadnet::write_segments_csv(out, segments);
    std::printf("wrote %zu segments to %s\n", segments.size(), out.c_str());
    return 0;
}

int cmd_ingest(const std::string& in, const std::string& format, const std::string& out) {
    const auto fmt = format == "geojson" ? roadnet::RoadFileFormat::geojson
                                         : roadnet::RoadFileFormat::csv;
    const auto segments = roadnet::ingest(in, fmt);
    roadnet::write_segments_csv(out, segments);
    std::printf("ingested %zu segments from %s to %s\n", segments.size(), in.c_str(), out.c_str());
    return 0;
}

int cmd_attack(const GlobalOpts& g, const std::string& roads, std::int64_t zone_side, int trials,
               int drivers, std::optional<int> pnorm, double threshold, int threads) {
    auto cfg = base_config(g);
    if (!roads.empty()) cfg.road_source = roads;
    auto net = harness::load_road_source(cfg.road_source);

    harness::CellSpec spec;
    spec.mode = pnorm ? harness::PipelineMode::pnorm : harness::PipelineMode::attack;
    spec.pnorm_p = pnorm.value_or(2);
    spec.zone_side_m = zone_side;
    spec.trials = trials;
    spec.drivers_per_trial = drivers;
    spec.on_road_threshold_m = threshold;
    spec.master_seed = cfg.master_seed;
    spec.cell_label = pnorm ? "pnorm" : "attack";
    spec.fixed_zone = cfg.fixed_zone;
    spec.fixed_rider = cfg.fixed_rider;
    spec.fixed_driver = cfg.fixed_driver;

    const auto records = harness::run_cell(net, spec, threads);
    write_cell_csv(cfg.output_path, records);

    harness::SweepCellResult agg;
    agg.records = records;
    harness::recompute_aggregates(agg);
    std::printf("%d trials x %d drivers: avg=%s exact=%s%% hit=%s%% -> %s\n", trials, drivers,
                csv::fmt_double(agg.avg).c_str(), csv::fmt_double(agg.exact_pct).c_str(),
                csv::fmt_double(agg.hit_pct).c_str(), cfg.output_path.c_str());
    return 0;
}

int cmd_mitigate(const GlobalOpts& g, const std::string& roads, std::int64_t zone_side,
                 double radius, int trials) {
    auto cfg = base_config(g);
    if (!roads.empty()) cfg.road_source = roads;
    auto net = harness::load_road_source(cfg.road_source);

    mitigation::ExperimentSpec spec;
    spec.zone_side_m = zone_side;
    spec.trials = trials;
    spec.seed = cfg.master_seed;
    const auto report = mitigation::run_mitigated_experiment(net, {radius}, spec);
    mitigation::write_experiment_csv(cfg.output_path, report);
    std::printf("%d trials at R=%s: mean anonymity=%s hit=%s%% -> %s\n", trials,
                csv::fmt_double(radius).c_str(), csv::fmt_double(report.mean_anonymity).c_str(),
                csv::fmt_double(report.hit_pct).c_str(), cfg.output_path.c_str());
    return 0;
}

int cmd_accuracy(const GlobalOpts& g, const std::string& roads, std::int64_t zone_side,
                 int drivers, double radius, const std::string& mode, int trials,
                 double speed_mps) {
    auto cfg = base_config(g);
    if (!roads.empty()) cfg.road_source = roads;
    auto net = harness::load_road_source(cfg.road_source);

    matching::AccuracyConfig acc;
    acc.zone_side_m = zone_side;
    acc.drivers_per_trial = drivers;
    acc.radius_m = radius;
    acc.trials = trials;
    acc.seed = cfg.master_seed;
    acc.model.speed_mps = speed_mps;
    const auto m = mode == "mitigated" ? matching::MatchMode::mitigated
                                       : matching::MatchMode::oride;
    const auto report = matching::evaluate_accuracy(net, acc, m);
    matching::write_accuracy_csv(cfg.output_path, report);
    std::printf("%d trials, %d drivers, mode=%s: within-1-minute=%s%% -> %s\n", trials, drivers,
                mode.c_str(), csv::fmt_double(report.within_one_minute_pct).c_str(),
                cfg.output_path.c_str());
    return 0;
}

int cmd_polyrecover(const GlobalOpts& g, int degree, int alpha, int beta, int trials,
                    int outputs) {
    auto cfg = base_config(g);
    const polyrecover::NoiseModel model{degree, alpha, beta};
    model.validate(static_cast<std::size_t>(outputs));

    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + cfg.output_path + "'");
    out << "trial,n_outputs,true_recovered,unique,candidate_polynomials\n";

    int recovered_count = 0, unique_count = 0;
    for (int t = 0; t < trials; ++t) {
        Rng poly_rng(derive_seed(cfg.master_seed, "polyrecover/poly", t));
        Rng input_rng(derive_seed(cfg.master_seed, "polyrecover/inputs", t));
        const auto poly = polyrecover::sample_monotone_poly(model, poly_rng);
        std::vector<std::uint64_t> inputs;
        std::vector<polyrecover::u128> values;
        for (int k = 0; k < outputs; ++k) {
            inputs.push_back(input_rng.next_below(model.input_max() + 1));
            values.push_back(polyrecover::eval_poly(poly, inputs.back()));
        }
        const auto result = polyrecover::recover_inputs(values, model);
        const bool found = std::find(result.all_input_lists.begin(), result.all_input_lists.end(),
                                     inputs) != result.all_input_lists.end();
        recovered_count += found ? 1 : 0;
        unique_count += result.unique() ? 1 : 0;
        out << t << ',' << outputs << ',' << (found ? 1 : 0) << ',' << (result.unique() ? 1 : 0)
            << ',' << result.candidate_polynomials << '\n';
    }
    std::printf(
        "%d instances (d=%d alpha=%d beta=%d, %d outputs): recovered %d/%d, unique %s%% -> %s\n",
        trials, degree, alpha, beta, outputs, recovered_count, trials,
        csv::fmt_double(100.0 * unique_count / trials).c_str(), cfg.output_path.c_str());
    return 0;
}

int cmd_sweep(const GlobalOpts& g, const std::string& roads, const std::string& zone_sides,
              std::optional<int> trials, std::optional<double> radius, std::optional<int> pnorm,
              std::optional<int> threads, const std::string& timings) {
    auto cfg = base_config(g);
    if (!roads.empty()) cfg.road_source = roads;
    if (!zone_sides.empty()) harness::apply_config_entry(cfg, "zone_sides_m", zone_sides);
    if (trials) cfg.trials_per_size = *trials;
    if (radius) cfg.obfuscation_radius_m = *radius;
    if (pnorm) cfg.pnorm_p = *pnorm;
    if (threads) cfg.threads = *threads;
    if (!timings.empty()) cfg.timings_path = timings;
    if (cfg.road_source.empty()) {
        throw CLI::ValidationError("--roads", "no road source given (flag or config)");
    }

    auto net = harness::load_road_source(cfg.road_source);
    const auto report = harness::run_sweep(net, cfg);

    harness::write_sweep_csv(cfg.output_path, report);
    const auto trials_path = cfg.output_path + ".trials.csv";
    harness::write_trials_csv(trials_path, report);
    if (!cfg.timings_path.empty()) harness::write_timings_csv(cfg.timings_path, report);

    for (const auto& cell : report.cells) {
        std::printf("%-10s side=%6lld  %-26s avg=%-10s exact=%s%%\n", cell.mode.c_str(),
                    static_cast<long long>(cell.zone_side_m), cell.status.c_str(),
                    csv::fmt_double(cell.avg).c_str(), csv::fmt_double(cell.exact_pct).c_str());
    }
    std::printf("aggregate -> %s, per-trial -> %s\n", cfg.output_path.c_str(),
                trials_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"location-harvesting attack experiments on offline road networks"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--config", g.config_path, "flat key=value config file");
    app.add_option("--seed", g.seed, "master seed (overrides config)");
    app.add_option("--out", g.out, "output CSV path (overrides config)");

    // gen-roads
    std::string grid = "10x10", origin;
    std::int64_t spacing = 100;
    auto* gen = app.add_subcommand("gen-roads", "write a synthetic street grid as CSV");
    gen->add_option("--grid", grid, "ROWSxCOLS")->required();
    gen->add_option("--spacing", spacing, "block edge length in meters")->required();
    gen->add_option("--origin", origin, "X,Y of the south-west corner (default 0,0)");

    // ingest
    std::string in_path, in_format = "csv";
    auto* ing = app.add_subcommand("ingest", "normalize a road file to planar CSV");
    ing->add_option("--in", in_path, "input file")->required();
    ing->add_option("--format", in_format, "csv | geojson")
        ->check(CLI::IsMember({"csv", "geojson"}));

    // attack
    std::string roads;
    std::int64_t zone_side = 1000;
    int trials = 30, drivers = 1, threads = 1;
    std::optional<int> pnorm;
    double threshold = roadnet::kOnRoadThresholdM;
    auto* atk = app.add_subcommand("attack", "per-driver location prediction from disclosed "
                                             "distances");
    atk->add_option("--roads", roads, "road source (grid:RxC:SPACING, .csv, .geojson)");
    atk->add_option("--zone-side", zone_side, "zone edge in meters");
    atk->add_option("--trials", trials, "number of experiments");
    atk->add_option("--drivers", drivers, "drivers per experiment");
    atk->add_option("--pnorm", pnorm, "use the even-p norm variant");
    atk->add_option("--threshold", threshold, "on-road distance threshold in meters");
    atk->add_option("--threads", threads, "worker threads");

    // mitigate
    double radius = 50.0;
    auto* mit = app.add_subcommand("mitigate", "attack against radius-R obfuscated locations");
    mit->add_option("--roads", roads, "road source");
    mit->add_option("--zone-side", zone_side, "zone edge in meters");
    mit->add_option("--radius", radius, "obfuscation radius R in meters")->required();
    mit->add_option("--trials", trials, "number of experiments");

    // accuracy
    std::string acc_mode = "oride";
    int acc_drivers = 400;
    double speed = 8.33;
    auto* acc = app.add_subcommand("accuracy", "ride-matching accuracy under a travel-time "
                                               "model");
    acc->add_option("--roads", roads, "road source");
    acc->add_option("--zone-side", zone_side, "zone edge in meters");
    acc->add_option("--drivers", acc_drivers, "drivers per zone");
    acc->add_option("--radius", radius, "obfuscation radius for mitigated mode");
    acc->add_option("--mode", acc_mode, "oride | mitigated")
        ->check(CLI::IsMember({"oride", "mitigated"}));
    acc->add_option("--trials", trials, "number of experiments");
    acc->add_option("--speed", speed, "travel speed in m/s");

    // polyrecover
    int degree = 2, alpha = 4, beta = 6, outputs = 5;
    auto* pr = app.add_subcommand("polyrecover", "invert masked distances through an unknown "
                                                 "monotone polynomial");
    pr->add_option("--degree", degree, "polynomial degree d")->required();
    pr->add_option("--alpha", alpha, "coefficient bits")->required();
    pr->add_option("--beta", beta, "input bits")->required();
    pr->add_option("--trials", trials, "number of instances");
    pr->add_option("--outputs", outputs, "disclosed outputs per instance");

    // sweep
    std::string zone_sides, timings;
    std::optional<int> sweep_trials, sweep_pnorm, sweep_threads;
    std::optional<double> sweep_radius;
    auto* sw = app.add_subcommand("sweep", "zone-size sweep with per-trial records");
    sw->add_option("--roads", roads, "road source (overrides config)");
    sw->add_option("--zone-sides", zone_sides, "comma list of zone edges in meters");
    sw->add_option("--trials", sweep_trials, "trials per zone size");
    sw->add_option("--radius", sweep_radius, "run the mitigated pipeline at this radius");
    sw->add_option("--pnorm", sweep_pnorm, "run the even-p norm pipeline");
    sw->add_option("--threads", sweep_threads, "worker threads");
    sw->add_option("--timings", timings, "also write wall-clock per trial to this CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            return cmd_gen_roads(grid, spacing, origin,
                                 g.out.empty() ? "roads.csv" : g.out);
        }
        if (ing->parsed()) {
            return cmd_ingest(in_path, in_format, g.out.empty() ? "roads.csv" : g.out);
        }
        if (g.out.empty()) g.out = "report.csv";
        if (atk->parsed()) {
            return cmd_attack(g, roads, zone_side, trials, drivers, pnorm, threshold, threads);
        }
        if (mit->parsed()) return cmd_mitigate(g, roads, zone_side, radius, trials);
        if (acc->parsed()) {
            return cmd_accuracy(g, roads, zone_side, acc_drivers, radius, acc_mode, trials, speed);
        }
        if (pr->parsed()) return cmd_polyrecover(g, degree, alpha, beta, trials, outputs);
        if (sw->parsed()) {
            return cmd_sweep(g, roads, zone_sides, sweep_trials, sweep_radius, sweep_pnorm,
                             sweep_threads, timings);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
