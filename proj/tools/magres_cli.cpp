// Command-line front end: runs experiments and writes a synthetic laser file.
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration error.

#include "magres/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int run(const CLI::App& app, const std::string& config_path, magres::ExperimentConfig flags,
        const std::vector<std::string>& set_from_flags) {
    using namespace magres;
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);

    // flags given on the command line override the file
    nlohmann::json overrides = nlohmann::json::object();
    const nlohmann::json all = to_json(flags);
    for (const auto& key : set_from_flags)
        if (all.contains(key)) overrides[key] = all.at(key);
    cfg = config_from_json(overrides, cfg);
    if (app.count("--genome-file")) cfg.genome = flags.genome;
    if (app.count("--out")) cfg.out = flags.out;
    if (app.count("--jobs")) cfg.jobs = flags.jobs;

    const ExperimentResult res = run_experiment(cfg);
    for (const auto& f : res.files) std::cout << f.string() << '\n';
    for (const auto& f : res.failures) std::cerr << "error: " << f << '\n';
    return res.failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace magres;
    CLI::App app{"Ferromagnetic thin-film reservoir simulator and benchmark harness"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run an experiment");
    ExperimentConfig f;
    std::string config_path, mode = "evolve", reservoir = "film", out = "results", genome_file;
    bool paper_scale = false;

    // option name -> config key, for the override pass
    std::vector<std::pair<CLI::Option*, std::string>> keyed;
    auto key = [&](CLI::Option* o, const std::string& k) {
        keyed.emplace_back(o, k);
        return o;
    };
    run_cmd->add_option("--config", config_path, "JSON config, best-genome JSON or any output CSV")
        ->check(CLI::ExistingFile);
    key(run_cmd->add_option("--mode", mode,
                            "evolve | random-search | sweep-temperature | sweep-scaling | metrics | impulse-demo | "
                            "timestep-compare"),
        "mode");
    key(run_cmd->add_option("--reservoir", reservoir, "film | esn | lattice"), "reservoir");
    key(run_cmd->add_option("--material", f.material, "Co | Fe | Ni"), "material");
    key(run_cmd->add_option("--grid-side", f.grid_side, "Cells (or nodes) per side"), "grid_side");
    key(run_cmd->add_option("--task", f.task, "narma10 | narma30 | laser"), "task");
    key(run_cmd->add_option("--temp-k", f.temperature_k, "Film temperature in kelvin"), "temperature_k");
    key(run_cmd->add_option("--thickness-nm", f.thickness_nm, "Film thickness in nm"), "thickness_nm");
    key(run_cmd->add_option("--dt", f.dt_fs, "Integrator step in fs"), "dt_fs");
    key(run_cmd->add_option("--fine-dt", f.fine_dt_fs, "Fine step for timestep-compare, fs"), "fine_dt_fs");
    key(run_cmd->add_option("--seed", f.seed, "Master seed"), "seed");
    key(run_cmd->add_option("--budget", f.budget, "desk (pop 20, 200 tournaments) or full (pop 100, 2000 tournaments)"), "budget");
    auto* paper_opt = run_cmd->add_flag("--paper-scale", paper_scale, "Same as --budget full");
    key(run_cmd->add_option("--pop", f.population, "MGA population"), "population");
    key(run_cmd->add_option("--tournaments", f.tournaments, "MGA tournaments"), "tournaments");
    key(run_cmd->add_option("--runs", f.runs, "Independent runs / batches / configs"), "runs");
    key(run_cmd->add_option("--batch", f.batch, "Random-search batch size"), "batch");
    key(run_cmd->add_option("--refinements", f.refinements, "Times an unstable drive is retried at dt / 10"),
        "refinements");
    key(run_cmd->add_option("--narma-length", f.narma_length, "NARMA sequence length"), "narma_length");
    key(run_cmd->add_flag("--narma-literal-delta", f.narma_literal_delta, "Use input lag 10 for every NARMA order"),
        "narma_literal_delta");
    key(run_cmd->add_option("--laser-file", f.laser_file, "Santa Fe laser data, one integer per line"), "laser_file");
    key(run_cmd->add_option("--temperatures", f.temperatures_k, "Sweep temperatures, K")->delimiter(','),
        "temperatures_k");
    key(run_cmd->add_option("--thicknesses", f.thicknesses_nm, "Sweep thicknesses, nm")->delimiter(','),
        "thicknesses_nm");
    key(run_cmd->add_option("--grid-sides", f.grid_sides, "Scaling sweep sides")->delimiter(','), "grid_sides");
    key(run_cmd->add_flag("--with-metrics", f.with_metrics, "Also measure KR and MC of evolved genomes"),
        "with_metrics");
    key(run_cmd->add_option("--mc-length", f.mc_length, "Memory-capacity sequence length"), "mc_length");
    key(run_cmd->add_option("--impulse-steps", f.impulse_steps, "Impulse demo length in integrator steps"),
        "impulse_steps");
    run_cmd->add_option("--genome-file", genome_file, "Best-genome JSON to sweep or measure")
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--out", out, "Output directory");
    run_cmd->add_option("--jobs", f.jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto* laser_cmd = app.add_subcommand("gen-laser", "Write a synthetic laser-like series (Lorenz intensity)");
    std::string laser_out;
    std::size_t laser_n = 10000;
    std::uint64_t laser_seed = 1;
    laser_cmd->add_option("--out", laser_out, "Output file")->required();
    laser_cmd->add_option("-n,--samples", laser_n, "Number of samples");
    laser_cmd->add_option("--seed", laser_seed, "Seed for the initial condition");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (laser_cmd->parsed()) {
            write_laser_file(laser_out, synthetic_laser_series(laser_n, laser_seed));
            std::cout << laser_out << '\n';
            return 0;
        }
        f.mode = parse_enum(mode, kModeNames, "mode");
        f.reservoir = parse_enum(reservoir, kReservoirNames, "reservoir");
        f.out = out;
        std::vector<std::string> given;
        for (const auto& [opt, k] : keyed)
            if (opt->count() > 0) given.push_back(k);
        if (paper_opt->count() > 0) {
            f.budget = "full";
            given.push_back("budget");
        }
        if (!genome_file.empty()) f = config_from_json({{"genome_file", genome_file}}, f);
        return run(*run_cmd, config_path, f, given);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
