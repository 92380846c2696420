#pragma once

// Experiment configuration and orchestration: evolutionary runs, random
// search, temperature / size sweeps, metric surveys, the impulse demo and the
// time-step comparison. Every output file carries the resolved config on a
// leading `# config: {...}` line; re-running that config reproduces the file.

#include "magres/errors.hpp"
#include "magres/evaluation.hpp"
#include "magres/evolve.hpp"
#include "magres/material.hpp"
#include "magres/metrics.hpp"
#include "magres/rng.hpp"
#include "magres/snapshot.hpp"
#include "magres/tasks.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace magres {

enum class Mode { evolve, random_search, sweep_temperature, sweep_scaling, metrics, impulse_demo, timestep_compare };
enum class ReservoirKind { film, esn, lattice };

inline constexpr std::pair<Mode, const char*> kModeNames[] = {
    {Mode::evolve, "evolve"},
    {Mode::random_search, "random-search"},
    {Mode::sweep_temperature, "sweep-temperature"},
    {Mode::sweep_scaling, "sweep-scaling"},
    {Mode::metrics, "metrics"},
    {Mode::impulse_demo, "impulse-demo"},
    {Mode::timestep_compare, "timestep-compare"},
};

inline constexpr std::pair<ReservoirKind, const char*> kReservoirNames[] = {
    {ReservoirKind::film, "film"},
    {ReservoirKind::esn, "esn"},
    {ReservoirKind::lattice, "lattice"},
};

template <class E, std::size_t N>
std::string enum_name(E value, const std::pair<E, const char*> (&names)[N]) {
    for (const auto& [v, s] : names)
        if (v == value) return s;
    return "?";
}

template <class E, std::size_t N>
E parse_enum(const std::string& text, const std::pair<E, const char*> (&names)[N], const std::string& field) {
    for (const auto& [v, s] : names)
        if (text == s) return v;
    std::string allowed;
    for (const auto& [v, s] : names) allowed += (allowed.empty() ? "" : ", ") + std::string(s);
    throw ConfigError(field + ": unknown value '" + text + "' (expected one of " + allowed + ")");
}

/// Zero for the count fields means "take the budget default".
struct ExperimentConfig {
    Mode mode = Mode::evolve;
    ReservoirKind reservoir = ReservoirKind::film;
    std::string material = "Co";
    int grid_side = 7;
    std::string task = "narma10";
    double temperature_k = 0.0;
    double thickness_nm = 0.1;
    double dt_fs = 100.0;
    std::uint64_t seed = 1;
    std::string budget = "desk";

    int population = 0;
    int tournaments = 0;
    int runs = 0;
    int batch = 0;
    double mutation_rate = 0.05;
    double recombination_rate = 0.5;
    double deme_fraction = 0.1;

    int narma_length = 5000;
    bool narma_literal_delta = false;
    std::string laser_file;

    /// -1: two for the temperature sweep, none otherwise.
    int refinements = -1;
    std::vector<double> temperatures_k;
    std::vector<double> thicknesses_nm;
    std::vector<int> grid_sides;
    double fine_dt_fs = 1.0;

    bool with_metrics = false;
    int kr_streams = 0;  // 0: state dimension
    int kr_length = 100;
    int mc_max_delay = 0;  // 0: min(100, 2 x state dimension)
    int mc_length = 4000;

    int impulse_period = 25;
    int impulse_width = 5;
    int impulse_steps = 200;

    /// Fixed genotype for the sweeps and metric runs; evolved when empty.
    std::vector<double> genome;

    // Execution settings. They never change results and are not embedded.
    std::filesystem::path out = "results";
    int jobs = 1;
};

inline const std::vector<double>& default_sweep_temperatures() {
    static const std::vector<double> t{0.0, 0.28, 4.2, 30.0, 77.0, 200.0, 300.0};
    return t;
}

inline const std::vector<double>& default_sweep_thicknesses() {
    static const std::vector<double> t{0.1, 0.5, 1.0, 2.0};
    return t;
}

inline const std::vector<int>& default_scaling_sides() {
    static const std::vector<int> s{5, 7, 10, 15, 20, 30};
    return s;
}

/// Fills budget-dependent counts and mode-dependent defaults.
inline ExperimentConfig resolve(ExperimentConfig cfg) {
    const bool full = cfg.budget == "full";
    if (!full && cfg.budget != "desk") throw ConfigError("budget: expected 'desk' or 'full'");
    if (cfg.population == 0) cfg.population = full ? 100 : 20;
    if (cfg.tournaments == 0) cfg.tournaments = full ? 2000 : 200;
    if (cfg.batch == 0) cfg.batch = full ? 2000 : 100;
    if (cfg.runs == 0) {
        switch (cfg.mode) {
        case Mode::timestep_compare: cfg.runs = full ? 30 : 10; break;
        case Mode::random_search: cfg.runs = full ? 20 : 5; break;
        case Mode::impulse_demo: cfg.runs = 1; break;
        default: cfg.runs = full ? 20 : 3; break;
        }
    }
    if (cfg.refinements < 0) cfg.refinements = cfg.mode == Mode::sweep_temperature ? 2 : 0;
    if (cfg.temperatures_k.empty()) cfg.temperatures_k = default_sweep_temperatures();
    if (cfg.thicknesses_nm.empty()) cfg.thicknesses_nm = default_sweep_thicknesses();
    if (cfg.grid_sides.empty()) cfg.grid_sides = default_scaling_sides();
    return cfg;
}

/// Field-level validation of a resolved config.
inline void validate(const ExperimentConfig& cfg) {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    require(parse_element(cfg.material).has_value(), "material: unknown element '" + cfg.material + "' (Co, Fe, Ni)");
    require(cfg.grid_side >= 2 && cfg.grid_side <= 64, "grid_side: must lie in [2, 64]");
    require(cfg.task == "narma10" || cfg.task == "narma30" || cfg.task == "laser",
            "task: expected narma10, narma30 or laser");
    if (cfg.task == "laser") {
        require(!cfg.laser_file.empty(), "laser_file: required when task = laser");
        require(std::filesystem::exists(cfg.laser_file), "laser_file: no such file '" + cfg.laser_file + "'");
    }
    require(std::isfinite(cfg.temperature_k) && cfg.temperature_k >= 0, "temperature_k: must be non-negative");
    require(std::isfinite(cfg.thickness_nm) && cfg.thickness_nm > 0, "thickness_nm: must be positive");
    require(std::isfinite(cfg.dt_fs) && cfg.dt_fs > 0, "dt_fs: must be positive");
    require(std::isfinite(cfg.fine_dt_fs) && cfg.fine_dt_fs > 0, "fine_dt_fs: must be positive");
    require(cfg.population >= 2, "population: must be at least 2");
    require(cfg.tournaments >= 0, "tournaments: must be non-negative");
    require(cfg.runs >= 1, "runs: must be positive");
    require(cfg.batch >= 1, "batch: must be positive");
    require(cfg.mutation_rate >= 0 && cfg.mutation_rate <= 1, "mutation_rate: must lie in [0, 1]");
    require(cfg.recombination_rate >= 0 && cfg.recombination_rate <= 1, "recombination_rate: must lie in [0, 1]");
    require(cfg.deme_fraction > 0 && cfg.deme_fraction <= 1, "deme_fraction: must lie in (0, 1]");
    require(cfg.narma_length >= 500, "narma_length: must be at least 500");
    require(cfg.refinements >= 0 && cfg.refinements <= 4, "refinements: must lie in [0, 4]");
    for (double t : cfg.temperatures_k) require(std::isfinite(t) && t >= 0, "temperatures_k: must be non-negative");
    for (double t : cfg.thicknesses_nm) require(std::isfinite(t) && t > 0, "thicknesses_nm: must be positive");
    for (int s : cfg.grid_sides) require(s >= 2 && s <= 64, "grid_sides: each side must lie in [2, 64]");
    require(cfg.kr_streams >= 0, "kr_streams: must be non-negative");
    require(cfg.kr_length > 50, "kr_length: must exceed the 50-step washout");
    require(cfg.mc_max_delay >= 0, "mc_max_delay: must be non-negative");
    require(cfg.mc_length >= 200, "mc_length: must be at least 200");
    require(cfg.impulse_period >= 1 && cfg.impulse_width >= 1 && cfg.impulse_width <= cfg.impulse_period,
            "impulse_width: must lie in [1, impulse_period]");
    require(cfg.impulse_steps >= 1, "impulse_steps: must be positive");
    require(cfg.jobs >= 1, "jobs: must be positive");
    if (cfg.reservoir == ReservoirKind::lattice) require(cfg.grid_side >= 2, "grid_side: lattice needs side >= 2");
    const bool film_only = cfg.mode == Mode::sweep_temperature || cfg.mode == Mode::impulse_demo ||
                           cfg.mode == Mode::timestep_compare;
    require(!film_only || cfg.reservoir == ReservoirKind::film,
            "reservoir: mode " + enum_name(cfg.mode, kModeNames) + " needs a film reservoir");
    require(cfg.mode != Mode::timestep_compare || cfg.runs >= 5, "runs: timestep-compare needs at least 5 configs");
    require(cfg.mode != Mode::sweep_scaling || cfg.genome.empty(), "genome: sweep-scaling always evolves");
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
    return {
        {"mode", enum_name(c.mode, kModeNames)},
        {"reservoir", enum_name(c.reservoir, kReservoirNames)},
        {"material", c.material},
        {"grid_side", c.grid_side},
        {"task", c.task},
        {"temperature_k", c.temperature_k},
        {"thickness_nm", c.thickness_nm},
        {"dt_fs", c.dt_fs},
        {"seed", c.seed},
        {"budget", c.budget},
        {"population", c.population},
        {"tournaments", c.tournaments},
        {"runs", c.runs},
        {"batch", c.batch},
        {"mutation_rate", c.mutation_rate},
        {"recombination_rate", c.recombination_rate},
        {"deme_fraction", c.deme_fraction},
        {"narma_length", c.narma_length},
        {"narma_literal_delta", c.narma_literal_delta},
        {"laser_file", c.laser_file},
        {"refinements", c.refinements},
        {"temperatures_k", c.temperatures_k},
        {"thicknesses_nm", c.thicknesses_nm},
        {"grid_sides", c.grid_sides},
        {"fine_dt_fs", c.fine_dt_fs},
        {"with_metrics", c.with_metrics},
        {"kr_streams", c.kr_streams},
        {"kr_length", c.kr_length},
        {"mc_max_delay", c.mc_max_delay},
        {"mc_length", c.mc_length},
        {"impulse_period", c.impulse_period},
        {"impulse_width", c.impulse_width},
        {"impulse_steps", c.impulse_steps},
        {"genome", c.genome},
    };
}

namespace detail {

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& dst) {
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string(key) + ": wrong type (" + j.at(key).dump() + ")");
    }
}

inline std::vector<double> read_genes_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("genome_file: cannot open '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("genome_file: not valid JSON (" + std::string(e.what()) + ")");
    }
    if (!j.is_object() || !j.contains("genes")) throw ConfigError("genome_file: no 'genes' array");
    try {
        return j.at("genes").get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("genome_file: 'genes' must be an array of numbers");
    }
}

}  // namespace detail

/// Overlays the keys present in `j` onto `base`; unknown keys are rejected.
/// A `genome_file` key loads the genes of a best-genome file.
inline ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {}) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    const nlohmann::json known = to_json(base);
    for (const auto& [key, value] : j.items())
        if (!known.contains(key) && key != "genome_file") throw ConfigError(key + ": unknown config key");
    ExperimentConfig c = std::move(base);
    std::string s;
    if (j.contains("mode")) {
        detail::read_field(j, "mode", s);
        c.mode = parse_enum(s, kModeNames, "mode");
    }
    if (j.contains("reservoir")) {
        detail::read_field(j, "reservoir", s);
        c.reservoir = parse_enum(s, kReservoirNames, "reservoir");
    }
    detail::read_field(j, "material", c.material);
    detail::read_field(j, "grid_side", c.grid_side);
    detail::read_field(j, "task", c.task);
    detail::read_field(j, "temperature_k", c.temperature_k);
    detail::read_field(j, "thickness_nm", c.thickness_nm);
    detail::read_field(j, "dt_fs", c.dt_fs);
    detail::read_field(j, "seed", c.seed);
    detail::read_field(j, "budget", c.budget);
    detail::read_field(j, "population", c.population);
    detail::read_field(j, "tournaments", c.tournaments);
    detail::read_field(j, "runs", c.runs);
    detail::read_field(j, "batch", c.batch);
    detail::read_field(j, "mutation_rate", c.mutation_rate);
    detail::read_field(j, "recombination_rate", c.recombination_rate);
    detail::read_field(j, "deme_fraction", c.deme_fraction);
    detail::read_field(j, "narma_length", c.narma_length);
    detail::read_field(j, "narma_literal_delta", c.narma_literal_delta);
    detail::read_field(j, "laser_file", c.laser_file);
    detail::read_field(j, "refinements", c.refinements);
    detail::read_field(j, "temperatures_k", c.temperatures_k);
    detail::read_field(j, "thicknesses_nm", c.thicknesses_nm);
    detail::read_field(j, "grid_sides", c.grid_sides);
    detail::read_field(j, "fine_dt_fs", c.fine_dt_fs);
    detail::read_field(j, "with_metrics", c.with_metrics);
    detail::read_field(j, "kr_streams", c.kr_streams);
    detail::read_field(j, "kr_length", c.kr_length);
    detail::read_field(j, "mc_max_delay", c.mc_max_delay);
    detail::read_field(j, "mc_length", c.mc_length);
    detail::read_field(j, "impulse_period", c.impulse_period);
    detail::read_field(j, "impulse_width", c.impulse_width);
    detail::read_field(j, "impulse_steps", c.impulse_steps);
    detail::read_field(j, "genome", c.genome);
    if (j.contains("genome_file")) {
        std::string path;
        detail::read_field(j, "genome_file", path);
        c.genome = detail::read_genes_file(path);
    }
    return c;
}

inline constexpr const char* kConfigPrefix = "# config: ";

/// Loads a config from a JSON file, a best-genome JSON (its "config" member)
/// or any CSV / snapshot output carrying a `# config:` line.
inline ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const std::string prefix = kConfigPrefix;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind(prefix, 0) == 0) {
            try {
                return config_from_json(nlohmann::json::parse(line.substr(prefix.size())), std::move(base));
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError("config: embedded config line is not valid JSON (" + std::string(e.what()) + ")");
            }
        }
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: '" + path.string() + "' is neither JSON nor an output with an embedded config");
    }
    if (j.is_object() && j.contains("config") && j.at("config").is_object())
        return config_from_json(j.at("config"), std::move(base));
    return config_from_json(j, std::move(base));
}

/// Shortest text that parses back to the same double ("inf" for infinity).
inline std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw IngestionError("not a number: '" + s + "'");
    return v;
}

/// Writes to a sibling temp file and renames it into place.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
        os << content;
        if (!os.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

struct ResultRow {
    std::string material;
    std::string task;
    int grid_side = 0;
    double temperature_k = 0.0;
    double thickness_nm = 0.0;
    int run = 0;
    double val_nmse = 0.0;
    double test_nmse = 0.0;
    std::optional<double> kr;
    std::optional<double> mc;
};

inline constexpr const char* kResultsHeader =
    "material,task,grid_side,temperature_k,thickness_nm,run,val_nmse,test_nmse,kr,mc";
inline constexpr const char* kHistoryHeader = "run,tournament,best_val_nmse,best_test_nmse,genome_id";
inline constexpr const char* kSummaryHeader =
    "material,task,grid_side,temperature_k,thickness_nm,n,val_nmse_median,val_nmse_q1,val_nmse_q3,"
    "test_nmse_median,test_nmse_q1,test_nmse_q3";

inline std::string config_line(const ExperimentConfig& cfg) {
    return std::string(kConfigPrefix) + to_json(cfg).dump() + "\n";
}

inline std::string results_csv(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows) {
    std::string s = config_line(cfg) + kResultsHeader + "\n";
    for (const auto& r : rows) {
        s += r.material + ',' + r.task + ',' + std::to_string(r.grid_side) + ',' + format_double(r.temperature_k) +
             ',' + format_double(r.thickness_nm) + ',' + std::to_string(r.run) + ',' + format_double(r.val_nmse) +
             ',' + format_double(r.test_nmse) + ',' + (r.kr ? format_double(*r.kr) : "") + ',' +
             (r.mc ? format_double(*r.mc) : "") + '\n';
    }
    return s;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> f;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            f.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    f.push_back(cur);
    return f;
}

inline std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open results file " + path.string());
    std::vector<ResultRow> rows;
    std::string line;
    long line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != kResultsHeader) throw IngestionError("unexpected results header", line_no);
            header = true;
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 10) throw IngestionError("results row needs 10 fields", line_no);
        ResultRow r;
        r.material = f[0];
        r.task = f[1];
        r.grid_side = std::stoi(f[2]);
        r.temperature_k = parse_double(f[3]);
        r.thickness_nm = parse_double(f[4]);
        r.run = std::stoi(f[5]);
        r.val_nmse = parse_double(f[6]);
        r.test_nmse = parse_double(f[7]);
        if (!f[8].empty()) r.kr = parse_double(f[8]);
        if (!f[9].empty()) r.mc = parse_double(f[9]);
        rows.push_back(std::move(r));
    }
    return rows;
}

/// Linear-interpolation quantile of a sorted sample (q in [0, 1]).
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw ConfigError("quantile of an empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double a = sorted[lo], b = sorted[hi];
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0 || a == b) return a;
    return a + (b - a) * frac;
}

/// Median and quartiles of val / test NMSE per (material, task, grid, T, thickness),
/// groups in order of first appearance.
inline std::string summary_csv(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<const ResultRow*>> groups;
    for (const auto& r : rows) {
        const std::string key = r.material + ',' + r.task + ',' + std::to_string(r.grid_side) + ',' +
                                format_double(r.temperature_k) + ',' + format_double(r.thickness_nm);
        if (!groups.contains(key)) order.push_back(key);
        groups[key].push_back(&r);
    }
    std::string s = config_line(cfg) + kSummaryHeader + "\n";
    for (const auto& key : order) {
        const auto& g = groups[key];
        std::vector<double> val, test;
        for (const ResultRow* r : g) {
            val.push_back(r->val_nmse);
            test.push_back(r->test_nmse);
        }
        std::sort(val.begin(), val.end());
        std::sort(test.begin(), test.end());
        s += key + ',' + std::to_string(g.size());
        for (const auto* v : {&val, &test})
            for (double q : {0.5, 0.25, 0.75}) s += ',' + format_double(quantile_sorted(*v, q));
        s += '\n';
    }
    return s;
}

inline std::string history_csv(const ExperimentConfig& cfg,
                               const std::vector<std::pair<int, std::vector<MgaHistoryRow>>>& runs) {
    std::string s = config_line(cfg) + kHistoryHeader + "\n";
    for (const auto& [run, hist] : runs)
        for (const auto& h : hist)
            s += std::to_string(run) + ',' + std::to_string(h.tournament) + ',' + format_double(h.best_val_nmse) +
                 ',' + format_double(h.best_test_nmse) + ',' + std::to_string(h.genome_id) + '\n';
    return s;
}

/// Runs f(0..n-1) on up to `jobs` threads; returns one error message per
/// failed index (empty when it succeeded).
template <class F>
std::vector<std::string> parallel_for(int n, int jobs, F&& f) {
    std::vector<std::string> errors(static_cast<std::size_t>(n));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                f(i);
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(i)] = e.what();
                if (errors[static_cast<std::size_t>(i)].empty()) errors[static_cast<std::size_t>(i)] = "unknown error";
            }
        }
    };
    const int threads = std::max(1, std::min(jobs, n));
    if (threads == 1) {
        worker();
        return errors;
    }
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    pool.clear();
    return errors;
}

/// Seed streams split off the master seed.
enum SeedStream : std::uint64_t {
    kTaskStream = 0x7A5C,
    kGenomeStream = 0x6E0E,
    kRunStream = 0x1000,
};

inline std::uint64_t run_seed(std::uint64_t master, int run) {
    return derive_seed(derive_seed(master, kRunStream), static_cast<std::uint64_t>(run));
}

inline TaskData make_task(const ExperimentConfig& cfg) {
    if (cfg.task == "laser") return load_laser(cfg.laser_file);
    const int order = cfg.task == "narma30" ? 30 : 10;
    NarmaOptions opt;
    opt.literal_delta = cfg.narma_literal_delta;
    try {
        return narma_generate(order, static_cast<std::size_t>(cfg.narma_length), derive_seed(cfg.seed, kTaskStream),
                              opt);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("task: ") + e.what() + " (narma_literal_delta)");
    }
}

/// One reservoir family at one physical setting: bounds, evaluation and
/// drive functions over flat genotypes.
class ReservoirProblem {
public:
    ReservoirProblem(const ExperimentConfig& cfg, int grid_side, double temperature_k, double thickness_nm,
                     double dt_fs, int refinements)
        : kind_(cfg.reservoir), material_(cfg.material) {
        if (kind_ == ReservoirKind::film) {
            FilmSetting s;
            s.material = builtin_material(*parse_element(cfg.material));
            s.grid_side = grid_side;
            s.thickness = thickness_nm * constants::nanometre;
            s.temperature = temperature_k;
            s.sim.dt = dt_fs * constants::femtosecond;
            s.sim.refinements = refinements;
            film_.emplace(s);
        } else {
            EsnSetting s;
            s.topology = kind_ == ReservoirKind::esn ? Topology::random : Topology::lattice;
            s.nodes = grid_side * grid_side;
            esn_.emplace(s);
        }
    }

    ReservoirKind kind() const { return kind_; }
    bool is_film() const { return film_.has_value(); }
    const FilmGenomeCodec& film_codec() const { return *film_; }

    /// Material column of the results table.
    std::string label() const { return is_film() ? material_ : enum_name(kind_, kReservoirNames); }

    std::vector<GeneBounds> bounds() const { return is_film() ? film_->bounds() : esn_->bounds(); }
    std::size_t size() const { return is_film() ? film_->size() : esn_->size(); }

    int state_dim() const {
        return is_film() ? 3 * film_->cells() : esn_->setting().nodes;
    }

    EvalFn eval_fn(const TaskData& task, std::uint64_t noise_seed) const {
        if (is_film()) return film_eval_fn(*film_, task, noise_seed);
        return esn_eval_fn(*esn_, task);
    }

    Score score(std::span<const double> genes, const TaskData& task, std::uint64_t noise_seed) const {
        if (is_film()) return evaluate_film(film_->decode(genes), film_->setting().sim, task, noise_seed);
        return evaluate_esn(esn_->decode(genes), task);
    }

    DriveFn drive_fn(std::span<const double> genes, std::uint64_t noise_seed) const {
        if (is_film())
            return film_drive_fn(std::make_shared<const FilmReservoir>(film_->decode(genes), film_->setting().sim),
                                 noise_seed);
        return esn_drive_fn(esn_->decode(genes));
    }

    nlohmann::json describe(std::span<const double> genes) const {
        nlohmann::json j;
        if (is_film()) {
            const ReservoirGenome g = film_->decode(genes);
            std::vector<double> wu(g.w_in.col(0).data(), g.w_in.col(0).data() + g.w_in.rows());
            std::vector<double> wb(g.w_in.col(1).data(), g.w_in.col(1).data() + g.w_in.rows());
            j = {{"material", material_},
                 {"grid_side", g.grid_side},
                 {"thickness_nm", g.thickness / constants::nanometre},
                 {"temperature_k", g.temperature},
                 {"b", g.b},
                 {"alpha_damping", g.alpha_damping},
                 {"leak_a", g.leak_a},
                 {"w_input", wu},
                 {"w_bias", wb}};
        } else {
            const EsnConfig c = esn_->decode(genes);
            j = {{"topology", std::string(to_string(c.topology))},
                 {"nodes", c.n_nodes},
                 {"b", c.b},
                 {"c", c.c},
                 {"leak_a", c.leak_a}};
        }
        return j;
    }

    /// Relaxed versus unrelaxed start on the first 100 training inputs.
    std::optional<EchoStateCheck> echo_state(std::span<const double> genes, const TaskData& task,
                                             std::uint64_t noise_seed) const {
        if (!is_film()) return std::nullopt;
        const FilmReservoir film(film_->decode(genes), film_->setting().sim);
        const auto prefix = task.input_of(task.train).first(std::min<std::size_t>(100, task.train.length));
        return check_echo_state(film, prefix, 50, 1e-3, noise_seed);
    }

private:
    ReservoirKind kind_;
    std::string material_;
    std::optional<FilmGenomeCodec> film_;
    std::optional<EsnGenomeCodec> esn_;
};

struct ReservoirMetrics {
    double kr = 0.0;
    double mc = 0.0;
};

inline ReservoirMetrics measure(const ReservoirProblem& p, std::span<const double> genes, const ExperimentConfig& cfg,
                                std::uint64_t seed) {
    const DriveFn drive = p.drive_fn(genes, derive_seed(seed, 1));
    const int dim = p.state_dim();
    const int streams = cfg.kr_streams > 0 ? cfg.kr_streams : dim;
    const int max_delay = cfg.mc_max_delay > 0 ? cfg.mc_max_delay : std::min(100, 2 * dim);
    ReservoirMetrics m;
    m.kr = kernel_rank(drive, streams, cfg.kr_length, derive_seed(seed, 2)).normalised;
    m.mc = memory_capacity(drive, max_delay, cfg.mc_length, derive_seed(seed, 3)).total;
    return m;
}

struct ExperimentResult {
    std::vector<std::filesystem::path> files;
    /// "run k: message" for every run that failed outright.
    std::vector<std::string> failures;
};

namespace detail {

struct EvolvedRun {
    MgaResult mga;
    nlohmann::json best;
};

inline MgaParams mga_params(const ExperimentConfig& cfg) {
    MgaParams p;
    p.population = cfg.population;
    p.tournaments = cfg.tournaments;
    p.mutation_rate = cfg.mutation_rate;
    p.recombination_rate = cfg.recombination_rate;
    p.deme_fraction = cfg.deme_fraction;
    return p;
}

inline nlohmann::json genome_record(const ExperimentConfig& cfg, const ReservoirProblem& p,
                                    std::span<const double> genes, const Fitness& f, int run, std::uint64_t seed,
                                    const TaskData& task, std::uint64_t noise_seed) {
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(format_double(v)); };
    nlohmann::json j = {{"config", to_json(cfg)},
                        {"run", run},
                        {"seed", seed},
                        {"noise_seed", noise_seed},
                        {"task", task.name},
                        {"task_seed", task.seed},
                        {"reservoir", enum_name(p.kind(), kReservoirNames)},
                        {"genes", std::vector<double>(genes.begin(), genes.end())},
                        {"val_nmse", num(f.val_nmse)},
                        {"test_nmse", num(f.test_nmse)},
                        {"decoded", p.describe(genes)}};
    if (p.is_film()) {
        try {
            const auto echo = p.echo_state(genes, task, noise_seed);
            j["echo_state"] = {{"ok", echo->ok}, {"distance", echo->distance}, {"horizon", 50}, {"tolerance", 1e-3}};
        } catch (const std::exception& e) {
            j["echo_state"] = {{"ok", false}, {"error", e.what()}};
        }
    }
    return j;
}

inline EvolvedRun evolve_one(const ExperimentConfig& cfg, const ReservoirProblem& p, const TaskData& task, int run,
                             std::uint64_t seed) {
    const std::uint64_t noise_seed = derive_seed(seed, 1);
    const auto bounds = p.bounds();
    EvolvedRun r;
    r.mga = mga_run(bounds, p.eval_fn(task, noise_seed), mga_params(cfg), derive_seed(seed, 0));
    r.best = genome_record(cfg, p, r.mga.best_genes, r.mga.best, run, seed, task, noise_seed);
    return r;
}

inline ResultRow base_row(const ReservoirProblem& p, const TaskData& task, int grid_side, double temperature_k,
                          double thickness_nm, int run, const Fitness& f) {
    return {p.label(), task.name, grid_side, temperature_k, thickness_nm, run, f.val_nmse, f.test_nmse, {}, {}};
}

inline std::vector<std::string> collect_failures(const std::vector<std::string>& errors, const std::string& what) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty()) out.push_back(what + " " + std::to_string(i) + ": " + errors[i]);
    return out;
}

class Writer {
public:
    Writer(const ExperimentConfig& cfg, ExperimentResult& result) : cfg_(cfg), result_(result) {}

    void write(const std::string& name, const std::string& content) {
        const auto path = cfg_.out / name;
        write_atomic(path, content);
        result_.files.push_back(path);
    }

    void json(const std::string& name, const nlohmann::json& j) { write(name, j.dump(2) + "\n"); }

    void results(const std::vector<ResultRow>& rows) {
        write("results.csv", results_csv(cfg_, rows));
        write("summary.csv", summary_csv(cfg_, rows));
    }

    void errors(const std::vector<std::string>& failures) {
        if (failures.empty()) return;
        std::string s = config_line(cfg_);
        for (const auto& f : failures) s += f + "\n";
        write("errors.log", s);
    }

private:
    const ExperimentConfig& cfg_;
    ExperimentResult& result_;
};

inline void run_evolve(const ExperimentConfig& cfg, ExperimentResult& res) {
    const TaskData task = make_task(cfg);
    const ReservoirProblem p(cfg, cfg.grid_side, cfg.temperature_k, cfg.thickness_nm, cfg.dt_fs, cfg.refinements);
    std::vector<std::optional<EvolvedRun>> runs(static_cast<std::size_t>(cfg.runs));
    std::vector<std::optional<ReservoirMetrics>> metrics(runs.size());
    const auto errors = parallel_for(cfg.runs, cfg.jobs, [&](int k) {
        const std::uint64_t seed = run_seed(cfg.seed, k);
        runs[static_cast<std::size_t>(k)] = evolve_one(cfg, p, task, k, seed);
        if (cfg.with_metrics)
            metrics[static_cast<std::size_t>(k)] = measure(p, runs[static_cast<std::size_t>(k)]->mga.best_genes, cfg, seed);
    });

    Writer w(cfg, res);
    std::vector<ResultRow> rows;
    std::vector<std::pair<int, std::vector<MgaHistoryRow>>> hist;
    for (int k = 0; k < cfg.runs; ++k) {
        const auto& r = runs[static_cast<std::size_t>(k)];
        if (!r) continue;
        ResultRow row = base_row(p, task, cfg.grid_side, cfg.temperature_k, cfg.thickness_nm, k, r->mga.best);
        if (const auto& m = metrics[static_cast<std::size_t>(k)]) {
            row.kr = m->kr;
            row.mc = m->mc;
        }
        rows.push_back(row);
        hist.emplace_back(k, r->mga.history);
        w.json("best_genome_run" + std::to_string(k) + ".json", r->best);
    }
    w.results(rows);
    w.write("history.csv", history_csv(cfg, hist));
    res.failures = collect_failures(errors, "run");
    w.errors(res.failures);
}

inline void run_random_search(const ExperimentConfig& cfg, ExperimentResult& res) {
    const TaskData task = make_task(cfg);
    const ReservoirProblem p(cfg, cfg.grid_side, cfg.temperature_k, cfg.thickness_nm, cfg.dt_fs, cfg.refinements);
    std::vector<std::optional<BatchBest>> best(static_cast<std::size_t>(cfg.runs));
    const auto errors = parallel_for(cfg.runs, cfg.jobs, [&](int k) {
        const std::uint64_t seed = run_seed(cfg.seed, k);
        const auto bounds = p.bounds();
        best[static_cast<std::size_t>(k)] =
            std::move(random_search(bounds, p.eval_fn(task, derive_seed(seed, 1)), cfg.batch, 1, seed).front());
    });
    Writer w(cfg, res);
    std::vector<ResultRow> rows;
    for (int k = 0; k < cfg.runs; ++k)
        if (const auto& b = best[static_cast<std::size_t>(k)])
            rows.push_back(base_row(p, task, cfg.grid_side, cfg.temperature_k, cfg.thickness_nm, k, b->fitness));
    w.results(rows);
    res.failures = collect_failures(errors, "batch");
    w.errors(res.failures);
}

/// The configured genotype, or one evolved at the base setting (written out).
inline std::vector<double> base_genome(const ExperimentConfig& cfg, const TaskData& task, Writer& w) {
    const ReservoirProblem p(cfg, cfg.grid_side, cfg.temperature_k, cfg.thickness_nm, cfg.dt_fs, cfg.refinements);
    if (!cfg.genome.empty()) {
        if (cfg.genome.size() != p.size())
            throw ConfigError("genome: expected " + std::to_string(p.size()) + " genes, got " +
                              std::to_string(cfg.genome.size()));
        return cfg.genome;
    }
    const std::uint64_t seed = derive_seed(cfg.seed, kGenomeStream);
    EvolvedRun r = evolve_one(cfg, p, task, 0, seed);
    w.json("best_genome.json", r.best);
    w.write("history.csv", history_csv(cfg, {{0, r.mga.history}}));
    return r.mga.best_genes;
}

inline void run_sweep_temperature(const ExperimentConfig& cfg, ExperimentResult& res) {
    const TaskData task = make_task(cfg);
    Writer w(cfg, res);
    const std::vector<double> genes = base_genome(cfg, task, w);

    struct Point {
        double t, th;
        int run;
    };
    std::vector<Point> points;
    for (double th : cfg.thicknesses_nm)
        for (double t : cfg.temperatures_k)
            for (int k = 0; k < cfg.runs; ++k) points.push_back({t, th, k});
    std::vector<std::optional<Fitness>> fit(points.size());
    const auto errors = parallel_for(static_cast<int>(points.size()), cfg.jobs, [&](int i) {
        const Point& pt = points[static_cast<std::size_t>(i)];
        const ReservoirProblem p(cfg, cfg.grid_side, pt.t, pt.th, cfg.dt_fs, cfg.refinements);
        fit[static_cast<std::size_t>(i)] =
            safe_evaluate(p.eval_fn(task, run_seed(cfg.seed, pt.run)), genes);
    });
    const ReservoirProblem label(cfg, cfg.grid_side, cfg.temperature_k, cfg.thickness_nm, cfg.dt_fs, cfg.refinements);
    std::vector<ResultRow> rows;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (fit[i]) rows.push_back(base_row(label, task, cfg.grid_side, points[i].t, points[i].th, points[i].run, *fit[i]));
    w.results(rows);
    res.failures = collect_failures(errors, "point");
    w.errors(res.failures);
}

inline void run_sweep_scaling(const ExperimentConfig& cfg, ExperimentResult& res) {
    const TaskData task = make_task(cfg);
    const int per = cfg.runs;
    const int n = static_cast<int>(cfg.grid_sides.size()) * per;
    std::vector<std::optional<EvolvedRun>> runs(static_cast<std::size_t>(n));
    const auto errors = parallel_for(n, cfg.jobs, [&](int i) {
        const int side = cfg.grid_sides[static_cast<std::size_t>(i / per)];
        const ReservoirProblem p(cfg, side, cfg.temperature_k, cfg.thickness_nm, cfg.dt_fs, cfg.refinements);
        runs[static_cast<std::size_t>(i)] =
            evolve_one(cfg, p, task, i % per, derive_seed(run_seed(cfg.seed, i % per), static_cast<std::uint64_t>(side)));
    });
    Writer w(cfg, res);
    std::vector<ResultRow> rows;
    for (std::size_t s = 0; s < cfg.grid_sides.size(); ++s) {
        const int side = cfg.grid_sides[s];
        const ReservoirProblem p(cfg, side, cfg.temperature_k, cfg.thickness_nm, cfg.dt_fs, cfg.refinements);
        std::vector<std::pair<int, std::vector<MgaHistoryRow>>> hist;
        for (int k = 0; k < per; ++k) {
            const auto& r = runs[s * static_cast<std::size_t>(per) + static_cast<std::size_t>(k)];
            if (!r) continue;
            rows.push_back(base_row(p, task, side, cfg.temperature_k, cfg.thickness_nm, k, r->mga.best));
            hist.emplace_back(k, r->mga.history);
            w.json("best_genome_side" + std::to_string(side) + "_run" + std::to_string(k) + ".json", r->best);
        }
        w.write("history_side" + std::to_string(side) + ".csv", history_csv(cfg, hist));
    }
    w.results(rows);
    res.failures = collect_failures(errors, "run");
    w.errors(res.failures);
}

inline void run_metrics(const ExperimentConfig& cfg, ExperimentResult& res) {
    const TaskData task = make_task(cfg);
    const ReservoirProblem p(cfg, cfg.grid_side, cfg.temperature_k, cfg.thickness_nm, cfg.dt_fs, cfg.refinements);
    if (!cfg.genome.empty() && cfg.genome.size() != p.size())
        throw ConfigError("genome: expected " + std::to_string(p.size()) + " genes, got " +
                          std::to_string(cfg.genome.size()));
    std::vector<std::optional<ResultRow>> rows(static_cast<std::size_t>(cfg.runs));
    const auto errors = parallel_for(cfg.runs, cfg.jobs, [&](int k) {
        const std::uint64_t seed = run_seed(cfg.seed, k);
        std::vector<double> genes = cfg.genome;
        if (genes.empty()) {
            Rng rng = make_rng(seed, 0);
            const auto bounds = p.bounds();
            genes = sample_uniform(bounds, rng);
        }
        const Fitness f = safe_evaluate(p.eval_fn(task, derive_seed(seed, 4)), genes);
        ResultRow row = base_row(p, task, cfg.grid_side, cfg.temperature_k, cfg.thickness_nm, k, f);
        const ReservoirMetrics m = measure(p, genes, cfg, seed);
        row.kr = m.kr;
        row.mc = m.mc;
        rows[static_cast<std::size_t>(k)] = row;
    });
    Writer w(cfg, res);
    std::vector<ResultRow> out;
    for (const auto& r : rows)
        if (r) out.push_back(*r);
    w.results(out);
    res.failures = collect_failures(errors, "run");
    w.errors(res.failures);
}

/// Centre cell driven with a pulse of `impulse_width` steps every
/// `impulse_period` steps, one input per integrator step. impulse.csv holds
/// the mean deviation from an undriven reference run per ring of cells
/// around the centre (Chebyshev distance), so the common drift cancels.
inline void run_impulse_demo(const ExperimentConfig& cfg, ExperimentResult& res) {
    const int side = cfg.grid_side;
    const int n = side * side;
    const int centre = (side / 2) * side + side / 2;
    ReservoirGenome g;
    g.material = builtin_material(*parse_element(cfg.material));
    g.grid_side = side;
    g.thickness = cfg.thickness_nm * constants::nanometre;
    g.temperature = cfg.temperature_k;
    g.w_in = Eigen::MatrixX2d::Zero(n, 2);
    g.w_in(centre, 0) = 1.0;
    g.b = 2.0;
    g.alpha_damping = 0.1;
    FilmSimOptions opt;
    opt.dt = cfg.dt_fs * constants::femtosecond;
    opt.input_interval = opt.dt;
    opt.refinements = cfg.refinements;
    const FilmReservoir film(g, opt);
    const std::uint64_t noise_seed = run_seed(cfg.seed, 0);

    const auto steps = static_cast<std::size_t>(cfg.impulse_steps);
    std::vector<double> u(steps, 0.0);
    for (std::size_t t = 0; t < steps; ++t)
        if (static_cast<int>(t) % cfg.impulse_period < cfg.impulse_width) u[t] = 1.0;
    const StateMatrix reference = film.drive(std::vector<double>(steps, 0.0), noise_seed);

    const int rings = side / 2 + 1;
    std::vector<int> ring_of(static_cast<std::size_t>(n));
    std::vector<int> ring_count(static_cast<std::size_t>(rings), 0);
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) {
            const int d = std::max(std::abs(x - side / 2), std::abs(y - side / 2));
            ring_of[static_cast<std::size_t>(y * side + x)] = d;
            ++ring_count[static_cast<std::size_t>(d)];
        }

    Writer w(cfg, res);
    const std::string cfg_line = config_line(cfg);
    std::string header = cfg_line + "step,input";
    for (int d = 0; d < rings; ++d) header += ",ring" + std::to_string(d);
    header += '\n';
    std::string table;
    const int width = static_cast<int>(std::to_string(cfg.impulse_steps - 1).size());
    film.drive(u, noise_seed, nullptr, [&](long t, const FilmState& st) {
        if (t == 0) table = header;  // a refined rerun starts over
        std::vector<double> dev(static_cast<std::size_t>(rings), 0.0);
        for (int i = 0; i < n; ++i) {
            const Eigen::RowVector3d ref = reference.values.row(t).segment<3>(3 * i);
            dev[static_cast<std::size_t>(ring_of[static_cast<std::size_t>(i)])] += (st.m.row(i) - ref).norm();
        }
        table += std::to_string(t) + ',' + format_double(u[static_cast<std::size_t>(t)]);
        for (int d = 0; d < rings; ++d)
            table += ',' + format_double(dev[static_cast<std::size_t>(d)] / ring_count[static_cast<std::size_t>(d)]);
        table += '\n';
        std::ostringstream os;
        write_snapshot(os, st);
        os << cfg_line;
        std::string idx = std::to_string(t);
        idx.insert(0, static_cast<std::size_t>(width) - idx.size(), '0');
        w.write("snapshots/step_" + idx + ".txt", os.str());
    });
    w.write("impulse.csv", table);
}

inline constexpr const char* kTimestepHeader =
    "material,task,grid_side,run,val_nmse_fine,test_nmse_fine,val_nmse_coarse,test_nmse_coarse";
inline constexpr const char* kRankSumHeader = "task,n,fine_dt_fs,coarse_dt_fs,w,z,p";

inline void run_timestep_compare(const ExperimentConfig& cfg, ExperimentResult& res) {
    const TaskData task = make_task(cfg);
    const ReservoirProblem fine(cfg, cfg.grid_side, cfg.temperature_k, cfg.thickness_nm, cfg.fine_dt_fs, cfg.refinements);
    const ReservoirProblem coarse(cfg, cfg.grid_side, cfg.temperature_k, cfg.thickness_nm, cfg.dt_fs, cfg.refinements);
    std::vector<std::optional<std::pair<Fitness, Fitness>>> pairs(static_cast<std::size_t>(cfg.runs));
    const auto errors = parallel_for(cfg.runs, cfg.jobs, [&](int k) {
        const std::uint64_t seed = run_seed(cfg.seed, k);
        Rng rng = make_rng(seed, 0);
        const auto bounds = coarse.bounds();
        const std::vector<double> genes = sample_uniform(bounds, rng);
        const Fitness a = safe_evaluate(fine.eval_fn(task, derive_seed(seed, 1)), genes);
        const Fitness b = safe_evaluate(coarse.eval_fn(task, derive_seed(seed, 1)), genes);
        pairs[static_cast<std::size_t>(k)] = std::make_pair(a, b);
    });
    res.failures = collect_failures(errors, "config");

    Writer w(cfg, res);
    std::string table = config_line(cfg) + kTimestepHeader + "\n";
    std::vector<double> fine_test, coarse_test;
    for (int k = 0; k < cfg.runs; ++k) {
        const auto& pr = pairs[static_cast<std::size_t>(k)];
        if (!pr) continue;
        table += coarse.label() + ',' + task.name + ',' + std::to_string(cfg.grid_side) + ',' + std::to_string(k) +
                 ',' + format_double(pr->first.val_nmse) + ',' + format_double(pr->first.test_nmse) + ',' +
                 format_double(pr->second.val_nmse) + ',' + format_double(pr->second.test_nmse) + '\n';
        fine_test.push_back(pr->first.test_nmse);
        coarse_test.push_back(pr->second.test_nmse);
    }
    w.write("timestep.csv", table);
    std::string rs = config_line(cfg) + kRankSumHeader + "\n";
    if (fine_test.size() >= 5) {
        const RankSum r = wilcoxon_ranksum(fine_test, coarse_test);
        rs += task.name + ',' + std::to_string(fine_test.size()) + ',' + format_double(cfg.fine_dt_fs) + ',' +
              format_double(cfg.dt_fs) + ',' + format_double(r.w) + ',' + format_double(r.z) + ',' +
              format_double(r.p) + '\n';
    } else {
        res.failures.push_back("rank-sum: fewer than five completed configs");
    }
    w.write("ranksum.csv", rs);
    w.errors(res.failures);
}

}  // namespace detail

/// Resolves and validates `cfg`, runs its mode and writes every output under
/// `cfg.out`. Throws ConfigError for invalid settings; per-run failures are
/// collected in the result and in errors.log.
inline ExperimentResult run_experiment(ExperimentConfig cfg) {
    cfg = resolve(std::move(cfg));
    validate(cfg);
    ExperimentResult res;
    std::filesystem::create_directories(cfg.out);
    switch (cfg.mode) {
    case Mode::evolve: detail::run_evolve(cfg, res); break;
    case Mode::random_search: detail::run_random_search(cfg, res); break;
    case Mode::sweep_temperature: detail::run_sweep_temperature(cfg, res); break;
    case Mode::sweep_scaling: detail::run_sweep_scaling(cfg, res); break;
    case Mode::metrics: detail::run_metrics(cfg, res); break;
    case Mode::impulse_demo: detail::run_impulse_demo(cfg, res); break;
    case Mode::timestep_compare: detail::run_timestep_compare(cfg, res); break;
    }
    return res;
}

}  // namespace magres
