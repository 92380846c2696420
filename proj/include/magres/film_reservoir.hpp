#pragma once

// A magnetic film used as a reservoir: per-cell z fields driven by the task
// input, LLG integration over each input window, and the magnetisation of
// every cell read out at the end of the window.

#include "magres/constants.hpp"
#include "magres/errors.hpp"
#include "magres/fpenv.hpp"
#include "magres/llg.hpp"
#include "magres/material.hpp"
#include "magres/rng.hpp"
#include "magres/state_matrix.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>

namespace magres {

/// Evolvable film configuration plus the fixed physical setting it runs in.
struct ReservoirGenome {
    /// Column 0 weights the input u, column 1 the constant bias source (tesla per unit).
    Eigen::MatrixX2d w_in;
    double b = 1.0;
    double alpha_damping = 0.1;
    double leak_a = 1.0;
    MaterialParams material = kCobalt;
    int grid_side = 7;
    double thickness = 0.1 * constants::nanometre;
    double temperature = 0.0;  // K

    int cells() const { return grid_side * grid_side; }

    void validate() const {
        material.validate();
        if (grid_side < 1) throw ConfigError("grid side must be at least 1");
        if (w_in.rows() != cells()) throw ConfigError("input weight map must have one row per cell");
        if (!w_in.allFinite()) throw ConfigError("input weights must be finite");
        if (!(b > 0 && b <= 2)) throw ConfigError("field scaling b must lie in (0, 2]");
        if (!(alpha_damping > 0 && alpha_damping <= 1)) throw ConfigError("damping must lie in (0, 1]");
        if (!(leak_a > 0 && leak_a <= 1)) throw ConfigError("leak rate must lie in (0, 1]");
        if (!(thickness > 0)) throw ConfigError("film thickness must be positive");
        if (!(temperature >= 0)) throw ConfigError("temperature must be non-negative");
    }
};

struct FilmSimOptions {
    double cell_size = 5.0 * constants::nanometre;
    double dt = 100.0 * constants::femtosecond;
    double input_interval = 10.0 * constants::picosecond;
    /// Relaxation uses its own step so the starting state does not depend on `dt`.
    double relax_dt = 100.0 * constants::femtosecond;
    double relax_tolerance = 1e-7;
    double relax_max_time = 20e-9;
    FieldOptions field;
    IntegratorOptions integrator;
    /// On an instability, rerun the whole drive with dt / 10 up to this many times.
    int refinements = 0;

    long substeps() const {
        const double ratio = input_interval / dt;
        const long n = std::lround(ratio);
        if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-6 * ratio)
            throw ConfigError("input interval must be a whole number of integrator steps");
        return n;
    }
};

struct RelaxResult {
    FilmState state;
    bool converged = false;
    long steps = 0;
};

/// Called after every input window with the window index and the film state.
using FilmObserver = std::function<void(long, const FilmState&)>;

/// Per-cell applied field for input u: b (w_u u + w_bias) along z.
inline CellField applied_field(const ReservoirGenome& g, double u) {
    CellField f = CellField::Zero(g.cells(), 3);
    f.col(2) = g.b * (g.w_in.col(0) * u + g.w_in.col(1));
    return f;
}

/// Exponential output filter X_f(t) = (1 - a) X_f(t - 1) + a X(t), X_f(0) = X(0).
inline StateMatrix leaky_filter(const StateMatrix& states, double leak_a) {
    if (!(leak_a > 0 && leak_a <= 1)) throw ConfigError("leak rate must lie in (0, 1]");
    StateMatrix out = states;
    for (Eigen::Index t = 1; t < out.values.rows(); ++t)
        out.values.row(t) = (1.0 - leak_a) * out.values.row(t - 1) + leak_a * states.values.row(t);
    return out;
}

/// A film bound to one genome. Construction relaxes the film once; every
/// drive starts from that relaxed state unless told otherwise.
class FilmReservoir {
public:
    explicit FilmReservoir(ReservoirGenome genome, FilmSimOptions options = {})
        : genome_(std::move(genome)), options_(options) {
        genome_.validate();
        (void)options_.substeps();
        if (options_.refinements < 0) throw ConfigError("refinement count must be non-negative");
        params_ = derive_cell_params(genome_.material, options_.cell_size, genome_.thickness, genome_.alpha_damping);
        model_ = std::make_shared<const FieldModel>(genome_.grid_side, genome_.grid_side, params_, options_.field);
        relaxed_ = relax();
    }

    const ReservoirGenome& genome() const { return genome_; }
    const FilmSimOptions& options() const { return options_; }
    const CellParams& params() const { return params_; }
    const RelaxResult& relaxed() const { return relaxed_; }
    int state_dim() const { return 3 * genome_.cells(); }

    /// Drives the film with one input per window and records (mx, my, mz) of
    /// every cell at the end of each window. The leaky filter is not applied.
    /// A refined rerun replays the observer from the first window.
    StateMatrix drive(std::span<const double> input, std::uint64_t noise_seed, const FilmState* initial = nullptr,
                      const FilmObserver& observer = {}) const {
        double dt = options_.dt;
        for (int attempt = 0;; ++attempt) {
            try {
                return drive_at(input, noise_seed, initial, observer, dt);
            } catch (const InstabilityError&) {
                if (attempt >= options_.refinements) throw;
                dt /= 10.0;
            }
        }
    }

private:
    StateMatrix drive_at(std::span<const double> input, std::uint64_t noise_seed, const FilmState* initial,
                         const FilmObserver& observer, double dt) const {
        const FlushDenormals ftz;
        FilmSimOptions opt = options_;
        opt.dt = dt;
        LlgIntegrator integ(model_, options_.integrator);
        FilmState state = initial ? *initial : relaxed_.state;
        state.time = 0.0;
        Rng rng(noise_seed);
        const long substeps = opt.substeps();
        const int n = genome_.cells();

        StateMatrix out;
        out.values.resize(static_cast<Eigen::Index>(input.size()), 3 * n);
        CellField applied = CellField::Zero(n, 3);
        for (std::size_t t = 0; t < input.size(); ++t) {
            const double u = input[t];
            if (!std::isfinite(u)) throw ConfigError("input sequence must be finite");
            applied.col(2) = genome_.b * (genome_.w_in.col(0) * u + genome_.w_in.col(1));
            try {
                for (long k = 0; k < substeps; ++k) integ.step(state, &applied, genome_.temperature, dt, rng);
            } catch (const InstabilityError& e) {
                throw InstabilityError(std::string(e.what()) + " at input " + std::to_string(t), e.drift(),
                                       static_cast<long>(t));
            }
            auto row = out.values.row(static_cast<Eigen::Index>(t));
            for (int i = 0; i < n; ++i)
                for (int c = 0; c < 3; ++c) row(3 * i + c) = state.m(i, c);
            if (observer) observer(static_cast<long>(t), state);
        }
        return out;
    }

    RelaxResult relax() const {
        const FlushDenormals ftz;
        LlgIntegrator integ(model_, options_.integrator);
        RelaxResult r;
        r.state = FilmState::uniform(genome_.grid_side, genome_.grid_side, Eigen::Vector3d::UnitX());
        Rng unused(0);
        const long cap = std::lround(options_.relax_max_time / options_.relax_dt);
        for (r.steps = 0; r.steps < cap;) {
            const double change = integ.step(r.state, nullptr, 0.0, options_.relax_dt, unused);
            ++r.steps;
            if (change < options_.relax_tolerance) {
                r.converged = true;
                break;
            }
        }
        r.state.time = 0.0;
        return r;
    }

    ReservoirGenome genome_;
    FilmSimOptions options_;
    CellParams params_{};
    std::shared_ptr<const FieldModel> model_;
    RelaxResult relaxed_;
};

/// Relaxes the undriven film from the all +x state at 0 K.
inline RelaxResult relax_film(const ReservoirGenome& genome, const FilmSimOptions& options = {}) {
    return FilmReservoir(genome, options).relaxed();
}

inline StateMatrix drive_film(const ReservoirGenome& genome, std::span<const double> input,
                              const FilmSimOptions& options = {}, std::uint64_t noise_seed = 0) {
    return FilmReservoir(genome, options).drive(input, noise_seed);
}

struct EchoStateCheck {
    bool ok = false;
    double distance = 0.0;  // max |row difference| at the horizon
};

/// Drives the film from its relaxed state and from the unrelaxed all +x state
/// with the same input prefix and compares the rows at `horizon`.
inline EchoStateCheck check_echo_state(const FilmReservoir& film, std::span<const double> prefix, int horizon = 50,
                                       double tolerance = 1e-3, std::uint64_t noise_seed = 0) {
    if (horizon < 1 || static_cast<std::size_t>(horizon) > prefix.size())
        throw ConfigError("echo-state horizon must lie within the input prefix");
    const int side = film.genome().grid_side;
    const FilmState start = FilmState::uniform(side, side, Eigen::Vector3d::UnitX());
    const StateMatrix a = film.drive(prefix, noise_seed);
    const StateMatrix b = film.drive(prefix, noise_seed, &start);
    EchoStateCheck r;
    r.distance = (a.values.row(horizon - 1) - b.values.row(horizon - 1)).cwiseAbs().maxCoeff();
    r.ok = r.distance < tolerance;
    return r;
}

}  // namespace magres
