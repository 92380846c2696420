#pragma once

// Heun predictor-corrector integration of the Landau-Lifshitz-Gilbert equation
//
//     dm/dt = -gamma / (1 + l^2) [ m x H + l m x (m x H) ]
//
// with a thermal field held fixed across the predictor and corrector stages
// (Stratonovich interpretation) and renormalisation after every stage.

#include "magres/errors.hpp"
#include "magres/field.hpp"

#include <memory>
#include <optional>
#include <sstream>

namespace magres {

struct IntegratorOptions {
    /// Largest tolerated | |m| - 1 | after the corrector, before renormalising.
    double max_norm_drift = 1e-6;
    /// Replaces the cell damping, e.g. 0 for conservative-dynamics checks.
    std::optional<double> damping;
};

/// dm/dt for every cell; `out` is resized to match `m`.
inline void llg_rhs(const Eigen::MatrixX3d& m, const CellField& h, double gamma, double lambda,
                    Eigen::MatrixX3d& out) {
    const auto mx = m.col(0).array();
    const auto my = m.col(1).array();
    const auto mz = m.col(2).array();
    const auto hx = h.col(0).array();
    const auto hy = h.col(1).array();
    const auto hz = h.col(2).array();

    const Eigen::ArrayXd cx = my * hz - mz * hy;
    const Eigen::ArrayXd cy = mz * hx - mx * hz;
    const Eigen::ArrayXd cz = mx * hy - my * hx;

    const double pref = -gamma / (1.0 + lambda * lambda);
    out.resize(m.rows(), 3);
    out.col(0).array() = pref * (cx + lambda * (my * cz - mz * cy));
    out.col(1).array() = pref * (cy + lambda * (mz * cx - mx * cz));
    out.col(2).array() = pref * (cz + lambda * (mx * cy - my * cx));
}

inline void normalise_rows(Eigen::MatrixX3d& m) { m.array().colwise() /= m.rowwise().norm().array(); }

/// Reusable integrator bound to one film geometry; keeps its scratch buffers.
/// The interaction operators may be shared between integrators.
class LlgIntegrator {
public:
    LlgIntegrator(int nx, int ny, const CellParams& params, FieldOptions field = {}, IntegratorOptions options = {})
        : model_(std::make_shared<const FieldModel>(nx, ny, params, field)), options_(options) {
        check_options();
    }

    explicit LlgIntegrator(std::shared_ptr<const FieldModel> model, IntegratorOptions options = {})
        : model_(std::move(model)), options_(options) {
        check_options();
    }

    const FieldModel& model() const { return *model_; }
    const CellParams& params() const { return model_->params(); }
    const IntegratorOptions& options() const { return options_; }

    /// One Heun step of length dt. `applied` may be null (zero field). Returns
    /// the largest component change of m over the step.
    double step(FilmState& state, const CellField* applied, double T, double dt, Rng& rng) {
        if (!(dt > 0)) throw ConfigError("integrator time step must be positive");
        const double gamma = params().gamma;
        const double lambda = options_.damping.value_or(params().alpha_damping);
        const bool noisy = T > 0;
        if (noisy) thermal_field_into(thermal_, noise_params_, T, dt, static_cast<std::size_t>(state.cells()), rng);

        total_field(state.m, applied, noisy, h_);
        llg_rhs(state.m, h_, gamma, lambda, k0_);

        pred_ = state.m + dt * k0_;
        normalise_rows(pred_);

        total_field(pred_, applied, noisy, h_);
        llg_rhs(pred_, h_, gamma, lambda, k1_);

        next_ = state.m + (0.5 * dt) * (k0_ + k1_);
        const double drift = (next_.rowwise().norm().array() - 1.0).abs().maxCoeff();
        if (!(drift <= options_.max_norm_drift)) {
            std::ostringstream msg;
            msg << "LLG step lost unit norm (drift " << drift << " > " << options_.max_norm_drift
                << "); reduce the integrator time step";
            throw InstabilityError(msg.str(), drift);
        }
        normalise_rows(next_);
        const double change = (next_ - state.m).cwiseAbs().maxCoeff();
        state.m.swap(next_);
        state.time += dt;
        return change;
    }

private:
    void check_options() {
        if (options_.damping && !(*options_.damping >= 0 && *options_.damping <= 1))
            throw ConfigError("damping override must lie in [0, 1]");
        noise_params_ = model_->params();
        if (options_.damping) noise_params_.alpha_damping = *options_.damping;
    }

    void total_field(const Eigen::MatrixX3d& m, const CellField* applied, bool noisy, CellField& out) const {
        model_->internal_field(m, out);
        if (applied) out += *applied;
        if (noisy) out += thermal_;
        require_finite(out, "effective field");
    }

    std::shared_ptr<const FieldModel> model_;
    IntegratorOptions options_;
    CellParams noise_params_{};
    CellField thermal_, h_;
    Eigen::MatrixX3d k0_, k1_, pred_, next_;
};

/// Single-step convenience wrapper; builds the interaction operators each call.
inline FilmState llg_step(const FilmState& state, const CellParams& params, const CellField& applied, double T,
                          double dt, Rng& rng, FieldOptions field = {}, IntegratorOptions options = {}) {
    LlgIntegrator integ(state.nx, state.ny, params, field, options);
    FilmState next = state;
    integ.step(next, &applied, T, dt, rng);
    return next;
}

}  // namespace magres
