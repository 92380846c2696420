#pragma once

// Effective-field terms of the micromagnetic Hamiltonian on a rectangular,
// one-cell-thick grid. All fields are in tesla.

#include "magres/constants.hpp"
#include "magres/errors.hpp"
#include "magres/material.hpp"
#include "magres/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace magres {

/// Per-cell 3-vectors, one row per cell.
using CellField = Eigen::MatrixX3d;

/// Unit magnetisation of every cell. Cell (ix, iy) is row iy * nx + ix.
struct FilmState {
    int nx = 0;
    int ny = 0;
    Eigen::MatrixX3d m;
    double time = 0.0;

    int cells() const { return nx * ny; }

    static FilmState uniform(int nx, int ny, const Eigen::Vector3d& direction) {
        FilmState s;
        s.nx = nx;
        s.ny = ny;
        s.m.resize(static_cast<Eigen::Index>(nx) * ny, 3);
        s.m.rowwise() = direction.normalized().transpose();
        return s;
    }

    double max_norm_error() const {
        if (m.rows() == 0) return 0.0;
        return (m.rowwise().norm().array() - 1.0).abs().maxCoeff();
    }
};

struct FieldSample {
    CellField applied;
    CellField anisotropy;
    CellField exchange;
    CellField dipole;
    CellField thermal;

    CellField total() const { return applied + anisotropy + exchange + dipole + thermal; }
};

struct FieldOptions {
    bool dipole = true;
    /// Pairs further apart than this (metres) are skipped; 0 means no cutoff.
    double dipole_cutoff = 0.0;
};

/// Temperature seen by the classical spin model after the power-law rescaling
/// T_sim = T_c (T / T_c)^exponent.
inline double rescaled_temperature(const CellParams& p, double T) {
    if (T <= 0) return 0.0;
    return p.rescaling_curie_T * std::pow(T / p.rescaling_curie_T, p.rescaling_exponent);
}

/// Per-component standard deviation of the thermal field (tesla).
inline double thermal_sigma(const CellParams& p, double T, double dt) {
    const double t_int = rescaled_temperature(p, T);
    if (t_int <= 0) return 0.0;
    return std::sqrt(2.0 * p.alpha_damping * constants::k_B * t_int / (p.gamma * p.moment() * dt));
}

/// Draws an uncorrelated Gaussian thermal field into `out` (resized to n_cells x 3).
inline void thermal_field_into(CellField& out, const CellParams& p, double T, double dt, std::size_t n_cells,
                               Rng& rng) {
    out.resize(static_cast<Eigen::Index>(n_cells), 3);
    const double sigma = thermal_sigma(p, T, dt);
    if (sigma == 0.0) {
        out.setZero();
        return;
    }
    std::normal_distribution<double> normal(0.0, sigma);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
        for (int c = 0; c < 3; ++c) out(i, c) = normal(rng);
}

inline CellField thermal_field(const CellParams& p, double T, double dt, std::size_t n_cells, Rng& rng) {
    CellField out;
    thermal_field_into(out, p, T, dt, n_cells, rng);
    return out;
}

/// Precomputed interaction operators for one film geometry.
///
/// Exchange, anisotropy and the dipole sum are all linear in m, and the film is
/// planar, so the deterministic internal field is
///
///     Bx = Axx mx + Axy my,   By = Axy mx + Ayy my,   Bz = Azz mz
///
/// with dense N x N blocks. `internal_field` evaluates that; `sample` evaluates
/// every term separately and is used for inspection and testing.
class FieldModel {
public:
    FieldModel(int nx, int ny, const CellParams& params, FieldOptions options = {})
        : nx_(nx), ny_(ny), params_(params), options_(options) {
        if (nx < 1 || ny < 1) throw ConfigError("film grid must have at least one cell");
        params_.validate();
        build();
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int cells() const { return nx_ * ny_; }
    const CellParams& params() const { return params_; }
    const FieldOptions& options() const { return options_; }

    /// Coefficient of the exchange field: B_ex,i = coeff * sum_j (m_j - m_i).
    double exchange_coefficient() const {
        const double d = params_.cell_size_delta;
        return 2.0 * params_.A_ex / (params_.Ms * d * d * params_.m_e * params_.m_e);
    }

    /// B_ani = coeff * m_z * z.
    double anisotropy_coefficient() const { return 2.0 * params_.k_u / params_.Ms; }

    /// Self-demagnetising term, B_self = coeff * m.
    double self_demag_coefficient() const { return -constants::mu_0 * params_.Ms / 3.0; }

    const std::vector<std::vector<int>>& neighbours() const { return neighbours_; }

    /// Writes exchange + anisotropy + dipole into `out`.
    void internal_field(const Eigen::MatrixX3d& m, CellField& out) const {
        out.resize(m.rows(), 3);
        out.col(0).noalias() = axx_ * m.col(0);
        out.col(0).noalias() += axy_ * m.col(1);
        out.col(1).noalias() = axy_ * m.col(0);
        out.col(1).noalias() += ayy_ * m.col(1);
        out.col(2).noalias() = azz_ * m.col(2);
    }

    FieldSample sample(const FilmState& state, const CellField* applied = nullptr,
                       const CellField* thermal = nullptr) const {
        check_shape(state);
        const Eigen::Index n = state.m.rows();
        FieldSample s;
        s.applied = applied ? *applied : CellField::Zero(n, 3);
        s.thermal = thermal ? *thermal : CellField::Zero(n, 3);
        s.anisotropy = CellField::Zero(n, 3);
        s.anisotropy.col(2) = anisotropy_coefficient() * state.m.col(2);
        s.exchange = exchange_term(state.m);
        s.dipole = dipole_term(state.m);
        return s;
    }

    /// Total energy (J) of the deterministic Hamiltonian: Zeeman, anisotropy
    /// K V (mx^2 + my^2), exchange and dipole (including the self term).
    double energy(const FilmState& state, const CellField* applied = nullptr) const {
        check_shape(state);
        const Eigen::MatrixX3d& m = state.m;
        const double mu = params_.moment();
        double e = 0.0;
        if (applied) e -= mu * (m.array() * applied->array()).sum();
        e += params_.k_u * params_.volume() * (m.col(0).squaredNorm() + m.col(1).squaredNorm());
        const double c = exchange_coefficient();
        for (int i = 0; i < cells(); ++i)
            for (int j : neighbours_[static_cast<std::size_t>(i)])
                if (j > i) e += 0.5 * c * mu * (m.row(i) - m.row(j)).squaredNorm();
        const CellField dip = dipole_term(m);
        e -= 0.5 * mu * (m.array() * dip.array()).sum();
        return e;
    }

    CellField exchange_term(const Eigen::MatrixX3d& m) const {
        CellField out = CellField::Zero(m.rows(), 3);
        const double c = exchange_coefficient();
        for (int i = 0; i < cells(); ++i)
            for (int j : neighbours_[static_cast<std::size_t>(i)]) out.row(i) += c * (m.row(j) - m.row(i));
        return out;
    }

    /// Pairwise point-dipole sum of moments Ms V m_j plus the self term.
    CellField dipole_term(const Eigen::MatrixX3d& m) const {
        CellField out = CellField::Zero(m.rows(), 3);
        out = self_demag_coefficient() * m;
        if (!options_.dipole) return out;
        const double mu = params_.moment();
        const double pref = constants::mu_0 / (4.0 * constants::pi);
        for (int i = 0; i < cells(); ++i) {
            for (int j = 0; j < cells(); ++j) {
                if (i == j) continue;
                Eigen::Vector3d r = position(i) - position(j);
                const double dist = r.norm();
                if (options_.dipole_cutoff > 0 && dist > options_.dipole_cutoff) continue;
                const Eigen::Vector3d rhat = r / dist;
                const Eigen::Vector3d mj = mu * m.row(j).transpose();
                const Eigen::Vector3d b = pref * (3.0 * mj.dot(rhat) * rhat - mj) / (dist * dist * dist);
                out.row(i) += b.transpose();
            }
        }
        return out;
    }

    Eigen::Vector3d position(int cell) const {
        const double d = params_.cell_size_delta;
        return {(cell % nx_) * d, (cell / nx_) * d, 0.0};
    }

private:
    void check_shape(const FilmState& state) const {
        if (state.nx != nx_ || state.ny != ny_ || state.m.rows() != cells())
            throw ConfigError("film state does not match the field model grid");
    }

    void build() {
        const int n = cells();
        neighbours_.assign(static_cast<std::size_t>(n), {});
        for (int iy = 0; iy < ny_; ++iy) {
            for (int ix = 0; ix < nx_; ++ix) {
                auto& nb = neighbours_[static_cast<std::size_t>(iy * nx_ + ix)];
                if (ix > 0) nb.push_back(iy * nx_ + ix - 1);
                if (ix + 1 < nx_) nb.push_back(iy * nx_ + ix + 1);
                if (iy > 0) nb.push_back((iy - 1) * nx_ + ix);
                if (iy + 1 < ny_) nb.push_back((iy + 1) * nx_ + ix);
            }
        }

        axx_ = Eigen::MatrixXd::Zero(n, n);
        axy_ = Eigen::MatrixXd::Zero(n, n);
        ayy_ = Eigen::MatrixXd::Zero(n, n);
        azz_ = Eigen::MatrixXd::Zero(n, n);

        const double cex = exchange_coefficient();
        for (int i = 0; i < n; ++i) {
            for (int j : neighbours_[static_cast<std::size_t>(i)]) {
                axx_(i, j) += cex;
                ayy_(i, j) += cex;
                azz_(i, j) += cex;
            }
            const double deg = static_cast<double>(neighbours_[static_cast<std::size_t>(i)].size());
            axx_(i, i) -= cex * deg;
            ayy_(i, i) -= cex * deg;
            azz_(i, i) -= cex * deg;
            azz_(i, i) += anisotropy_coefficient();
        }

        const double self = self_demag_coefficient();
        axx_.diagonal().array() += self;
        ayy_.diagonal().array() += self;
        azz_.diagonal().array() += self;
        if (!options_.dipole) return;

        const double k0 = constants::mu_0 / (4.0 * constants::pi) * params_.moment();
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const Eigen::Vector3d r = position(i) - position(j);
                const double dist = r.norm();
                if (options_.dipole_cutoff > 0 && dist > options_.dipole_cutoff) continue;
                const double k = k0 / (dist * dist * dist);
                const double rx = r.x() / dist;
                const double ry = r.y() / dist;
                axx_(i, j) += k * (3.0 * rx * rx - 1.0);
                axy_(i, j) += k * 3.0 * rx * ry;
                ayy_(i, j) += k * (3.0 * ry * ry - 1.0);
                azz_(i, j) -= k;
            }
        }
    }

    int nx_;
    int ny_;
    CellParams params_;
    FieldOptions options_;
    std::vector<std::vector<int>> neighbours_;
    Eigen::MatrixXd axx_, axy_, ayy_, azz_;
};

/// Throws NumericalError for the first cell holding a non-finite component.
inline void require_finite(const CellField& f, const char* what) {
    if (f.allFinite()) return;
    for (Eigen::Index i = 0; i < f.rows(); ++i)
        if (!f.row(i).allFinite()) throw NumericalError(std::string("non-finite ") + what, static_cast<std::size_t>(i));
}

/// Every Hamiltonian term at `state`. The thermal term is drawn when T > 0.
inline FieldSample effective_field(const FilmState& state, const CellParams& params, const CellField& applied,
                                   double T, double dt, Rng& rng, FieldOptions options = {}) {
    if (T < 0) throw ConfigError("temperature must be non-negative");
    const FieldModel model(state.nx, state.ny, params, options);
    CellField thermal;
    thermal_field_into(thermal, params, T, dt, static_cast<std::size_t>(state.cells()), rng);
    FieldSample s = model.sample(state, &applied, &thermal);
    require_finite(s.total(), "effective field");
    return s;
}

}  // namespace magres
