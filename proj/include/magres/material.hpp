#pragma once

// Atomistic material constants and their coarse-graining into micromagnetic
// cell parameters.

#include "magres/constants.hpp"
#include "magres/errors.hpp"

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

namespace magres {

enum class Element { Ni, Co, Fe };
enum class Crystal { fcc, bcc };

struct MaterialParams {
    Element name;
    Crystal crystal;
    double unit_cell_size_a;     // Å
    double atomic_moment_mu_s;   // Bohr magnetons
    double exchange_J_ij;        // J per link
    double anisotropy_k;         // J per atom
    double rescaling_exponent;
    double rescaling_curie_T;    // K

    void validate() const {
        if (!(unit_cell_size_a > 0) || !(atomic_moment_mu_s > 0) || !(exchange_J_ij > 0) ||
            !(anisotropy_k > 0) || !(rescaling_exponent > 0) || !(rescaling_curie_T > 0))
            throw ConfigError("material parameters must all be strictly positive");
        if (crystal != Crystal::fcc && crystal != Crystal::bcc) throw ConfigError("unsupported crystal structure");
    }
};

inline constexpr MaterialParams kNickel{Element::Ni, Crystal::fcc, 3.524, 0.606, 2.757e-21, 5.47e-26, 2.322, 635.0};
inline constexpr MaterialParams kCobalt{Element::Co, Crystal::fcc, 2.507, 1.72, 6.064e-21, 6.69e-24, 2.369, 1395.0};
inline constexpr MaterialParams kIron{Element::Fe, Crystal::bcc, 2.866, 2.22, 7.050e-21, 5.65e-25, 2.876, 1049.0};

inline const MaterialParams& builtin_material(Element e) {
    switch (e) {
    case Element::Ni: return kNickel;
    case Element::Co: return kCobalt;
    case Element::Fe: return kIron;
    }
    throw ConfigError("unknown element");
}

inline std::string_view to_string(Element e) {
    switch (e) {
    case Element::Ni: return "Ni";
    case Element::Co: return "Co";
    case Element::Fe: return "Fe";
    }
    return "?";
}

inline std::string_view to_string(Crystal c) { return c == Crystal::fcc ? "fcc" : "bcc"; }

inline std::optional<Element> parse_element(std::string_view s) {
    std::string lower;
    for (char ch : s) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (lower == "ni" || lower == "nickel") return Element::Ni;
    if (lower == "co" || lower == "cobalt") return Element::Co;
    if (lower == "fe" || lower == "iron") return Element::Fe;
    return std::nullopt;
}

/// Atoms in one cubic unit cell.
inline int atoms_per_unit_cell(Crystal c) {
    switch (c) {
    case Crystal::fcc: return 4;
    case Crystal::bcc: return 2;
    }
    throw ConfigError("unsupported crystal structure");
}

inline int nearest_neighbours(Crystal c) {
    switch (c) {
    case Crystal::fcc: return 12;
    case Crystal::bcc: return 8;
    }
    throw ConfigError("unsupported crystal structure");
}

/// Spin-wave correction to the mean-field Curie temperature (3D Heisenberg).
inline constexpr double kCurieCorrection = 0.86;

/// Mean-field Curie temperature from the atomistic exchange. Every atom of a
/// bulk crystal sees the same neighbour shell, so the double sum over the
/// N_c atoms of a cell reduces to N_c * z * J and N_c cancels.
inline double mean_field_curie_T(const MaterialParams& mat, double epsilon = kCurieCorrection) {
    const double links_per_atom = nearest_neighbours(mat.crystal);
    return epsilon * links_per_atom * mat.exchange_J_ij / (3.0 * constants::k_B);
}

struct CellParams {
    double Ms;                // A/m
    double k_u;               // J/m^3
    double A_ex;              // J/m
    double gamma;             // rad/(s T)
    double alpha_damping;
    double cell_size_delta;   // m
    double thickness;         // m
    double m_e = 1.0;
    double n_atoms_per_cell;
    // Temperature rescaling carried over from the material.
    double rescaling_exponent = 1.0;
    double rescaling_curie_T = 1.0;

    double volume() const { return cell_size_delta * cell_size_delta * thickness; }
    double moment() const { return Ms * volume(); }  // A m^2

    void validate() const {
        if (!(Ms > 0) || !(k_u > 0) || !(A_ex > 0))
            throw ConfigError("cell parameters require Ms, k_u, A_ex > 0");
        if (!(alpha_damping > 0 && alpha_damping <= 1))
            throw ConfigError("damping must lie in (0, 1]");
        if (!(m_e > 0 && m_e <= 1)) throw ConfigError("m_e must lie in (0, 1]");
        if (!(cell_size_delta > 0) || !(thickness > 0)) throw ConfigError("cell dimensions must be positive");
    }
};

/// Coarse-grains a material into cells of `cell_size` x `cell_size` x `thickness` (metres).
///
/// Ms and k_u are sums of atomic moments / anisotropies divided by the cell
/// volume. The exchange stiffness uses A = n_uc J / (2a), n_uc being atoms per
/// cubic unit cell.
inline CellParams derive_cell_params(const MaterialParams& mat, double cell_size, double thickness,
                                     double alpha_damping = 1.0) {
    if (!(cell_size > 0)) throw ConfigError("cell size must be positive");
    if (!(thickness > 0)) throw ConfigError("film thickness must be positive");
    const int n_uc = atoms_per_unit_cell(mat.crystal);
    const double a = mat.unit_cell_size_a * constants::angstrom;
    const double volume = cell_size * cell_size * thickness;
    const double n_atoms = n_uc * volume / (a * a * a);

    CellParams p{};
    p.n_atoms_per_cell = n_atoms;
    p.Ms = n_atoms * mat.atomic_moment_mu_s * constants::mu_B / volume;
    p.k_u = n_atoms * mat.anisotropy_k / volume;
    p.A_ex = n_uc * mat.exchange_J_ij / (2.0 * a);
    p.gamma = constants::gamma_electron;
    p.alpha_damping = alpha_damping;
    p.cell_size_delta = cell_size;
    p.thickness = thickness;
    p.m_e = 1.0;
    p.rescaling_exponent = mat.rescaling_exponent;
    p.rescaling_curie_T = mat.rescaling_curie_T;
    p.validate();
    return p;
}

}  // namespace magres
