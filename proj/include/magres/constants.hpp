#pragma once

// Physical constants (SI, CODATA 2018).

namespace magres::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double mu_0 = 1.25663706212e-6;          // T m / A
inline constexpr double mu_B = 9.2740100783e-24;          // J / T
inline constexpr double k_B = 1.380649e-23;               // J / K
inline constexpr double gamma_electron = 1.76085963023e11;  // rad / (s T)

inline constexpr double angstrom = 1e-10;
inline constexpr double nanometre = 1e-9;
inline constexpr double femtosecond = 1e-15;
inline constexpr double picosecond = 1e-12;

}  // namespace magres::constants
