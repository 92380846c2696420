#pragma once

// Plain-text snapshots of a film's magnetisation.
//
//     # t=<seconds> nx=<Nx> ny=<Ny>
//     <Ny rows of Nx comma-separated m_z values>
//
// With all components requested the header is followed by three labelled
// blocks (`# mx`, `# my`, `# mz`) in that order.

#include "magres/field.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

namespace magres {

inline void write_snapshot(std::ostream& os, const FilmState& state, bool all_components = false) {
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    os << "# t=" << state.time << " nx=" << state.nx << " ny=" << state.ny << '\n';
    auto block = [&](int component) {
        for (int iy = 0; iy < state.ny; ++iy) {
            for (int ix = 0; ix < state.nx; ++ix) {
                if (ix) os << ',';
                os << state.m(iy * state.nx + ix, component);
            }
            os << '\n';
        }
    };
    if (!all_components) {
        block(2);
        return;
    }
    const char* names[] = {"mx", "my", "mz"};
    for (int c = 0; c < 3; ++c) {
        os << "# " << names[c] << '\n';
        block(c);
    }
}

inline void write_snapshot(const std::filesystem::path& path, const FilmState& state, bool all_components = false) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open snapshot file " + path.string());
    write_snapshot(os, state, all_components);
}

}  // namespace magres
