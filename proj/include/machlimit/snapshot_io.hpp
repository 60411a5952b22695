#pragma once

#include <filesystem>
#include <string>

#include "machlimit/field.hpp"
#include "machlimit/state.hpp"

namespace machlimit {

// Field snapshot format: flat little-endian float64 in row-major order
// (x1 fastest, then x2, then x3), interior nodes only, one file per
// component, plus a JSON sidecar with grid metadata.

void write_component(const std::filesystem::path& stem, const ScalarField& f,
                     const Grid& g, const std::string& component, double t,
                     double eps);

// Reads <stem>.f64 / <stem>.json written by write_component; validates the
// sidecar against `g` and returns the field.
ScalarField read_component(const std::filesystem::path& stem, const Grid& g,
                           std::string* component = nullptr, double* t = nullptr,
                           double* eps = nullptr);

// Writes every component of a state under dir with the given prefix:
// <prefix>_q, <prefix>_u1, ..., <prefix>_F11, ..., <prefix>_S.
void write_state(const std::filesystem::path& dir, const std::string& prefix,
                 const State& s, const Grid& g);

// Generic 2D array (e.g. the wave-packet transform over (t, tau)) in the same
// binary format; rows of length n_fast, n_slow rows, fast index first.
void write_matrix(const std::filesystem::path& stem,
                  const std::vector<double>& data, int n_fast, int n_slow,
                  double fast_extent, double slow_extent,
                  const std::string& component);

}  // namespace machlimit
