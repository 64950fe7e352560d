#pragma once

#include <filesystem>
#include <string>

#include "hillzone/potential.hpp"

namespace hillzone {

/// A parsed potential definition file.
struct PotentialFile {
  PeriodicPotential potential;
  bool assert_pt = true;
  std::string name;
};

/// Load a potential definition (YAML). Schema:
///
///   name: sawtooth                  # optional label
///   representation: fourier | piecewise | sampled
///   fourier: [[n, re, im], ...]     # for fourier
///   pieces:                         # for piecewise, tiling [0, 1)
///     - {interval: [a, b], poly_re: [c0, c1, ...], poly_im: [...]}
///   samples: file.csv               # for sampled; columns x,re,im, header optional
///   smoothness_s: 0
///   jumps:
///     - {location: 0.0, component: im, order: 0, size: 1.0}
///   assert_pt: true                 # default true
///
/// Piece polynomials use the local variable u = x - a. Relative sample paths
/// resolve against the potential file's directory. Errors are ConfigError
/// carrying the offending key and line.
PotentialFile load_potential_file(const std::filesystem::path& path);

/// Same, from in-memory text; `base_dir` resolves relative sample paths.
PotentialFile parse_potential(const std::string& text,
                              const std::filesystem::path& base_dir = ".");

}  // namespace hillzone
