#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hillzone/criteria.hpp"
#include "hillzone/serialize.hpp"
#include "hillzone/spectrum.hpp"

namespace hillzone {

enum class Command { Discriminant, Bands, Gaps, Criteria, Verdict, Report };
enum class Format { Csv, Json };

struct RunConfig {
  std::filesystem::path potential_path;
  Command command = Command::Verdict;

  int K = 64;
  int grid_size = 128;
  int n_horizon = 10;
  IndexWindow window;
  std::optional<int> s;  // defaults to the file's smoothness_s
  bool assert_asymptotic = false;
  SpectrumTolerances tol;
  double tol_pt = 1e-10;

  // discriminant: lambda = re + i * lambda_im on a uniform grid of the real part
  double lambda_min = 0.0;
  double lambda_max = 100.0;
  int lambda_count = 101;
  double lambda_im = 0.0;

  // bands: indices to trace; empty means -n_horizon-1 .. n_horizon
  std::vector<int> band_indices;

  std::optional<std::filesystem::path> output_path;  // file, or directory for `report`
  std::optional<Format> format;                       // per-command default when empty
};

/// Throws ConfigError on out-of-range knobs.
void validate(const RunConfig& config);

/// Outcome of comparing the spectral and algebraic routes. `agree` is one
/// of "true", "false", "conditionally", "true-on-nonfinite".
struct VerdictComparison {
  Verdict spectral = Verdict::Undetermined;
  AlgebraicVerdict algebraic = AlgebraicVerdict::NotConcluded;
  std::string agree;
  std::string explanation;
};

VerdictComparison compare_verdicts(Verdict spectral, AlgebraicVerdict algebraic);

/// Reality predictions from the sign of P_k checked against the spectral cluster
/// classifications for every applicable index in [n_est, horizon].
json summary4_cross_check(const Summary4Report& s4, const GapReport& gaps, const SpectrumTolerances& tol);

/// Runs one command. Artifacts go to config.output_path or `out`; error
/// payloads go to `err` as JSON. Returns 0 on success, 2 for configuration
/// errors and 3 for numerical failures.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace hillzone
