#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hillzone/errors.hpp"
#include "hillzone/run.hpp"

namespace {

using hillzone::Command;
using hillzone::Format;
using hillzone::RunConfig;

// "lo:hi" -> window
bool parse_window(const std::string& text, hillzone::IndexWindow& w) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return false;
  try {
    std::size_t used = 0;
    w.lo = std::stoi(text.substr(0, colon), &used);
    if (used != colon) return false;
    const std::string hi = text.substr(colon + 1);
    w.hi = std::stoi(hi, &used);
    return used == hi.size();
  } catch (const std::exception&) {
    return false;
  }
}

void add_common(CLI::App* sub, RunConfig& c, std::string& format) {
  sub->add_option("potential", c.potential_path, "Potential definition file (YAML)")->required();
  sub->add_option("-o,--output", c.output_path, "Output file (directory for report); stdout if omitted");
  sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--tol-pt", c.tol_pt, "PT tolerance on Im q_n")->capture_default_str();
}

void add_spectral(CLI::App* sub, RunConfig& c) {
  sub->add_option("-K,--K", c.K, "Galerkin truncation (matrix size 2K+1)")->capture_default_str();
  sub->add_option("--grid", c.grid_size, "Quasimomentum grid size on [0, pi]")->capture_default_str();
  sub->add_option("-N,--horizon", c.n_horizon, "Largest band index examined")->capture_default_str();
  sub->add_option("--tol-real", c.tol.tol_real)->capture_default_str();
  sub->add_option("--tol-double", c.tol.tol_double)->capture_default_str();
  sub->add_option("--tol-conj", c.tol.tol_conj)->capture_default_str();
  sub->add_option("--tol-gap", c.tol.tol_gap)->capture_default_str();
  sub->add_option("--tol-t", c.tol.tol_t, "Bisection resolution in t")->capture_default_str();
  sub->add_option("--tol-ode", c.tol.tol_ode)->capture_default_str();
}

void add_criteria(CLI::App* sub, RunConfig& c, std::string& window) {
  sub->add_option("--window", window, "Index window lo:hi")->default_str("8:64");
  sub->add_option("--s", c.s, "Smoothness index; defaults to the file's smoothness_s");
  sub->add_flag("--assert-asymptotic", c.assert_asymptotic,
                "Accept window evidence for the asymptotic hypotheses");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bloch spectra and finite-zone tests for PT-symmetric periodic potentials"};
  app.require_subcommand(1);

  RunConfig c;
  std::string format;
  std::string window = "8:64";

  auto* disc = app.add_subcommand("discriminant", "Hill discriminant on a lambda grid (CSV)");
  add_common(disc, c, format);
  disc->add_option("--lambda-min", c.lambda_min)->capture_default_str();
  disc->add_option("--lambda-max", c.lambda_max)->capture_default_str();
  disc->add_option("--count", c.lambda_count, "Number of grid points")->capture_default_str();
  disc->add_option("--lambda-im", c.lambda_im, "Imaginary part of every grid point")->capture_default_str();
  disc->add_option("--tol-ode", c.tol.tol_ode)->capture_default_str();

  auto* bands = app.add_subcommand("bands", "Band curves lambda_n(t) (CSV)");
  add_common(bands, c, format);
  add_spectral(bands, c);
  bands->add_option("--indices", c.band_indices, "Band indices; default -N-1..N")->delimiter(',');

  auto* gaps = app.add_subcommand("gaps", "Real intervals, gaps and spectral verdict (JSON)");
  add_common(gaps, c, format);
  add_spectral(gaps, c);

  auto* crit = app.add_subcommand("criteria", "Fourier-coefficient criteria (JSON)");
  add_common(crit, c, format);
  add_criteria(crit, c, window);

  auto* verdict = app.add_subcommand("verdict", "Spectral and algebraic verdicts compared (JSON)");
  add_common(verdict, c, format);
  add_spectral(verdict, c);
  add_criteria(verdict, c, window);

  auto* report = app.add_subcommand("report", "Everything, plus plot-ready CSVs, into a directory");
  add_common(report, c, format);
  add_spectral(report, c);
  add_criteria(report, c, window);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::pair<CLI::App*, Command> commands[] = {
      {disc, Command::Discriminant}, {bands, Command::Bands},     {gaps, Command::Gaps},
      {crit, Command::Criteria},     {verdict, Command::Verdict}, {report, Command::Report}};
  for (const auto& [sub, cmd] : commands)
    if (sub->parsed()) c.command = cmd;

  if (!format.empty()) c.format = format == "csv" ? Format::Csv : Format::Json;
  if (!parse_window(window, c.window)) {
    hillzone::write_json(std::cerr, {{"error", hillzone::ConfigError("expected lo:hi", "window", 0).payload()}});
    return 2;
  }
  return hillzone::run(c, std::cout, std::cerr);
}
