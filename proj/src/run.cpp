#include "hillzone/run.hpp"

#include <cmath>
#include <fstream>
#include <functional>

#include "hillzone/errors.hpp"
#include "hillzone/floquet.hpp"
#include "hillzone/potential_io.hpp"

namespace hillzone {

void validate(const RunConfig& c) {
  if (c.K < 8) throw ConfigError("must be at least 8", "K", 0);
  if (c.grid_size < 64) throw ConfigError("must be at least 64", "grid_size", 0);
  if (c.n_horizon < 0) throw ConfigError("must be non-negative", "n_horizon", 0);
  if (c.window.lo < 1 || c.window.hi < c.window.lo) throw ConfigError("need 1 <= lo <= hi", "window", 0);
  if (c.s && *c.s < 0) throw ConfigError("must be non-negative", "s", 0);
  if (c.lambda_count < 1) throw ConfigError("must be at least 1", "lambda_count", 0);
  if (!(c.lambda_max >= c.lambda_min)) throw ConfigError("lambda_max must not be below lambda_min", "lambda_max", 0);
  const std::pair<const char*, double> tols[] = {
      {"tol_real", c.tol.tol_real}, {"tol_double", c.tol.tol_double}, {"tol_conj", c.tol.tol_conj},
      {"tol_gap", c.tol.tol_gap},   {"tol_ode", c.tol.tol_ode},       {"tol_member", c.tol.tol_member},
      {"tol_t", c.tol.tol_t},       {"tol_pt", c.tol_pt}};
  for (const auto& [key, v] : tols)
    if (!(v > 0.0)) throw ConfigError("tolerances must be positive", key, 0);
}

VerdictComparison compare_verdicts(Verdict spectral, AlgebraicVerdict algebraic) {
  VerdictComparison c{spectral, algebraic, "", ""};
  const bool alg_finite = algebraic == AlgebraicVerdict::FiniteZone;
  switch (spectral) {
    case Verdict::FiniteZone:
      c.agree = alg_finite ? "true" : "conditionally";
      c.explanation = alg_finite ? "both routes find a finite-zone potential"
                                 : "the spectral route finds no gaps near the horizon; the algebraic criteria "
                                   "are sufficient conditions only and do not apply here";
      break;
    case Verdict::InfiniteZone:
      c.agree = alg_finite ? "false" : "true-on-nonfinite";
      c.explanation = alg_finite ? "SR gaps persist at the horizon although a sufficient criterion holds"
                                 : "open gaps persist at the horizon and no sufficient criterion holds";
      break;
    default:
      c.agree = alg_finite ? "conditionally" : "true-on-nonfinite";
      c.explanation = alg_finite ? "the algebraic route concludes finite-zone; the spectral route is bounded "
                                   "by the horizon and cannot confirm it"
                                 : "neither route concludes finite-zone";
      break;
  }
  return c;
}

json summary4_cross_check(const Summary4Report& s4, const GapReport& gaps, const SpectrumTolerances& tol) {
  json checked = json::array();
  int mismatches = 0;
  for (const auto& p : s4.predictions) {
    if (p.n < gaps.n_est || p.n > gaps.horizon_N) continue;
    for (const Boundary b : {Boundary::Periodic, Boundary::Antiperiodic}) {
      const bool applicable = b == Boundary::Periodic ? p.periodic_applicable : p.antiperiodic_applicable;
      if (!applicable) continue;
      const bool predicted = b == Boundary::Periodic ? p.periodic_real : p.antiperiodic_real;
      for (const auto& c : gaps.clusters) {
        if (c.n != p.n || c.boundary != b) continue;
        const bool observed =
            std::abs(c.lower.imag()) <= tol.tol_real && std::abs(c.upper.imag()) <= tol.tol_real;
        if (observed != predicted) ++mismatches;
        checked.push_back({{"n", p.n},
                           {"boundary", to_string(b)},
                           {"predicted_real", predicted},
                           {"observed_real", observed}});
      }
    }
  }
  return {{"checked", std::move(checked)}, {"mismatches", mismatches}};
}

namespace {

struct Loaded {
  PeriodicPotential q;
  PTReport pt;
  std::string name;
};

Loaded load(const RunConfig& c) {
  auto file = load_potential_file(c.potential_path);
  Loaded l{normalize(file.potential), {}, file.name};
  l.pt = validate_pt(l.q, c.tol_pt);
  if (file.assert_pt && !l.pt.is_pt)
    throw InvalidPotential("PT symmetry asserted but max |Im q_n| = " + format_number(l.pt.max_violation) +
                           " exceeds tol_pt");
  return l;
}

std::vector<cplx> lambda_grid(const RunConfig& c) {
  std::vector<cplx> grid;
  for (int j = 0; j < c.lambda_count; ++j) {
    const double re = c.lambda_count == 1
                          ? c.lambda_min
                          : c.lambda_min + (c.lambda_max - c.lambda_min) * j / (c.lambda_count - 1);
    grid.emplace_back(re, c.lambda_im);
  }
  return grid;
}

std::vector<int> band_indices(const RunConfig& c) {
  if (!c.band_indices.empty()) return c.band_indices;
  std::vector<int> out;
  for (int k = -c.n_horizon - 1; k <= c.n_horizon; ++k) out.push_back(k);
  return out;
}

GapOptions gap_options(const RunConfig& c) { return GapOptions{c.K, c.grid_size, c.tol}; }

CriteriaOptions criteria_options(const RunConfig& c) {
  CriteriaOptions o;
  o.s = c.s;
  o.window = c.window;
  o.assert_asymptotic = c.assert_asymptotic;
  return o;
}

json verdict_json(const Loaded& l, const GapReport& g, const CriteriaReport& cr, const RunConfig& c) {
  const auto cmp = compare_verdicts(g.verdict, cr.combined);
  return {{"potential", l.name},
          {"pt", to_json(l.pt)},
          {"spectral", to_string(cmp.spectral)},
          {"algebraic", to_string(cmp.algebraic)},
          {"agree", cmp.agree},
          {"details",
           {{"explanation", cmp.explanation},
            {"spectral_reason", g.reason},
            {"algebraic_reason", cr.combined_reason},
            {"horizon_N", g.horizon_N},
            {"n_est", g.n_est},
            {"window", json::array({c.window.lo, c.window.hi})},
            {"summary4_vs_spectral", summary4_cross_check(cr.summary4, g, c.tol)}}}};
}

void emit(const RunConfig& c, std::ostream& out, const std::function<void(std::ostream&)>& writer) {
  if (!c.output_path) {
    writer(out);
    return;
  }
  std::ofstream file(*c.output_path, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file " + c.output_path->string(), "output", 0);
  writer(file);
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file " + path.string(), "output", 0);
  writer(file);
}

void execute(const RunConfig& c, std::ostream& out) {
  validate(c);
  const Loaded l = load(c);
  const auto& q = l.q;

  switch (c.command) {
    case Command::Discriminant: {
      const auto rows = monodromy_batch(q, lambda_grid(c), c.tol.tol_ode);
      emit(c, out, [&](std::ostream& o) {
        if (c.format.value_or(Format::Csv) == Format::Csv) {
          write_discriminant_csv(o, rows);
        } else {
          json list = json::array();
          for (const auto& m : rows) list.push_back(to_json(m));
          write_json(o, list);
        }
      });
      return;
    }
    case Command::Bands: {
      const auto set = trace_bands(q, band_indices(c), BandOptions{c.K, c.grid_size, c.tol});
      emit(c, out, [&](std::ostream& o) {
        if (c.format.value_or(Format::Csv) == Format::Csv) {
          write_bands_csv(o, set);
        } else {
          json bands = json::array();
          for (const auto& [n, band] : set.bands) bands.push_back(to_json(band, true));
          write_json(o, {{"n_est", set.n_est}, {"K", set.K}, {"bands", std::move(bands)}});
        }
      });
      return;
    }
    case Command::Gaps: {
      const auto g = gaps(q, c.n_horizon, gap_options(c));
      emit(c, out, [&](std::ostream& o) {
        if (c.format.value_or(Format::Json) == Format::Csv) write_intervals_csv(o, g);
        else write_json(o, to_json(g));
      });
      return;
    }
    case Command::Criteria: {
      if (c.format == Format::Csv) throw ConfigError("criteria output is JSON only", "format", 0);
      const auto cr = criteria_report(q, criteria_options(c));
      emit(c, out, [&](std::ostream& o) { write_json(o, to_json(cr)); });
      return;
    }
    case Command::Verdict: {
      if (c.format == Format::Csv) throw ConfigError("verdict output is JSON only", "format", 0);
      const auto g = gaps(q, c.n_horizon, gap_options(c));
      const auto cr = criteria_report(q, criteria_options(c));
      emit(c, out, [&](std::ostream& o) { write_json(o, verdict_json(l, g, cr, c)); });
      return;
    }
    case Command::Report: {
      if (!c.output_path) throw ConfigError("report needs an output directory", "output", 0);
      std::filesystem::create_directories(*c.output_path);
      const auto g = gaps(q, c.n_horizon, gap_options(c));
      const auto cr = criteria_report(q, criteria_options(c));
      const auto set = trace_bands(q, band_indices(c), BandOptions{c.K, c.grid_size, c.tol});
      // Two-periodic roots up to the midpoint past the last horizon center.
      const double reach = (2.0 * c.n_horizon + 1.5) * kPi;
      RootOptions ro;
      ro.tol = c.tol;
      ro.cross_check_K = c.K;
      const auto roots = two_periodic_roots(q, reach * reach, ro);
      json bundle = {{"verdict", verdict_json(l, g, cr, c)},
                     {"gaps", to_json(g)},
                     {"criteria", to_json(cr)},
                     {"two_periodic", to_json(roots)}};
      const auto& dir = *c.output_path;
      write_file(dir / "report.json", [&](std::ostream& o) { write_json(o, bundle); });
      write_file(dir / "bands.csv", [&](std::ostream& o) { write_bands_csv(o, set); });
      write_file(dir / "intervals.csv", [&](std::ostream& o) { write_intervals_csv(o, g); });
      out << "wrote " << (dir / "report.json").string() << ", bands.csv, intervals.csv\n";
      return;
    }
  }
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    execute(config, out);
    return 0;
  } catch (const ConfigError& e) {
    write_json(err, {{"error", e.payload()}});
    return 2;
  } catch (const Error& e) {
    write_json(err, {{"error", e.payload()}});
    return 3;
  } catch (const std::exception& e) {
    write_json(err, {{"error", {{"kind", "Internal"}, {"message", e.what()}}}});
    return 3;
  }
}

}  // namespace hillzone
