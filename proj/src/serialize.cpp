#include "hillzone/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace hillzone {

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <typename T>
json optional_number(const std::optional<T>& v) {
  return v ? number(static_cast<double>(*v)) : json(nullptr);
}

json window(IndexWindow w) { return json::array({w.lo, w.hi}); }

std::string kind_name(IntervalKind k) {
  switch (k) {
    case IntervalKind::Empty: return "empty";
    case IntervalKind::Point: return "point";
    default: return "interval";
  }
}

}  // namespace

json to_json(cplx z) { return {{"re", number(z.real())}, {"im", number(z.imag())}}; }

json to_json(const PTReport& r) {
  return {{"is_pt", r.is_pt}, {"max_violation", number(r.max_violation)}, {"checked_up_to", r.checked_up_to}};
}

json to_json(const MonodromyResult& m) {
  return {{"lambda", to_json(m.lambda)},         {"theta1", to_json(m.theta1)},
          {"theta1p", to_json(m.theta1p)},       {"phi1", to_json(m.phi1)},
          {"phi1p", to_json(m.phi1p)},           {"discriminant", to_json(m.discriminant)},
          {"est_error", number(m.est_error)},    {"wronskian_error", number(m.wronskian_error())}};
}

json to_json(const RealInterval& iv) {
  json j = {{"kind", kind_name(iv.kind)}};
  if (iv.kind != IntervalKind::Empty) {
    j["A"] = number(iv.A);
    j["B"] = number(iv.B);
  }
  return j;
}

json to_json(const BandCurve& band, bool with_samples) {
  json j = {{"n", band.n},
            {"high_index", band.high_index},
            {"endpoint_0", to_json(band.endpoint_0)},
            {"endpoint_pi", to_json(band.endpoint_pi)},
            {"real_interval", to_json(band.real_interval)},
            {"a_n", optional_number(band.a_n)},
            {"b_n", optional_number(band.b_n)},
            {"epsilon_n", optional_number(band.epsilon_n)},
            {"delta_n", optional_number(band.delta_n)},
            {"coalescence_defect", number(band.coalescence_defect)},
            {"continuity_ratio", number(band.continuity_ratio)}};
  if (with_samples) {
    json samples = json::array();
    for (const auto& s : band.samples) samples.push_back({{"t", number(s.t)}, {"lambda", to_json(s.lambda)}});
    j["samples"] = std::move(samples);
  }
  return j;
}

json to_json(const TwoPeriodicEigenvalue& e) {
  return {{"n", e.n},
          {"boundary", to_string(e.boundary)},
          {"lambda", to_json(e.lambda)},
          {"multiplicity", e.multiplicity},
          {"classification", to_string(e.classification)}};
}

json to_json(const RootReport& r) {
  json list = json::array();
  for (const auto& e : r.eigenvalues) list.push_back(to_json(e));
  return {{"eigenvalues", std::move(list)},
          {"galerkin_discrepancy", number(r.galerkin_discrepancy)},
          {"galerkin_compared", r.galerkin_compared},
          {"contour_retries", r.contour_retries},
          {"evaluations", r.evaluations}};
}

json to_json(const GapReport& r) {
  json intervals = json::array();
  for (const auto& [k, iv] : r.intervals) {
    json item = to_json(iv);
    item["n"] = k;
    intervals.push_back(std::move(item));
  }
  json gaps = json::array();
  for (const auto& g : r.gaps)
    gaps.push_back({{"left", number(g.left)},
                    {"right", number(g.right)},
                    {"width", number(g.right - g.left)},
                    {"between", json::array({g.lower_band, g.upper_band})}});
  json clusters = json::array();
  for (const auto& c : r.clusters)
    clusters.push_back({{"n", c.n},
                        {"boundary", to_string(c.boundary)},
                        {"lower", to_json(c.lower)},
                        {"upper", to_json(c.upper)},
                        {"classification", to_string(c.classification)},
                        {"high_index", c.high_index}});
  return {{"horizon_N", r.horizon_N},
          {"n_est", r.n_est},
          {"K", r.K},
          {"intervals", std::move(intervals)},
          {"gaps", std::move(gaps)},
          {"clusters", std::move(clusters)},
          {"ordering_holds", r.ordering_holds},
          {"ordering_detail", r.ordering_detail},
          {"max_coalescence_defect", number(r.max_coalescence_defect)},
          {"finite_zone_spectral", {{"verdict", to_string(r.verdict)}, {"reason", r.reason}}}};
}

json to_json(const PnRecord& r) {
  return {{"n", r.n},
          {"P", to_json(r.P)},
          {"q_n", number(r.q_n)},
          {"q_minus_n", number(r.q_minus_n)},
          {"S_n", to_json(r.S_n)},
          {"S_minus_n", to_json(r.S_minus_n)},
          {"Q_0", to_json(r.Q_0)},
          {"Q_n", to_json(r.Q_n)},
          {"Q_minus_n", to_json(r.Q_minus_n)},
          {"leading_term", number(r.leading_term)}};
}

json to_json(const Summary4Report& r) {
  json list = json::array();
  for (const auto& p : r.predictions) {
    auto side = [](bool applicable, bool real) {
      return json{{"applicable", applicable}, {"predicted_real", applicable ? json(real) : json(nullptr)}};
    };
    list.push_back({{"n", p.n},
                    {"P_2n", number(p.P_even)},
                    {"P_2n_plus_1", number(p.P_odd)},
                    {"periodic", side(p.periodic_applicable, p.periodic_real)},
                    {"antiperiodic", side(p.antiperiodic_applicable, p.antiperiodic_real)}});
  }
  return {{"s", r.s}, {"alpha", number(r.alpha)}, {"predictions", std::move(list)}};
}

json to_json(const Theorem5Verdict& v) {
  return {{"holds", v.holds},
          {"fitted_alpha", number(v.fitted_alpha)},
          {"fitted_m", v.fitted_m},
          {"window", window(v.window)},
          {"note", v.note}};
}

json to_json(const Theorem6Verdict& v) {
  return {{"holds", v.holds},
          {"fitted_beta", number(v.fitted_beta)},
          {"fitted_delta", optional_number(v.fitted_delta)},
          {"delta_unbounded", !v.fitted_delta.has_value()},
          {"window", window(v.window)},
          {"note", v.note}};
}

json to_json(const Theorem7Verdict& v) {
  return {{"holds", v.holds},
          {"s", v.s},
          {"c", number(v.c)},
          {"d", optional_number(v.d)},
          {"decay_consistency", number(v.decay_consistency)},
          {"decay_warning", v.decay_warning}};
}

json to_json(const CriteriaReport& r) {
  json records = json::array();
  for (const auto& rec : r.records) records.push_back(to_json(rec));
  return {{"s", r.s},
          {"window", window(r.window)},
          {"records", std::move(records)},
          {"S_tail_bound", number(r.tail_bound)},
          {"max_abs_im_P", number(r.max_abs_im_P)},
          {"summary4", to_json(r.summary4)},
          {"thm5", to_json(r.thm5)},
          {"thm6", to_json(r.thm6)},
          {"thm7", r.thm7 ? to_json(*r.thm7) : json(nullptr)},
          {"thm7_note", r.thm7_note},
          {"combined", {{"verdict", to_string(r.combined)}, {"reason", r.combined_reason}}}};
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_discriminant_csv(std::ostream& out, const std::vector<MonodromyResult>& rows) {
  out << "lambda_re,lambda_im,F_re,F_im,wronskian_err\n";
  for (const auto& m : rows)
    out << format_number(m.lambda.real()) << ',' << format_number(m.lambda.imag()) << ','
        << format_number(m.discriminant.real()) << ',' << format_number(m.discriminant.imag()) << ','
        << format_number(m.wronskian_error()) << '\n';
}

void write_bands_csv(std::ostream& out, const BandSet& set) {
  out << "n,t,lambda_re,lambda_im\n";
  for (const auto& [n, band] : set.bands)
    for (const auto& s : band.samples)
      out << n << ',' << format_number(s.t) << ',' << format_number(s.lambda.real()) << ','
          << format_number(s.lambda.imag()) << '\n';
}

void write_intervals_csv(std::ostream& out, const GapReport& r) {
  out << "n,kind,A,B\n";
  for (const auto& [k, iv] : r.intervals) {
    out << k << ',' << kind_name(iv.kind) << ',';
    if (iv.kind == IntervalKind::Empty) out << ",\n";
    else out << format_number(iv.A) << ',' << format_number(iv.B) << '\n';
  }
}

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

}  // namespace hillzone
