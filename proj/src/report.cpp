#include "frameforge/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace frameforge {

Json to_json(const BoundsReport& b) {
  return {{"N", b.trunc_index},     {"lower_A", b.lower_A}, {"upper_B", b.upper_B},
          {"ratio", b.ratio()},     {"complete", b.complete}, {"minimal", b.minimal},
          {"excess", b.excess},     {"rank", b.rank},       {"count", b.count},
          {"ambient_dim", b.ambient_dim}, {"tolerance", b.tolerance}};
}

Json to_json(const Trend& t) {
  Json j{{"kind", to_string(t.kind)}};
  j["slope"] = t.slope ? Json(*t.slope) : Json(nullptr);
  return j;
}

Json to_json(const WeightSeq& w) {
  Json values = Json::array();
  const bool real = w.positivity() != Positivity::ComplexNonzero;
  for (const Scalar& x : w.values()) values.push_back(real ? Json(x.real()) : to_json(x));
  std::string kind = "positive";
  if (w.positivity() == Positivity::ComplexNonzero) kind = "complex_nonzero";
  if (w.positivity() == Positivity::NonnegativeAllowed) kind = "nonnegative";
  return {{"positivity", kind}, {"values", values}};
}

Json to_json(const Claim& c) {
  Json j{{"kind", to_string(c.kind)}};
  if (c.kind != ClaimKind::BesselBound) j["A"] = c.lower;
  if (c.kind != ClaimKind::LowerBound) j["B"] = c.upper;
  return j;
}

Json to_json(const WeightCertificate& c) {
  Json j{{"weights", to_json(c.weights)},   {"claim", to_json(c.claim)},
         {"verified_at", c.verified_at},    {"residual", c.residual},
         {"observed_lower", c.observed_lower}, {"observed_upper", c.observed_upper}};
  if (c.domain) j["domain_dim"] = c.domain->dim();
  return j;
}

Json to_json(const CandidateAttempt& a) {
  return {{"method", a.method},
          {"success", a.success},
          {"lower", a.lower},
          {"upper", a.upper},
          {"ratio", a.ratio},
          {"lower_trend", to_json(a.lower_trend)},
          {"upper_trend", to_json(a.upper_trend)},
          {"ratio_trend", to_json(a.ratio_trend)},
          {"note", a.note}};
}

Json to_json(const BiorthogonalScan& s) {
  Json j{{"Ns", s.ns},         {"defects", s.defects}, {"residuals", s.residuals},
         {"threshold", s.threshold}, {"fired", s.fired},   {"note", s.note}};
  j["direction"] = s.direction ? Json(*s.direction + 1) : Json(nullptr);
  return j;
}

Json to_json(const NecessaryConditionsReport& r) {
  Json findings = Json::array();
  for (const NecessaryFinding& f : r.findings) {
    findings.push_back({{"which", f.which}, {"detail", f.detail}, {"trend", to_json(f.trend)}});
  }
  return {{"Ns", r.ns},
          {"sup_weighted_norm", r.sup_weighted_norm},
          {"sup_weight", r.sup_weight},
          {"inf_weight", r.inf_weight},
          {"inf_norm", r.inf_norm},
          {"upper_B", r.upper_B},
          {"bessel_observed", r.bessel_observed},
          {"findings", findings}};
}

Json to_json(const WeightedFrameVerdict& v) {
  Json reasons = Json::array();
  for (const ObstructionReason& r : v.reasons) {
    Json rj{{"kind", to_string(r.kind)}, {"detail", r.detail}};
    if (r.kind == ReasonKind::NecessaryConditionViolated) rj["which"] = r.which;
    reasons.push_back(std::move(rj));
  }
  Json attempts = Json::array();
  for (const CandidateAttempt& a : v.attempts) attempts.push_back(to_json(a));
  Json unweighted = Json::array();
  for (const BoundsReport& b : v.unweighted) unweighted.push_back(to_json(b));
  Json j{{"status", to_string(v.status)},
         {"method", v.method},
         {"reasons", reasons},
         {"Ns", v.ns},
         {"unweighted", unweighted},
         {"attempts", attempts},
         {"best_ratio", v.best_ratio},
         {"best_ratio_trend", to_json(v.best_ratio_trend)},
         {"biorthogonal_inf_norm", v.biorthogonal_inf_norm}};
  j["certificate"] = v.certificate ? to_json(*v.certificate) : Json(nullptr);
  j["biorthogonal_scan"] = v.biorthogonal_scan ? to_json(*v.biorthogonal_scan) : Json(nullptr);
  return j;
}

Json to_json(const InvertibilityVerdict& v) {
  Json j{{"invertible", v.invertible}, {"sigma_min", v.sigma_min}, {"sigma_max", v.sigma_max}};
  j["condition"] = std::isfinite(v.condition) ? Json(v.condition) : Json(nullptr);
  return j;
}

Json to_json(const GrowthTest& g) {
  return {{"power_slope", g.power_slope}, {"log_exponent", g.log_exponent}, {"diverging", g.diverging}};
}

Json to_json(const UnconditionalityReport& r) {
  Json vectors = Json::array();
  for (const TestVectorSeries& s : r.vectors) {
    vectors.push_back({{"s1", s.s1},
                       {"r", s.r},
                       {"l", s.l},
                       {"s1_growth", to_json(s.s1_growth)},
                       {"r_growth", to_json(s.r_growth)}});
  }
  return {{"Ns", r.ns}, {"verdict", to_string(r.verdict)}, {"trials", r.trials}, {"seed", r.seed},
          {"test_vectors", vectors}};
}

Json to_json(const ShiftedWeights& w) {
  Json a = Json::array(), b = Json::array();
  for (const Scalar& x : w.alpha) a.push_back(to_json(x));
  for (const Scalar& x : w.beta) b.push_back(to_json(x));
  return {{"alpha", a}, {"beta", b}};
}

Json to_json(const WeightShiftReport& r) {
  return {{"weights", to_json(r.weights)},
          {"product_residual", r.product_residual},
          {"Ns", r.ns},
          {"alpha_phi_bound", r.alpha_phi_bound},
          {"beta_psi_bound", r.beta_psi_bound},
          {"alpha_phi_trend", to_json(r.alpha_phi_trend)},
          {"beta_psi_trend", to_json(r.beta_psi_trend)},
          {"witnesses_split", r.witnesses_split}};
}

Json to_json(const DualityReport& r) {
  return {{"stmt1", r.stmt1},         {"stmt2", r.stmt2},         {"stmt3", r.stmt3},
          {"consistent", r.consistent}, {"residual1", r.residual1}, {"residual2", r.residual2},
          {"residual3", r.residual3}, {"inf_norm_product", r.inf_norm_product}};
}

Json to_json(const InterleaveConstruction& c, Index echo_limit) {
  const Index shown = std::min<Index>(echo_limit, c.xi.size());
  Json symbol = Json::array();
  for (Index i = 0; i < shown; ++i) symbol.push_back(to_json(c.symbol[static_cast<std::size_t>(i)]));
  return {{"N", c.trunc_index},
          {"residual", c.residual},
          {"members", c.xi.size()},
          {"echoed", shown},
          {"symbol", symbol},
          {"xi", vectors_to_json(c.xi.columns().leftCols(shown))},
          {"theta", vectors_to_json(c.theta.columns().leftCols(shown))}};
}

std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string CsvTable::str() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

CsvTable sweep_csv(std::span<const BoundsReport> reports) {
  CsvTable t{{"N", "A", "B", "ratio", "complete", "excess"}, {}};
  for (const BoundsReport& b : reports) {
    t.rows.push_back({std::to_string(b.trunc_index), format_number(b.lower_A), format_number(b.upper_B),
                      format_number(b.ratio()), b.complete ? "1" : "0", std::to_string(b.excess)});
  }
  return t;
}

CsvTable weights_csv(const WeightSeq& w) {
  CsvTable t{{"index", "weight_re", "weight_im"}, {}};
  for (Index n = 0; n < w.size(); ++n) {
    t.rows.push_back({std::to_string(n + 1), format_number(w[n].real()), format_number(w[n].imag())});
  }
  return t;
}

std::string svg_plot(const std::string& title, std::span<const double> ns,
                     const std::map<std::string, std::vector<double>>& series) {
  constexpr double kW = 640, kH = 400, kPad = 50;
  static const std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (double n : ns) {
    if (n > 0) {
      xmin = std::min(xmin, std::log10(n));
      xmax = std::max(xmax, std::log10(n));
    }
  }
  for (const auto& [name, ys] : series) {
    for (double y : ys) {
      if (y > 0 && std::isfinite(y)) {
        ymin = std::min(ymin, std::log10(y));
        ymax = std::max(ymax, std::log10(y));
      }
    }
  }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) {
    if (ymin > 1e299) ymin = 0;
    ymax = ymin + 1;
  }
  auto px = [&](double lx) { return kPad + (lx - xmin) / (xmax - xmin) * (kW - 2 * kPad); };
  auto py = [&](double ly) { return kH - kPad - (ly - ymin) / (ymax - ymin) * (kH - 2 * kPad); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  out << "<text x=\"" << kPad << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title
      << " (log10 vs log10 N)</text>\n";
  out << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kW - 2 * kPad << "\" height=\""
      << kH - 2 * kPad << "\" fill=\"none\" stroke=\"#888\"/>\n";
  out << "<text x=\"" << kPad << "\" y=\"" << kH - 20 << "\" font-size=\"11\">N from " << format_number(std::pow(10, xmin))
      << " to " << format_number(std::pow(10, xmax)) << "; y from 1e" << format_number(ymin) << " to 1e"
      << format_number(ymax) << "</text>\n";
  std::size_t c = 0;
  for (const auto& [name, ys] : series) {
    const char* color = kColors[c % kColors.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < std::min(ns.size(), ys.size()); ++i) {
      if (!(ys[i] > 0) || !std::isfinite(ys[i]) || !(ns[i] > 0)) continue;
      out << (first ? "" : " ") << format_number(std::round(px(std::log10(ns[i])) * 100) / 100) << ","
          << format_number(std::round(py(std::log10(ys[i])) * 100) / 100);
      first = false;
    }
    out << "\"/>\n";
    out << "<text x=\"" << kW - kPad + 4 << "\" y=\"" << kPad + 14 * (c + 1) << "\" font-size=\"11\" fill=\"" << color
        << "\">" << name << "</text>\n";
    ++c;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace frameforge
