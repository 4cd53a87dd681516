#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "frameforge/reweight.hpp"

namespace frameforge {

namespace {

struct Spectrum {
  double lo = 0.0;
  double hi = 0.0;
  Vector u_lo;
  Vector u_hi;
};

Spectrum extreme_eigen(const Matrix& cols, const RealVector& w) {
  const Matrix weighted = cols * w.asDiagonal();
  Matrix s = weighted * weighted.adjoint();
  s = (0.5 * (s + s.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  const Index d = s.rows();
  return {es.eigenvalues()(0), es.eigenvalues()(d - 1), es.eigenvectors().col(0), es.eigenvectors().col(d - 1)};
}

double objective(const Spectrum& sp) {
  if (!(sp.lo > 0.0) || !(sp.hi > 0.0)) return -std::numeric_limits<double>::infinity();
  return std::log(sp.lo) - std::log(sp.hi);
}

constexpr double kLogWeightClamp = 50.0;

}  // namespace

AscentResult maximize_bound_ratio(const VectorSequence& seq, const WeightSeq& start, int max_iters) {
  if (start.size() != seq.size()) {
    throw PreconditionError("start weights differ in length from the sequence", "one weight per member");
  }
  const Matrix& cols = seq.columns();
  const RealVector norms = seq.norms();
  const Index m = seq.size();

  RealVector x(m);
  for (Index n = 0; n < m; ++n) {
    const double w = std::abs(start[n]);
    x(n) = norms(n) > 0.0 && w > 0.0 ? std::clamp(std::log(w), -kLogWeightClamp, kLogWeightClamp) : 0.0;
  }

  auto weights_of = [&](const RealVector& lx) { return RealVector(lx.array().exp()); };
  Spectrum sp = extreme_eigen(cols, weights_of(x));
  double value = objective(sp);

  int it = 0;
  double step = 1.0;
  if (std::isfinite(value)) {
    for (; it < max_iters; ++it) {
      const RealVector w = weights_of(x);
      RealVector grad = RealVector::Zero(m);
      for (Index n = 0; n < m; ++n) {
        if (!(norms(n) > 0.0)) continue;
        const double plo = std::norm(sp.u_lo.dot(cols.col(n)));
        const double phi = std::norm(sp.u_hi.dot(cols.col(n)));
        grad(n) = 2.0 * w(n) * w(n) * (plo / sp.lo - phi / sp.hi);
      }
      const double gmax = grad.cwiseAbs().maxCoeff();
      if (!(gmax > 1e-12)) break;
      const RealVector dir = grad / gmax;

      bool accepted = false;
      for (int halvings = 0; halvings < 40; ++halvings) {
        const RealVector trial = (x + step * dir).cwiseMax(-kLogWeightClamp).cwiseMin(kLogWeightClamp);
        const Spectrum tsp = extreme_eigen(cols, weights_of(trial));
        const double tv = objective(tsp);
        if (tv > value + 1e-14 * std::abs(value)) {
          x = trial;
          sp = tsp;
          value = tv;
          accepted = true;
          step = std::min(step * 1.5, 4.0);
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }
  }

  const RealVector w = weights_of(x);
  std::vector<double> wv(w.data(), w.data() + w.size());
  return {WeightSeq::positive(std::move(wv)), std::isfinite(value) ? std::exp(value) : 0.0, it};
}

bool WeightedFrameVerdict::has_reason(ReasonKind kind) const {
  return std::any_of(reasons.begin(), reasons.end(), [&](const ObstructionReason& r) { return r.kind == kind; });
}

namespace {

using WeightRule = std::function<std::optional<WeightSeq>(const VectorSequence&, const BoundsReport&, std::string&)>;

struct Evaluated {
  CandidateAttempt attempt;
  std::optional<WeightSeq> last_weights;
};

Evaluated evaluate(const std::string& method, const std::vector<VectorSequence>& truncs,
                   const std::vector<BoundsReport>& plain, const std::vector<double>& xs, const WeightRule& rule,
                   const RunConfig& config, const TrendThresholds& thr) {
  Evaluated ev;
  ev.attempt.method = method;
  bool all_complete = true;
  for (std::size_t i = 0; i < truncs.size(); ++i) {
    std::string note;
    std::optional<WeightSeq> w = rule(truncs[i], plain[i], note);
    if (!w) {
      ev.attempt.note = note.empty() ? "no weights at N=" + std::to_string(plain[i].trunc_index) : note;
      ev.attempt.lower.push_back(0.0);
      ev.attempt.upper.push_back(plain[i].upper_B);
      ev.attempt.ratio.push_back(0.0);
      all_complete = false;
      continue;
    }
    const BoundsReport b = frame_bounds(apply_weights(truncs[i], *w), config.svd_cutoff);
    all_complete = all_complete && b.complete && b.lower_A > b.tolerance;
    ev.attempt.lower.push_back(b.lower_A);
    ev.attempt.upper.push_back(b.upper_B);
    ev.attempt.ratio.push_back(b.ratio());
    if (i + 1 == truncs.size()) ev.last_weights = std::move(w);
  }
  ev.attempt.lower_trend = classify_series(xs, ev.attempt.lower, thr);
  ev.attempt.upper_trend = classify_series(xs, ev.attempt.upper, thr);
  ev.attempt.ratio_trend = classify_series(xs, ev.attempt.ratio, thr);
  ev.attempt.success = all_complete && ev.last_weights && ev.attempt.lower_trend.kind != TrendKind::VanishingToZero &&
                       ev.attempt.upper_trend.kind != TrendKind::Diverging &&
                       ev.attempt.ratio_trend.kind != TrendKind::VanishingToZero;
  if (!all_complete && ev.attempt.note.empty()) ev.attempt.note = "weighted truncation is not a frame";
  return ev;
}

std::vector<double> normalizing(const VectorSequence& seq) {
  const RealVector norms = seq.norms();
  std::vector<double> w(static_cast<std::size_t>(seq.size()));
  for (Index n = 0; n < seq.size(); ++n) w[static_cast<std::size_t>(n)] = norms(n) > 0.0 ? 1.0 / norms(n) : 1.0;
  return w;
}

std::vector<Index> greedy_independent(const VectorSequence& seq, double cutoff) {
  std::vector<Index> picked;
  for (Index n = 0; n < seq.size() && static_cast<Index>(picked.size()) < seq.ambient_dim(); ++n) {
    if (!(seq[n].norm() > 0.0)) continue;
    picked.push_back(n);
    if (linalg::rank(seq.subsequence(picked).columns(), cutoff) != static_cast<Index>(picked.size())) {
      picked.pop_back();
    }
  }
  return picked;
}

}  // namespace

WeightedFrameVerdict weighted_frame_verdict(const SequenceSpec& spec, std::span<const Index> ns,
                                            const RunConfig& config) {
  if (ns.size() < 3) throw std::invalid_argument("the verdict needs at least 3 truncation indices");
  const TrendThresholds thr{config.trend_slope_threshold, -config.trend_slope_threshold};

  WeightedFrameVerdict v;
  v.ns.assign(ns.begin(), ns.end());
  v.unweighted = truncation_sweep(spec, ns, config.svd_cutoff);
  std::vector<VectorSequence> truncs;
  std::vector<double> xs;
  for (Index n : ns) {
    truncs.push_back(build_sequence(spec, n));
    xs.push_back(static_cast<double>(n));
  }
  const LimitMeta meta = spec.limit_meta();

  auto certificate_from = [&](const WeightSeq& w) {
    const VectorSequence& last = truncs.back();
    const ObservedBounds obs = observe_bounds(last, w);
    return WeightCertificate{w, Claim::frame(obs.lower, obs.upper), ns.back(), 0.0, obs.lower, obs.upper,
                             std::nullopt};
  };

  // (a) unit weights
  Evaluated unit = evaluate(
      "unit", truncs, v.unweighted, xs,
      [](const VectorSequence& s, const BoundsReport&, std::string&) { return WeightSeq::ones(s.size()); }, config,
      thr);
  v.attempts.push_back(unit.attempt);
  if (unit.attempt.success) {
    v.status = VerdictStatus::IsFrameAlready;
    v.method = "unit";
    v.certificate = certificate_from(*unit.last_weights);
    v.best_ratio = unit.attempt.ratio;
    v.best_ratio_trend = unit.attempt.ratio_trend;
    return v;
  }

  // (b) weight synthesis
  std::optional<WeightCertificate> lift_cert;
  const std::vector<std::pair<std::string, WeightRule>> rules = {
      {"normalization",
       [](const VectorSequence& s, const BoundsReport&, std::string&) {
         return std::optional<WeightSeq>(WeightSeq::positive(normalizing(s)));
       }},
      {"subsequence_lift",
       [&](const VectorSequence& s, const BoundsReport&, std::string& note) -> std::optional<WeightSeq> {
         const std::vector<Index> sub = greedy_independent(s, config.svd_cutoff);
         if (static_cast<Index>(sub.size()) < s.ambient_dim()) {
           note = "no spanning independent subsequence";
           return std::nullopt;
         }
         if (s.size() - static_cast<Index>(sub.size()) > kMaxGeometricTauLength) {
           note = "complement too long for geometric tau";
           return std::nullopt;
         }
         const VectorSequence picked = s.subsequence(sub);
         WeightCertificate c = subsequence_lift(s, sub, WeightSeq::positive(normalizing(picked)), config.svd_cutoff);
         WeightSeq w = c.weights;
         lift_cert = std::move(c);
         return w;
       }},
      {"ascent",
       [&](const VectorSequence& s, const BoundsReport& b, std::string& note) -> std::optional<WeightSeq> {
         if (!b.complete) {
           note = "truncation is incomplete, no weights can help";
           return std::nullopt;
         }
         AscentResult best = maximize_bound_ratio(s, WeightSeq::ones(s.size()), config.ascent_iters);
         if (s.size() <= kMaxGeometricTauLength) {
           const WeightSeq start = bessel_weights(s, 1.0, default_tau(s.size())).weights;
           AscentResult other = maximize_bound_ratio(s, start, config.ascent_iters);
           if (other.ratio > best.ratio) best = std::move(other);
         }
         return best.weights;
       }},
  };

  std::vector<std::vector<double>> ratio_rows{unit.attempt.ratio};
  for (const auto& [name, rule] : rules) {
    lift_cert.reset();
    Evaluated ev = evaluate(name, truncs, v.unweighted, xs, rule, config, thr);
    v.attempts.push_back(ev.attempt);
    ratio_rows.push_back(ev.attempt.ratio);
    if (ev.attempt.success) {
      v.status = VerdictStatus::WeightedFrame;
      v.method = name;
      v.certificate = name == "subsequence_lift" && lift_cert ? *lift_cert : certificate_from(*ev.last_weights);
      v.best_ratio = ev.attempt.ratio;
      v.best_ratio_trend = ev.attempt.ratio_trend;
      return v;
    }
  }

  // (c) obstruction scan
  v.best_ratio.assign(ns.size(), 0.0);
  for (const auto& row : ratio_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) v.best_ratio[i] = std::max(v.best_ratio[i], row[i]);
  }
  v.best_ratio_trend = classify_series(xs, v.best_ratio, thr);

  if (meta.complete_in_limit == false) {
    v.reasons.push_back({ReasonKind::NotCompleteInLimit, 0, "the sequence is declared incomplete in the limit"});
  }
  const bool all_minimal =
      std::all_of(v.unweighted.begin(), v.unweighted.end(), [](const BoundsReport& b) { return b.minimal; });
  if (all_minimal) {
    if (meta.complete_in_limit == true) {
      v.biorthogonal_scan =
          biorthogonal_obstruction(truncs, meta, config.defect_residual_threshold, config.svd_cutoff);
      if (v.biorthogonal_scan->fired) {
        v.reasons.push_back({ReasonKind::BiorthogonalIncomplete, 0, v.biorthogonal_scan->note});
      }
    }
    if (meta.bessel_in_limit == false) {
      for (const VectorSequence& s : truncs) {
        const RealVector g = biorthogonal(s, config.svd_cutoff).norms();
        v.biorthogonal_inf_norm.push_back(g.size() ? g.minCoeff() : 0.0);
      }
      const Trend t = classify_series(xs, v.biorthogonal_inf_norm, thr);
      if (t.kind != TrendKind::VanishingToZero) {
        v.reasons.push_back({ReasonKind::NecessaryConditionViolated, 3,
                             "declared non-Bessel, so frame weights need inf_n w_n = 0, while the biorthogonal "
                             "norms stay bounded below and force w_n >= sqrt(A) ||g_n||"});
      }
    }
  }
  const bool structural = !v.reasons.empty();
  if (v.best_ratio_trend.kind == TrendKind::VanishingToZero) {
    v.reasons.push_back({ReasonKind::RatioVanishes, 0, "best lower/upper bound ratio vanishes across truncations"});
  }
  v.status = structural ? VerdictStatus::ObstructionFound : VerdictStatus::Inconclusive;
  return v;
}

std::string to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::IsFrameAlready:
      return "IsFrameAlready";
    case VerdictStatus::WeightedFrame:
      return "WeightedFrame";
    case VerdictStatus::ObstructionFound:
      return "ObstructionFound";
    case VerdictStatus::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

std::string to_string(ReasonKind kind) {
  switch (kind) {
    case ReasonKind::NotCompleteInLimit:
      return "NotCompleteInLimit";
    case ReasonKind::BiorthogonalIncomplete:
      return "BiorthogonalIncomplete";
    case ReasonKind::NecessaryConditionViolated:
      return "NecessaryConditionViolated";
    case ReasonKind::RatioVanishes:
      return "RatioVanishes";
  }
  return "?";
}

}  // namespace frameforge
