#include "frameforge/reweight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/QR>

#include "frameforge/random.hpp"

namespace frameforge {

namespace {

constexpr double kCertificateTolerance = 1e-9;

Index trunc_of(const VectorSequence& seq) { return seq.origin() ? seq.origin()->trunc_index : 0; }

double relative_slack(const Claim& claim, const ObservedBounds& obs) {
  const double upper_slack = claim.upper > 0.0 ? (claim.upper - obs.upper) / claim.upper : 0.0;
  const double lower_slack = claim.lower > 0.0 ? (obs.lower - claim.lower) / claim.lower : 0.0;
  switch (claim.kind) {
    case ClaimKind::BesselBound:
      return upper_slack;
    case ClaimKind::LowerBound:
      return lower_slack;
    case ClaimKind::FrameBounds:
      return std::min(upper_slack, lower_slack);
  }
  return 0.0;
}

bool claim_holds(const Claim& claim, const ObservedBounds& obs, double rel_tol) {
  const bool upper_ok = obs.upper <= claim.upper * (1.0 + rel_tol);
  const bool lower_ok = obs.lower >= claim.lower * (1.0 - rel_tol);
  switch (claim.kind) {
    case ClaimKind::BesselBound:
      return upper_ok;
    case ClaimKind::LowerBound:
      return lower_ok;
    case ClaimKind::FrameBounds:
      return upper_ok && lower_ok;
  }
  return false;
}

// Builds and checks a certificate; a failed check means the construction is
// wrong, not the input.
WeightCertificate certify(const VectorSequence& seq, WeightSeq w, Claim claim,
                          std::optional<Subspace> domain = std::nullopt) {
  const ObservedBounds obs = observe_bounds(seq, w, domain);
  WeightCertificate cert{std::move(w), claim, trunc_of(seq), relative_slack(claim, obs), obs.lower,
                         obs.upper, std::move(domain)};
  if (!claim_holds(claim, obs, kCertificateTolerance)) {
    throw std::logic_error("certificate " + to_string(claim.kind) + " failed verification (observed A=" +
                           std::to_string(obs.lower) + ", B=" + std::to_string(obs.upper) + ")");
  }
  return cert;
}

// Smallest squared singular value of C_F without any rank cutoff; 0 when
// there are fewer members than dimensions.
double raw_sigma_min_sq(const Matrix& analysis) {
  if (analysis.rows() < analysis.cols()) return 0.0;
  const RealVector sv = linalg::singular_values(analysis);
  const double s = sv(sv.size() - 1);
  return s * s;
}

std::vector<double> inverse_norm_weights(const VectorSequence& seq, const TauWeights& tau, double scale) {
  const RealVector norms = seq.norms();
  std::vector<double> w(static_cast<std::size_t>(seq.size()));
  for (Index n = 0; n < seq.size(); ++n) {
    w[static_cast<std::size_t>(n)] = norms(n) > 0.0 ? tau[n] * scale / norms(n) : 1.0;
  }
  return w;
}

void require_tau(const VectorSequence& seq, const TauWeights& tau) {
  if (!tau.normalized()) throw std::invalid_argument("tau weights must be normalized");
  if (tau.size() != seq.size()) {
    throw PreconditionError("tau has length " + std::to_string(tau.size()) + " but the sequence has " +
                                std::to_string(seq.size()) + " members",
                            "one tau weight per sequence member");
  }
}

void require_same_shape(const VectorSequence& f, const VectorSequence& g) {
  if (f.size() != g.size() || f.ambient_dim() != g.ambient_dim()) {
    throw PreconditionError("paired sequences differ in length or ambient dimension",
                            "both sequences index the same set inside the same space");
  }
}

WeightSeq inverted(const WeightSeq& w) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(w.size()));
  for (double x : w.real_values()) out.push_back(1.0 / x);
  return WeightSeq::positive(std::move(out));
}

double duality_residual(const VectorSequence& f, const VectorSequence& g) {
  const Matrix t = g.columns() * f.columns().adjoint();
  return linalg::spectral_norm(t - Matrix::Identity(t.rows(), t.cols()));
}

}  // namespace

ObservedBounds observe_bounds(const VectorSequence& seq, const WeightSeq& w,
                              const std::optional<Subspace>& domain) {
  const VectorSequence weighted = apply_weights(seq, w);
  const BoundsReport b = domain ? frame_bounds(project_sequence(weighted, *domain)) : frame_bounds(weighted);
  return {b.lower_A, b.upper_B};
}

bool check_certificate(const VectorSequence& seq, const WeightCertificate& cert, double rel_tol) {
  return claim_holds(cert.claim, observe_bounds(seq, cert.weights, cert.domain), rel_tol);
}

WeightCertificate bessel_weights(const VectorSequence& seq, double bound, const TauWeights& tau) {
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw std::invalid_argument("Bessel bound must be positive and finite");
  }
  require_tau(seq, tau);
  return certify(seq, WeightSeq::positive(inverse_norm_weights(seq, tau, std::sqrt(bound))),
                 Claim::bessel(bound));
}

DualPairReweighting dual_pair_reweight(const VectorSequence& f, const VectorSequence& g,
                                       const TauWeights& tau, double tolerance) {
  require_same_shape(f, g);
  require_tau(f, tau);
  const double res = duality_residual(f, g);
  if (!(res <= tolerance)) {
    throw PreconditionError("sum_n <f, f_n> g_n differs from f by " + std::to_string(res),
                            "weakly dual pair: f = sum_n <f, f_n> g_n for every f");
  }
  WeightSeq lambda = WeightSeq::positive(inverse_norm_weights(g, tau, 1.0));
  WeightSeq beta = WeightSeq::positive(inverse_norm_weights(f, tau, 1.0));
  const WeightSeq lambda_inv = inverted(lambda);
  const WeightSeq beta_inv = inverted(beta);

  DualPairReweighting out{lambda,
                          beta,
                          certify(f, lambda_inv, Claim::lower_bound(1.0)),
                          certify(g, lambda, Claim::bessel(1.0)),
                          certify(g, beta_inv, Claim::lower_bound(1.0)),
                          certify(f, beta, Claim::bessel(1.0)),
                          0.0,
                          0.0};
  out.duality_residual_lambda = duality_residual(apply_weights(f, lambda_inv), apply_weights(g, lambda));
  out.duality_residual_beta = duality_residual(apply_weights(f, beta), apply_weights(g, beta_inv));
  return out;
}

ReproducingPairReweighting reproducing_pair_reweight(const VectorSequence& f, const VectorSequence& g,
                                                     double a, const TauWeights& tau,
                                                     double condition_cap) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("lower bound A must be positive");
  require_same_shape(f, g);
  require_tau(f, tau);

  const Matrix t = g.columns() * f.columns().adjoint();
  const RealVector sv = linalg::singular_values(t);
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || !(smax / smin <= condition_cap)) {
    throw PreconditionError(
        "T = D_G C_F is singular or its condition number exceeds " + std::to_string(condition_cap),
        "reproducing pair: D_G C_F is a bounded bijection of the space");
  }
  const double t_inv_norm = 1.0 / smin;
  const Matrix t_inv = t.fullPivLu().inverse();
  VectorSequence h = g.transformed(t_inv);

  WeightSeq lambda = bessel_weights(h, 1.0 / a, tau).weights;
  const double beta_bound = 1.0 / (a * t_inv_norm * t_inv_norm);
  WeightSeq beta = bessel_weights(f, beta_bound, tau).weights;

  ReproducingPairReweighting out{lambda,
                                 beta,
                                 t,
                                 smax / smin,
                                 t_inv_norm,
                                 h,
                                 certify(f, inverted(lambda), Claim::lower_bound(a)),
                                 certify(g, inverted(beta), Claim::lower_bound(a)),
                                 certify(g, lambda, Claim::bessel(smax * smax / a)),
                                 certify(f, beta, Claim::bessel(beta_bound))};
  return out;
}

SurjectiveDual surjective_multiplier_dual(const VectorSequence& f, const VectorSequence& g,
                                          double svd_cutoff) {
  require_same_shape(f, g);
  const Matrix m = f.columns() * g.columns().adjoint();
  if (linalg::rank(m, svd_cutoff) != m.rows()) {
    throw PreconditionError("M = D_F C_G does not have full row rank",
                            "the multiplier M f = sum_n <f, g_n> f_n is onto");
  }
  const Matrix m_pinv = linalg::pinv(m, svd_cutoff);
  VectorSequence dual = g.transformed(m_pinv.adjoint());
  // Column k of F D^* is sum_n <e_k, dual_n> f_n.
  const Matrix recon = f.columns() * dual.columns().adjoint();
  const Matrix diff = recon - Matrix::Identity(recon.rows(), recon.cols());
  const double residual = diff.colwise().norm().maxCoeff();
  return {std::move(dual), m, residual, residual <= 1e-9};
}

FiniteDomainBound finite_domain_lower_bound(const VectorSequence& seq, const Subspace& w, double svd_cutoff) {
  if (w.dim() == 0) throw std::invalid_argument("domain subspace must have dimension >= 1");
  const VectorSequence projected = project_sequence(seq, w);

  std::vector<Index> witness;
  for (Index n = 0; n < projected.size() && static_cast<Index>(witness.size()) < w.dim(); ++n) {
    witness.push_back(n);
    if (linalg::rank(projected.subsequence(witness).columns(), svd_cutoff) !=
        static_cast<Index>(witness.size())) {
      witness.pop_back();
    }
  }
  if (static_cast<Index>(witness.size()) < w.dim()) {
    throw PreconditionError("projections onto W span only a " + std::to_string(witness.size()) +
                                "-dimensional subspace of the " + std::to_string(w.dim()) +
                                "-dimensional W",
                            "analysis operator with finite-dimensional domain spanned by the projections");
  }

  FiniteDomainBound out{certify(seq, WeightSeq::ones(seq.size()),
                                Claim::lower_bound(frame_bounds(projected, svd_cutoff).lower_A), w),
                        witness, 0.0, 0.0};
  out.witness_lower = frame_bounds(projected.subsequence(witness), svd_cutoff).lower_A;
  out.direct_lower = raw_sigma_min_sq(seq.columns().adjoint() * w.basis());
  return out;
}

bool monotone_weight_check(const VectorSequence& seq, const WeightSeq& w_small, const WeightSeq& w_large,
                           int test_vectors, std::uint64_t seed) {
  if (w_small.positivity() != Positivity::StrictlyPositive ||
      w_large.positivity() != Positivity::StrictlyPositive) {
    throw PreconditionError("monotone check needs strictly positive weights", "weights in (0, +inf)");
  }
  if (w_small.size() != seq.size() || w_large.size() != seq.size()) {
    throw PreconditionError("weight length differs from the sequence length", "one weight per member");
  }
  for (Index n = 0; n < seq.size(); ++n) {
    if (w_large[n].real() < w_small[n].real()) {
      throw PreconditionError("w_large < w_small at index " + std::to_string(n),
                              "entrywise order w_small <= w_large");
    }
  }
  const Matrix small = apply_weights(seq, w_small).columns().adjoint();
  const Matrix large = apply_weights(seq, w_large).columns().adjoint();
  bool ok = raw_sigma_min_sq(large) >= raw_sigma_min_sq(small) - 1e-10;

  for (int t = 0; t < test_vectors && ok; ++t) {
    rng::Gaussian gen(rng::derive(seed, {static_cast<std::uint64_t>(t)}));
    Vector x(seq.ambient_dim());
    for (Index i = 0; i < x.size(); ++i) x(i) = gen.complex_next();
    const double s_small = (small * x).squaredNorm();
    const double s_large = (large * x).squaredNorm();
    ok = s_large >= s_small * (1.0 - 1e-12);
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Necessary conditions and obstructions

NecessaryConditionsReport necessary_conditions_check(std::span<const WeightedTruncation> sweep,
                                                     const LimitMeta& meta, const TrendThresholds& thresholds) {
  if (sweep.empty()) throw std::invalid_argument("necessary_conditions_check needs at least one truncation");
  NecessaryConditionsReport r;
  std::vector<double> xs;
  for (const WeightedTruncation& wt : sweep) {
    const RealVector norms = wt.seq.norms();
    if (wt.weights.size() != wt.seq.size()) {
      throw PreconditionError("weight length differs from the sequence length", "one weight per member");
    }
    double sup_wn = 0.0, sup_w = 0.0, inf_norm = std::numeric_limits<double>::infinity();
    double inf_w = std::numeric_limits<double>::infinity();
    for (Index n = 0; n < wt.seq.size(); ++n) {
      const double w = std::abs(wt.weights[n]);
      sup_wn = std::max(sup_wn, w * norms(n));
      sup_w = std::max(sup_w, w);
      inf_norm = std::min(inf_norm, norms(n));
      if (norms(n) > 0.0) inf_w = std::min(inf_w, w);
    }
    if (!std::isfinite(inf_w)) inf_w = 0.0;
    r.ns.push_back(wt.trunc_index);
    xs.push_back(static_cast<double>(wt.trunc_index));
    r.sup_weighted_norm.push_back(sup_wn);
    r.sup_weight.push_back(sup_w);
    r.inf_weight.push_back(inf_w);
    r.inf_norm.push_back(inf_norm);
    r.upper_B.push_back(frame_bounds(apply_weights(wt.seq, wt.weights)).upper_B);
  }
  r.bessel_observed = classify_series(xs, r.upper_B, thresholds).kind != TrendKind::Diverging;

  const Trend t1 = classify_series(xs, r.sup_weighted_norm, thresholds);
  if (t1.kind == TrendKind::Diverging) {
    r.findings.push_back({1, "sup_n w_n ||f_n|| grows across truncations; a Bessel sequence has norms at most sqrt(B)", t1});
  }
  const Trend norm_trend = classify_series(xs, r.inf_norm, thresholds);
  const bool norms_below_bounded =
      norm_trend.kind != TrendKind::VanishingToZero &&
      std::all_of(r.inf_norm.begin(), r.inf_norm.end(), [](double v) { return v > 0.0; });
  if (norms_below_bounded) {
    const Trend t2 = classify_series(xs, r.sup_weight, thresholds);
    if (t2.kind == TrendKind::Diverging) {
      r.findings.push_back({2, "inf_n ||f_n|| > 0 but sup_n w_n grows across truncations", t2});
    }
  }
  if (meta.bessel_in_limit == false) {
    const Trend t3 = classify_series(xs, r.inf_weight, thresholds);
    if (t3.kind != TrendKind::VanishingToZero) {
      r.findings.push_back(
          {3, "the sequence is declared non-Bessel, so Bessel weights need inf_n w_n = 0, yet inf_n w_n stays away from 0",
           t3});
    }
  }
  return r;
}

BiorthogonalDefect biorthogonal_defect(const VectorSequence& seq, double svd_cutoff) {
  VectorSequence g = biorthogonal(seq, svd_cutoff);
  Matrix basis = linalg::complement_basis(g.columns(), svd_cutoff);
  const Index defect = basis.cols();
  return {defect, std::move(basis), std::move(g)};
}

BiorthogonalScan biorthogonal_obstruction(std::span<const VectorSequence> truncations, const LimitMeta& meta,
                                          double threshold, double svd_cutoff) {
  BiorthogonalScan scan;
  scan.threshold = threshold;
  if (truncations.empty()) throw std::invalid_argument("biorthogonal_obstruction needs truncations");

  std::vector<VectorSequence> biorth;
  for (std::size_t i = 0; i < truncations.size(); ++i) {
    const VectorSequence& seq = truncations[i];
    BiorthogonalDefect d = biorthogonal_defect(seq, svd_cutoff);
    const Index n = trunc_of(seq);
    scan.ns.push_back(n > 0 ? n : static_cast<Index>(i + 1));
    scan.defects.push_back(d.defect);
    if (i == 0 && d.defect > 0) {
      const RealVector weight = d.defect_basis.rowwise().norm();
      Index best = 0;
      for (Index k = 1; k < weight.size(); ++k) {
        if (weight(k) > weight(best) * (1.0 + 1e-12)) best = k;
      }
      scan.direction = best;
    }
    biorth.push_back(std::move(d.biorthogonal));
  }

  if (!scan.direction) {
    scan.note = "no defect at the first truncation";
    return scan;
  }
  const Index k = *scan.direction;
  for (const VectorSequence& g : biorth) {
    double captured = 0.0;
    if (k < g.ambient_dim()) {
      const RealVector norms = g.norms();
      for (Index m = 0; m < g.size(); ++m) {
        if (norms(m) > 0.0) captured += std::norm(g[m](k)) / (norms(m) * norms(m));
      }
    }
    scan.residuals.push_back(std::max(0.0, 1.0 - captured));
  }

  const bool persistent = std::all_of(scan.defects.begin(), scan.defects.end(), [](Index d) { return d > 0; });
  const bool uncaptured =
      std::all_of(scan.residuals.begin(), scan.residuals.end(), [&](double r) { return r > threshold; });
  if (meta.complete_in_limit != true) {
    scan.note = "completeness in the limit is not declared";
  } else if (!persistent) {
    scan.note = "defect vanishes at some truncation";
  } else if (!uncaptured) {
    scan.note = "residual drops to the threshold at some truncation";
  } else {
    scan.fired = true;
    scan.note = "e_" + std::to_string(k + 1) + " stays outside the span of the biorthogonal system";
  }
  return scan;
}

// ---------------------------------------------------------------------------
// Sufficient conditions and characterizations

WeightCertificate subsequence_lift(const VectorSequence& seq, std::span<const Index> subset,
                                   const WeightSeq& subset_weights, double svd_cutoff) {
  if (subset.empty()) throw PreconditionError("empty subsequence", "the subsequence is a weighted frame");
  if (subset_weights.size() != static_cast<Index>(subset.size())) {
    throw PreconditionError("subset weights differ in length from the subset", "one weight per subset member");
  }
  std::vector<bool> in_subset(static_cast<std::size_t>(seq.size()), false);
  for (Index i : subset) {
    if (i < 0 || i >= seq.size() || in_subset[static_cast<std::size_t>(i)]) {
      throw std::invalid_argument("subset indices must be distinct and in range");
    }
    in_subset[static_cast<std::size_t>(i)] = true;
  }
  const BoundsReport sub = frame_bounds(apply_weights(seq.subsequence(subset), subset_weights), svd_cutoff);
  if (!sub.complete || !(sub.lower_A > sub.tolerance)) {
    throw PreconditionError("the weighted subsequence is not a frame at this truncation",
                            "the sequence contains a subsequence that is a weighted frame");
  }

  std::vector<Index> complement;
  for (Index n = 0; n < seq.size(); ++n) {
    if (!in_subset[static_cast<std::size_t>(n)]) complement.push_back(n);
  }
  std::vector<Scalar> w(static_cast<std::size_t>(seq.size()));
  for (std::size_t i = 0; i < subset.size(); ++i) {
    w[static_cast<std::size_t>(subset[i])] = subset_weights[static_cast<Index>(i)];
  }
  if (!complement.empty()) {
    const VectorSequence rest = seq.subsequence(complement);
    const WeightCertificate lift = bessel_weights(rest, 1.0, default_tau(rest.size()));
    for (std::size_t i = 0; i < complement.size(); ++i) {
      w[static_cast<std::size_t>(complement[i])] = lift.weights[static_cast<Index>(i)];
    }
  }
  WeightSeq full = subset_weights.positivity() == Positivity::ComplexNonzero
                       ? WeightSeq::complex_nonzero(std::move(w))
                       : [&] {
                           std::vector<double> re;
                           for (const Scalar& x : w) re.push_back(x.real());
                           return subset_weights.positivity() == Positivity::StrictlyPositive
                                      ? WeightSeq::positive(std::move(re))
                                      : WeightSeq::nonnegative(std::move(re));
                         }();
  const double upper = sub.upper_B + (complement.empty() ? 0.0 : 1.0);
  return certify(seq, std::move(full), Claim::frame(sub.lower_A, upper));
}

std::optional<std::vector<Index>> excess_characterization(const VectorSequence& seq, const WeightSeq& w,
                                                          double svd_cutoff) {
  const VectorSequence weighted = apply_weights(seq, w);
  const BoundsReport b = frame_bounds(weighted, svd_cutoff);
  if (!b.complete || !(b.lower_A > b.tolerance)) {
    throw PreconditionError("the weighted sequence is not a frame at this truncation",
                            "the weighted sequence is a frame with finite excess");
  }
  if (b.excess == 0) {
    throw PreconditionError("the weighted sequence has excess 0", "finite positive excess");
  }

  std::vector<Index> current(static_cast<std::size_t>(seq.size()));
  for (Index n = 0; n < seq.size(); ++n) current[static_cast<std::size_t>(n)] = n;
  const Index target = seq.ambient_dim();
  while (static_cast<Index>(current.size()) > target) {
    std::optional<std::size_t> drop;
    double best = -1.0;
    for (std::size_t i = 0; i < current.size(); ++i) {
      std::vector<Index> rest = current;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      const BoundsReport r = frame_bounds(weighted.subsequence(rest), svd_cutoff);
      if (!r.complete) continue;
      if (!drop || r.lower_A > best * (1.0 + 1e-12)) {
        drop = i;
        best = r.lower_A;
      }
    }
    if (!drop) return std::nullopt;
    current.erase(current.begin() + static_cast<std::ptrdiff_t>(*drop));
  }
  if (!riesz_test(weighted.subsequence(current), svd_cutoff).riesz) return std::nullopt;
  return current;
}

RangeCharacterization range_characterization_check(const VectorSequence& seq, const WeightSeq& w,
                                                   double svd_cutoff) {
  const VectorSequence weighted = apply_weights(seq, w);
  const Index d = seq.ambient_dim();
  RangeCharacterization r;

  const BoundsReport b = frame_bounds(weighted, svd_cutoff);
  r.weighted_frame = b.complete && b.lower_A > b.tolerance;

  const Matrix analysis = weighted.columns().adjoint();
  Eigen::FullPivLU<Matrix> lu(analysis);
  lu.setThreshold(svd_cutoff);
  r.analysis_bounded_below = lu.rank() == d;

  Eigen::ColPivHouseholderQR<Matrix> qr(weighted.columns());
  qr.setThreshold(svd_cutoff);
  r.synthesis_onto = qr.rank() == d;

  r.consistent = r.weighted_frame == r.analysis_bounded_below && r.analysis_bounded_below == r.synthesis_onto;
  return r;
}

std::string to_string(ClaimKind kind) {
  switch (kind) {
    case ClaimKind::BesselBound:
      return "BesselBound";
    case ClaimKind::LowerBound:
      return "LowerBound";
    case ClaimKind::FrameBounds:
      return "FrameBounds";
  }
  return "?";
}

}  // namespace frameforge
