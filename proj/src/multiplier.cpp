#include "frameforge/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "frameforge/random.hpp"

namespace frameforge {

TruncatedMultiplier truncate(const MultiplierSpec& spec, Index trunc_index) {
  VectorSequence phi = build_sequence(spec.phi, trunc_index);
  VectorSequence psi = build_sequence(spec.psi, trunc_index);
  if (phi.ambient_dim() != psi.ambient_dim()) {
    throw PreconditionError("phi lives in C^" + std::to_string(phi.ambient_dim()) + " but psi in C^" +
                                std::to_string(psi.ambient_dim()),
                            "both sequences live in the same Hilbert space");
  }
  const Index count = std::min(phi.size(), psi.size());
  if (const auto len = spec.symbol.length(); len && *len < count) {
    throw PreconditionError("symbol has " + std::to_string(*len) + " entries but the truncation has " +
                                std::to_string(count) + " members",
                            "one symbol entry per sequence member");
  }
  std::vector<Index> head(static_cast<std::size_t>(count));
  for (Index n = 0; n < count; ++n) head[static_cast<std::size_t>(n)] = n;
  if (phi.size() != count) phi = phi.subsequence(head);
  if (psi.size() != count) psi = psi.subsequence(head);
  return {std::move(phi), std::move(psi), spec.symbol.first(count), trunc_index};
}

Matrix assemble(const TruncatedMultiplier& t) {
  const Eigen::Map<const Vector> m(t.symbol.data(), static_cast<Index>(t.symbol.size()));
  return t.phi.columns() * m.asDiagonal() * t.psi.columns().adjoint();
}

OperatorMatrix multiplier_matrix(const MultiplierSpec& spec, Index trunc_index) {
  return {assemble(truncate(spec, trunc_index)), OperatorRole::General};
}

Vector apply_direct(const TruncatedMultiplier& t, const Vector& f) {
  Vector out = Vector::Zero(t.phi.ambient_dim());
  for (Index n = 0; n < t.phi.size(); ++n) {
    out += t.symbol[static_cast<std::size_t>(n)] * t.psi[n].dot(f) * t.phi[n];
  }
  return out;
}

InvertibilityVerdict invertibility_check(const MultiplierSpec& spec, Index trunc_index, double svd_cutoff) {
  const RealVector sv = linalg::singular_values(multiplier_matrix(spec, trunc_index).entries);
  InvertibilityVerdict v;
  v.sigma_max = sv(0);
  v.sigma_min = sv(sv.size() - 1);
  v.invertible = v.sigma_max > 0.0 && v.sigma_min > svd_cutoff * v.sigma_max;
  v.condition = v.invertible ? v.sigma_max / v.sigma_min : std::numeric_limits<double>::infinity();
  return v;
}

// ---------------------------------------------------------------------------
// Unconditional convergence

GrowthTest growth_test(std::span<const double> ns, std::span<const double> values, double slope_threshold,
                       double log_threshold) {
  if (ns.size() != values.size()) throw std::invalid_argument("series length mismatch");
  GrowthTest g;
  const std::size_t n = values.size();
  if (n == 0 || !(values.back() > 0.0)) return g;
  const std::size_t window = std::min(n, std::max<std::size_t>(3, (n + 1) / 2));
  std::vector<double> lx, llx, ly;
  for (std::size_t i = n - window; i < n; ++i) {
    if (!(values[i] > 0.0) || !(ns[i] > 1.0)) continue;
    lx.push_back(std::log(ns[i]));
    llx.push_back(std::log(std::log(ns[i])));
    ly.push_back(std::log(values[i]));
  }
  if (ly.size() < 2) return g;
  g.power_slope = fitted_slope(lx, ly);
  g.log_exponent = fitted_slope(llx, ly);
  g.diverging = g.power_slope > slope_threshold || g.log_exponent > log_threshold;
  return g;
}

UnconditionalityReport unconditionality_diagnostic(const MultiplierSpec& spec, std::span<const Index> ns,
                                                   const UnconditionalityOptions& options) {
  if (ns.empty()) throw std::invalid_argument("unconditionality diagnostic needs truncation indices");
  for (std::size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] <= ns[i - 1]) throw std::invalid_argument("truncation indices must be strictly increasing");
  }
  if (options.trials < 1) throw std::invalid_argument("sign trials must be >= 1");
  if (options.test_vectors < 1) throw std::invalid_argument("test vectors must be >= 1");

  std::vector<TruncatedMultiplier> truncs;
  for (Index n : ns) truncs.push_back(truncate(spec, n));
  const Index dmax = truncs.back().phi.ambient_dim();

  // Random sign patterns shared by every truncation, so that pattern t at N
  // is a prefix of pattern t at N' > N.
  const Index mmax = truncs.back().phi.size();
  std::vector<std::vector<double>> signs(static_cast<std::size_t>(options.trials));
  for (int t = 0; t < options.trials; ++t) {
    auto& row = signs[static_cast<std::size_t>(t)];
    row.resize(static_cast<std::size_t>(mmax));
    for (Index n = 0; n < mmax; ++n) {
      const std::uint64_t h =
          rng::derive(options.seed, {0x5159ULL, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(n)});
      row[static_cast<std::size_t>(n)] = (h >> 63) ? -1.0 : 1.0;
    }
  }

  UnconditionalityReport rep;
  rep.ns.assign(ns.begin(), ns.end());
  rep.trials = options.trials;
  rep.seed = options.seed;
  std::vector<double> xs(ns.begin(), ns.end());

  for (int v = 0; v < options.test_vectors; ++v) {
    rng::Gaussian gen(rng::derive(options.seed, {0x7E57ULL, static_cast<std::uint64_t>(v)}));
    Vector f(dmax);
    for (Index k = 0; k < dmax; ++k) f(k) = gen.complex_next() * std::exp2(-0.5 * static_cast<double>(k));
    f /= f.norm();

    TestVectorSeries series;
    for (const TruncatedMultiplier& t : truncs) {
      const Index d = t.phi.ambient_dim();
      Vector x = Vector::Zero(d);
      x.head(std::min(d, dmax)) = f.head(std::min(d, dmax));
      const Index m = t.phi.size();
      Matrix terms(d, m);
      double s1 = 0.0, l2 = 0.0;
      for (Index n = 0; n < m; ++n) {
        const Scalar ip = t.psi[n].dot(x);
        terms.col(n) = t.symbol[static_cast<std::size_t>(n)] * ip * t.phi[n];
        s1 += std::abs(t.symbol[static_cast<std::size_t>(n)]) * std::abs(ip) * t.phi[n].norm();
        l2 += terms.col(n).squaredNorm();
      }
      Vector greedy = Vector::Zero(d);
      for (Index n = 0; n < m; ++n) {
        if (greedy.dot(terms.col(n)).real() >= 0.0) {
          greedy += terms.col(n);
        } else {
          greedy -= terms.col(n);
        }
      }
      double r = greedy.norm();
      for (const auto& row : signs) {
        Vector s = Vector::Zero(d);
        for (Index n = 0; n < m; ++n) s += row[static_cast<std::size_t>(n)] * terms.col(n);
        r = std::max(r, s.norm());
      }
      series.s1.push_back(s1);
      series.r.push_back(r);
      series.l.push_back(std::sqrt(l2));
    }
    series.s1_growth = growth_test(xs, series.s1, options.slope_threshold, options.log_threshold);
    series.r_growth = growth_test(xs, series.r, options.slope_threshold, options.log_threshold);
    rep.vectors.push_back(std::move(series));
  }

  const bool any_r = std::any_of(rep.vectors.begin(), rep.vectors.end(),
                                 [](const TestVectorSeries& s) { return s.r_growth.diverging; });
  const bool all_s1 = std::all_of(rep.vectors.begin(), rep.vectors.end(),
                                  [](const TestVectorSeries& s) { return !s.s1_growth.diverging; });
  rep.verdict = any_r    ? ConvergenceEvidence::EvidenceConditional
                : all_s1 ? ConvergenceEvidence::EvidenceUnconditional
                         : ConvergenceEvidence::Inconclusive;
  return rep;
}

// ---------------------------------------------------------------------------
// Weight shifting

ShiftedWeights canonical_shift(std::span<const Scalar> symbol) {
  ShiftedWeights w;
  w.alpha.reserve(symbol.size());
  w.beta.reserve(symbol.size());
  for (const Scalar& m : symbol) {
    const double r = std::abs(m);
    if (r == 0.0) {
      w.alpha.emplace_back(0.0, 0.0);
      w.beta.emplace_back(0.0, 0.0);
    } else {
      const double s = std::sqrt(r);
      w.alpha.push_back(m / s);
      w.beta.emplace_back(s, 0.0);
    }
  }
  return w;
}

double shift_product_residual(const ShiftedWeights& w, std::span<const Scalar> symbol) {
  if (w.alpha.size() != symbol.size() || w.beta.size() != symbol.size()) {
    throw std::invalid_argument("shifted weights and symbol differ in length");
  }
  double worst = 0.0;
  for (std::size_t n = 0; n < symbol.size(); ++n) {
    const double scale = std::max(std::abs(symbol[n]), std::numeric_limits<double>::min());
    worst = std::max(worst, std::abs(w.alpha[n] * std::conj(w.beta[n]) - symbol[n]) / scale);
  }
  return worst;
}

ShiftedWeights deinterleave_odd(const ShiftedWeights& w) {
  ShiftedWeights out;
  for (std::size_t i = 0; i < w.alpha.size(); i += 2) out.alpha.push_back(w.alpha[i]);
  for (std::size_t i = 0; i < w.beta.size(); i += 2) out.beta.push_back(w.beta[i]);
  return out;
}

WeightShiftReport weight_shift(const MultiplierSpec& spec, std::span<const Index> ns,
                               const TrendThresholds& thresholds) {
  if (ns.empty()) throw std::invalid_argument("weight_shift needs truncation indices");
  WeightShiftReport rep;
  rep.ns.assign(ns.begin(), ns.end());
  std::vector<double> xs;
  for (Index n : ns) {
    const TruncatedMultiplier t = truncate(spec, n);
    ShiftedWeights w = canonical_shift(t.symbol);
    rep.product_residual = std::max(rep.product_residual, shift_product_residual(w, t.symbol));
    rep.alpha_phi_bound.push_back(frame_bounds(t.phi.scaled(w.alpha)).upper_B);
    rep.beta_psi_bound.push_back(frame_bounds(t.psi.scaled(w.beta)).upper_B);
    xs.push_back(static_cast<double>(n));
    rep.weights = std::move(w);
  }
  rep.alpha_phi_trend = classify_series(xs, rep.alpha_phi_bound, thresholds);
  rep.beta_psi_trend = classify_series(xs, rep.beta_psi_bound, thresholds);
  rep.witnesses_split = rep.alpha_phi_trend.kind != TrendKind::Diverging &&
                        rep.beta_psi_trend.kind != TrendKind::Diverging;
  return rep;
}

// ---------------------------------------------------------------------------
// Interleaving and duality

InterleaveConstruction interleave_identity_construction(const MultiplierSpec& spec, Index trunc_index) {
  const TruncatedMultiplier t = truncate(spec, trunc_index);
  const Index d = t.phi.ambient_dim();
  const Index m = t.phi.size();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix f = id - assemble(t);

  const Index total = m + d;
  Matrix xi(d, total), theta(d, total);
  std::vector<Scalar> symbol;
  symbol.reserve(static_cast<std::size_t>(total));
  Index col = 0;
  for (Index i = 0; i < std::max(m, d); ++i) {
    if (i < m) {
      xi.col(col) = t.phi[i];
      theta.col(col) = t.psi[i];
      symbol.push_back(t.symbol[static_cast<std::size_t>(i)]);
      ++col;
    }
    if (i < d) {
      xi.col(col) = f.col(i);
      theta.col(col) = id.col(i);
      symbol.emplace_back(1.0, 0.0);
      ++col;
    }
  }
  const Eigen::Map<const Vector> mv(symbol.data(), total);
  const Matrix assembled = xi * mv.asDiagonal() * theta.adjoint();
  const double residual = linalg::spectral_norm(assembled - id);
  const std::optional<Origin> origin = t.phi.origin();
  return {std::move(symbol), VectorSequence(std::move(xi), origin), VectorSequence(std::move(theta), origin),
          residual, trunc_index};
}

namespace {

struct Rescaled {
  VectorSequence scaled;      // (||b_n|| a_n)
  VectorSequence normalized;  // (b_n / ||b_n||), zero where b_n = 0
};

Rescaled rescale(const VectorSequence& a, const VectorSequence& b) {
  const RealVector nb = b.norms();
  std::vector<Scalar> up, down;
  for (Index n = 0; n < b.size(); ++n) {
    up.emplace_back(nb(n), 0.0);
    down.emplace_back(nb(n) > 0.0 ? 1.0 / nb(n) : 0.0, 0.0);
  }
  return {a.scaled(up), b.scaled(down)};
}

bool is_frame(const VectorSequence& s, double cutoff) {
  const BoundsReport b = frame_bounds(s, cutoff);
  return b.complete && b.lower_A > b.tolerance;
}

// ||sum_n <., a_n> b_n - I||_2
double reconstruction_residual(const VectorSequence& a, const VectorSequence& b) {
  const Matrix t = b.columns() * a.columns().adjoint();
  return linalg::spectral_norm(t - Matrix::Identity(t.rows(), t.cols()));
}

}  // namespace

DualityReport reconstruction_duality_check(const VectorSequence& f, const VectorSequence& g, double tolerance,
                                           double svd_cutoff) {
  if (f.size() != g.size() || f.ambient_dim() != g.ambient_dim()) {
    throw PreconditionError("paired sequences differ in length or ambient dimension",
                            "both sequences index the same set inside the same space");
  }
  DualityReport r;
  r.inf_norm_product = (f.norms().array() * g.norms().array()).minCoeff();
  if (!(r.inf_norm_product > tolerance) && !is_minimal(f, svd_cutoff) && !is_minimal(g, svd_cutoff)) {
    throw PreconditionError("inf_n ||f_n|| ||g_n|| vanishes and neither sequence is minimal",
                            "inf_n ||f_n|| ||g_n|| > 0, or one of the sequences is minimal");
  }
  r.residual1 = reconstruction_residual(f, g);
  r.stmt1 = r.residual1 <= tolerance;

  const Rescaled two = rescale(f, g);
  r.residual2 = std::max(reconstruction_residual(two.scaled, two.normalized),
                         reconstruction_residual(two.normalized, two.scaled));
  r.stmt2 = is_frame(two.scaled, svd_cutoff) && is_frame(two.normalized, svd_cutoff) && r.residual2 <= tolerance;

  const Rescaled three = rescale(g, f);
  r.residual3 = std::max(reconstruction_residual(three.scaled, three.normalized),
                         reconstruction_residual(three.normalized, three.scaled));
  r.stmt3 = is_frame(three.scaled, svd_cutoff) && is_frame(three.normalized, svd_cutoff) && r.residual3 <= tolerance;

  r.consistent = r.stmt1 == r.stmt2 && r.stmt2 == r.stmt3;
  return r;
}

std::string to_string(ConvergenceEvidence e) {
  switch (e) {
    case ConvergenceEvidence::EvidenceUnconditional:
      return "EvidenceUnconditional";
    case ConvergenceEvidence::EvidenceConditional:
      return "EvidenceConditional";
    case ConvergenceEvidence::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

}  // namespace frameforge
