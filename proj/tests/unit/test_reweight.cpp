#include <doctest.h>

#include <cmath>
#include <functional>

#include "frameforge/reweight.hpp"
#include "support/testgen.hpp"

using namespace frameforge;

namespace {

Matrix weighted(const Matrix& cols, const WeightSeq& w) {
  Matrix out = cols;
  for (Index n = 0; n < cols.cols(); ++n) out.col(n) *= w[n];
  return out;
}

Matrix unit_columns(Index d, std::initializer_list<Index> rows) {
  Matrix m = Matrix::Zero(d, static_cast<Index>(rows.size()));
  Index c = 0;
  for (Index r : rows) m(r, c++) = 1.0;
  return m;
}

// random sequence that sometimes carries zero and repeated members
Matrix messy(testgen::Gen& gen, Index d, Index m) {
  Matrix cols = gen.gaussian(d, m);
  for (Index n = 0; n < m; ++n) {
    const double roll = gen.uniform();
    if (roll < 0.1) cols.col(n).setZero();
    else if (roll < 0.2 && n > 0) cols.col(n) = cols.col(gen.integer(0, n - 1));
  }
  return cols;
}

bool is_basis(const Matrix& cols) { return cols.cols() == cols.rows() && testgen::lu_rank(cols, 1e-9) == cols.rows(); }

// every size-d column subset, looking for a basis
bool some_basis_exists(const Matrix& cols) {
  const Index d = cols.rows(), m = cols.cols();
  std::vector<Index> pick;
  std::function<bool(Index)> rec = [&](Index from) {
    if (static_cast<Index>(pick.size()) == d) {
      Matrix sub(d, d);
      for (Index i = 0; i < d; ++i) sub.col(i) = cols.col(pick[static_cast<std::size_t>(i)]);
      return is_basis(sub);
    }
    for (Index n = from; n < m; ++n) {
      pick.push_back(n);
      if (rec(n + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  return rec(0);
}

std::vector<Index> sweep_ns() { return {4, 8, 16, 32, 64}; }

}  // namespace

TEST_CASE("bessel weights on an orthonormal basis") {
  const VectorSequence onb(Matrix::Identity(3, 3));
  const std::vector<double> raw{std::sqrt(0.5), 0.5, 0.5};
  const WeightCertificate c = bessel_weights(onb, 1.0, normalize_tau(raw));
  for (Index n = 0; n < 3; ++n) CHECK(c.weights[n].real() == doctest::Approx(raw[static_cast<std::size_t>(n)]));
  CHECK(c.claim.kind == ClaimKind::BesselBound);
  CHECK(c.claim.upper == 1.0);
  CHECK(c.observed_upper == doctest::Approx(0.5));
  CHECK(check_certificate(onb, c));
}

TEST_CASE("bessel weights give zero members weight 1") {
  Matrix cols = Matrix::Identity(3, 3);
  cols.col(1).setZero();
  const VectorSequence s(cols);
  const WeightCertificate c = bessel_weights(s, 2.0, default_tau(3));
  CHECK(c.weights[1] == Scalar(1.0));
  CHECK(check_certificate(s, c));
  CHECK_THROWS_AS(bessel_weights(s, 0.0, default_tau(3)), std::invalid_argument);
  CHECK_THROWS_AS(bessel_weights(s, -1.0, default_tau(3)), std::invalid_argument);
  CHECK_THROWS_AS(bessel_weights(s, 1.0, default_tau(4)), PreconditionError);
}

TEST_CASE("bessel weights never exceed the requested bound") {
  testgen::Gen gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = gen.integer(1, 8);
    const Index m = gen.integer(1, 16);
    const Matrix cols = messy(gen, d, m);
    const VectorSequence s(cols);
    for (double b : {0.5, 1.0, 10.0}) {
      const TauWeights tau = normalize_tau(gen.positive(m, 0.1, 1.0));
      const WeightCertificate c = bessel_weights(s, b, tau);
      CHECK(testgen::eigen_bounds(weighted(cols, c.weights)).upper <= b * (1.0 + 1e-9));
      for (Index n = 0; n < m; ++n) {
        const double norm = cols.col(n).norm();
        const double expected = norm > 0.0 ? tau[n] * std::sqrt(b) / norm : 1.0;
        CHECK(c.weights[n].real() == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("bessel weights hold on builtin families") {
  const std::vector<SequenceSpec> specs{
      SequenceSpec::from_family(family::OrthonormalBasis{}),
      SequenceSpec::from_family(family::OnePlusEn{}),
      SequenceSpec::from_family(family::NTimesOnePlusEn{}),
      SequenceSpec::from_family(family::FiniteDomainExample{3}),
      SequenceSpec::from_family(family::RandomGaussian{5, {1, 0}, {2, 0}}),
      SequenceSpec::from_family(family::RepeatedVector{2}),
  };
  for (const SequenceSpec& spec : specs) {
    CAPTURE(spec.name());
    const VectorSequence s = build_sequence(spec, 24);
    const WeightCertificate c = bessel_weights(s, 1.0, default_tau(s.size()));
    CHECK(testgen::eigen_bounds(weighted(s.columns(), c.weights)).upper <= 1.0 + 1e-9);
  }
}

TEST_CASE("dual pair reweighting of an orthonormal basis") {
  const VectorSequence onb(Matrix::Identity(4, 4));
  const TauWeights tau = default_tau(4);
  const DualPairReweighting r = dual_pair_reweight(onb, onb, tau);
  for (Index n = 0; n < 4; ++n) {
    CHECK(r.lambda[n].real() == doctest::Approx(tau[n]));
    CHECK(r.beta[n].real() == doctest::Approx(tau[n]));
  }
  // (e_n / tau_n): lower bound min 1/tau_n^2 >= 1
  CHECK(r.lambda_inv_f.observed_lower >= 1.0);
  CHECK(r.duality_residual_lambda < 1e-12);
}

TEST_CASE("dual pair reweighting of diagonal pairs") {
  const VectorSequence f = build_sequence(SequenceSpec::from_family(family::Diagonal{ScalarRule::constant(2.0)}), 5);
  const VectorSequence g = build_sequence(SequenceSpec::from_family(family::Diagonal{ScalarRule::constant(0.5)}), 5);
  const DualPairReweighting r = dual_pair_reweight(f, g, default_tau(5));
  CHECK(testgen::eigen_bounds(weighted(f.columns(), r.lambda_inv_f.weights)).lower >= 1.0 - 1e-9);
  CHECK(testgen::eigen_bounds(weighted(g.columns(), r.beta_inv_g.weights)).lower >= 1.0 - 1e-9);
  CHECK(testgen::eigen_bounds(weighted(g.columns(), r.lambda)).upper <= 1.0 + 1e-9);
  CHECK(testgen::eigen_bounds(weighted(f.columns(), r.beta)).upper <= 1.0 + 1e-9);
  CHECK_THROWS_AS(dual_pair_reweight(f, f, default_tau(5)), PreconditionError);
}

TEST_CASE("dual pair reweighting of random canonical dual frames") {
  testgen::Gen gen(12);
  for (int trial = 0; trial < 60; ++trial) {
    const Index d = gen.integer(1, 6);
    const Index m = gen.integer(d, 3 * d);
    const Matrix fc = gen.gaussian(d, m);
    const Matrix gc = testgen::canonical_dual(fc);
    const VectorSequence f(fc), g(gc);
    const TauWeights tau = normalize_tau(gen.positive(m, 0.2, 1.0));
    const DualPairReweighting r = dual_pair_reweight(f, g, tau);

    WeightSeq lambda_inv = WeightSeq::ones(m), beta_inv = WeightSeq::ones(m);
    std::vector<double> li, bi;
    for (Index n = 0; n < m; ++n) {
      CHECK(r.lambda[n].real() == doctest::Approx(tau[n] / gc.col(n).norm()));
      CHECK(r.beta[n].real() == doctest::Approx(tau[n] / fc.col(n).norm()));
      li.push_back(1.0 / r.lambda[n].real());
      bi.push_back(1.0 / r.beta[n].real());
    }
    lambda_inv = WeightSeq::positive(li);
    beta_inv = WeightSeq::positive(bi);
    CHECK(testgen::eigen_bounds(weighted(fc, lambda_inv)).lower >= 1.0 - 1e-9);
    CHECK(testgen::eigen_bounds(weighted(gc, r.lambda)).upper <= 1.0 + 1e-9);
    CHECK(testgen::eigen_bounds(weighted(gc, beta_inv)).lower >= 1.0 - 1e-9);
    CHECK(testgen::eigen_bounds(weighted(fc, r.beta)).upper <= 1.0 + 1e-9);
    // reweighted pairs stay weakly dual
    const Matrix id = Matrix::Identity(d, d);
    CHECK(testgen::max_abs(weighted(gc, r.lambda) * weighted(fc, lambda_inv).adjoint() - id) < 1e-9);
    CHECK(testgen::max_abs(weighted(gc, beta_inv) * weighted(fc, r.beta).adjoint() - id) < 1e-9);
    CHECK(r.duality_residual_lambda < 1e-9);
    CHECK(r.duality_residual_beta < 1e-9);
  }
}

TEST_CASE("reproducing pair reweighting of an orthonormal basis") {
  const VectorSequence onb(Matrix::Identity(3, 3));
  const TauWeights tau = default_tau(3);
  const ReproducingPairReweighting r = reproducing_pair_reweight(onb, onb, 4.0, tau);
  CHECK(testgen::max_abs(r.t - Matrix::Identity(3, 3)) < 1e-14);
  CHECK(testgen::max_abs(r.h.columns() - Matrix::Identity(3, 3)) < 1e-14);
  for (Index n = 0; n < 3; ++n) CHECK(r.lambda[n].real() == doctest::Approx(tau[n] / 2.0));
  CHECK(r.lambda_inv_f.observed_lower >= 4.0 * (1.0 - 1e-9));
}

TEST_CASE("reproducing pair with a scalar operator") {
  const double c = 3.0;
  const VectorSequence f(Matrix::Identity(4, 4) * c);
  const VectorSequence g(Matrix::Identity(4, 4));
  const ReproducingPairReweighting r = reproducing_pair_reweight(f, g, 1.0, default_tau(4));
  CHECK(testgen::max_abs(r.t - c * Matrix::Identity(4, 4)) < 1e-14);
  CHECK(r.t_condition == doctest::Approx(1.0));
  CHECK(check_certificate(f, r.lambda_inv_f));
  CHECK(check_certificate(g, r.beta_inv_g));
  CHECK(check_certificate(g, r.lambda_g));
  CHECK(check_certificate(f, r.beta_f));
}

TEST_CASE("reproducing pair reweighting on random invertible pairs") {
  testgen::Gen gen(13);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = gen.integer(1, 6);
    const Index m = gen.integer(d, 2 * d + 2);
    const Matrix fc = gen.gaussian(d, m), gc = gen.gaussian(d, m);
    const Matrix t = gc * fc.adjoint();
    if (Eigen::JacobiSVD<Matrix>(t).singularValues().minCoeff() < 1e-3) continue;
    const VectorSequence f(fc), g(gc);
    for (double a : {0.1, 1.0, 7.0}) {
      const ReproducingPairReweighting r = reproducing_pair_reweight(f, g, a, default_tau(m));
      std::vector<double> li, bi;
      for (Index n = 0; n < m; ++n) {
        li.push_back(1.0 / r.lambda[n].real());
        bi.push_back(1.0 / r.beta[n].real());
      }
      CHECK(testgen::eigen_bounds(weighted(fc, WeightSeq::positive(li))).lower >= a * (1.0 - 1e-9));
      CHECK(testgen::eigen_bounds(weighted(gc, WeightSeq::positive(bi))).lower >= a * (1.0 - 1e-9));
      // h_n = T^{-1} g_n
      CHECK(testgen::max_abs(t * r.h.columns() - gc) < 1e-8 * (1.0 + testgen::max_abs(gc)));
    }
  }
}

TEST_CASE("reproducing pair certificate is invariant under a common unitary") {
  testgen::Gen gen(14);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = gen.integer(2, 5);
    const Index m = gen.integer(d, 2 * d);
    const Matrix fc = gen.gaussian(d, m), gc = gen.gaussian(d, m);
    const Matrix u = gen.unitary(d);
    const auto base = reproducing_pair_reweight(VectorSequence(fc), VectorSequence(gc), 2.0, default_tau(m));
    const auto rot = reproducing_pair_reweight(VectorSequence(u * fc), VectorSequence(u * gc), 2.0, default_tau(m));
    CHECK(rot.lambda_inv_f.claim.lower == base.lambda_inv_f.claim.lower);
    CHECK(rot.lambda_inv_f.observed_lower == doctest::Approx(base.lambda_inv_f.observed_lower).epsilon(1e-8));
    CHECK(rot.beta_inv_g.observed_lower == doctest::Approx(base.beta_inv_g.observed_lower).epsilon(1e-8));
  }
}

TEST_CASE("reproducing pair refuses singular operators") {
  const VectorSequence f(unit_columns(2, {0, 0}));
  CHECK_THROWS_AS(reproducing_pair_reweight(f, f, 1.0, default_tau(2)), PreconditionError);
  Matrix bad = Matrix::Identity(2, 2);
  bad(1, 1) = 1e-10;
  CHECK_THROWS_AS(reproducing_pair_reweight(VectorSequence(bad), VectorSequence(Matrix::Identity(2, 2)), 1.0,
                                            default_tau(2)),
                  PreconditionError);
  CHECK_THROWS_AS(reproducing_pair_reweight(VectorSequence(Matrix::Identity(2, 2)),
                                            VectorSequence(Matrix::Identity(2, 2)), 0.0, default_tau(2)),
                  std::invalid_argument);
}

TEST_CASE("surjective multiplier dual") {
  const VectorSequence onb(Matrix::Identity(3, 3));
  const SurjectiveDual id = surjective_multiplier_dual(onb, onb);
  CHECK(testgen::max_abs(id.dual.columns() - Matrix::Identity(3, 3)) < 1e-14);
  CHECK(id.verified);

  Matrix fc = Matrix::Identity(2, 2);
  fc(0, 0) = 2.0;
  const SurjectiveDual diag = surjective_multiplier_dual(VectorSequence(fc), VectorSequence(Matrix::Identity(2, 2)));
  CHECK(std::abs(diag.multiplier(0, 0) - 2.0) < 1e-14);
  CHECK(std::abs(diag.dual[0](0) - 0.5) < 1e-14);
  CHECK(std::abs(diag.dual[1](1) - 1.0) < 1e-14);

  testgen::Gen gen(15);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = gen.integer(1, 6);
    const Index m = gen.integer(d, 2 * d + 2);
    const Matrix f = gen.gaussian(d, m), g = gen.gaussian(d, m);
    const SurjectiveDual r = surjective_multiplier_dual(VectorSequence(f), VectorSequence(g));
    // sum_n <e_k, dual_n> f_n = e_k, computed directly
    double worst = 0.0;
    for (Index k = 0; k < d; ++k) {
      Vector acc = Vector::Zero(d);
      for (Index n = 0; n < m; ++n) acc += std::conj(r.dual[n](k)) * f.col(n);
      acc(k) -= 1.0;
      worst = std::max(worst, acc.norm());
    }
    CHECK(worst <= 1e-9);
    CHECK(r.verified);
  }
  CHECK_THROWS_AS(surjective_multiplier_dual(VectorSequence(unit_columns(2, {0, 0})), VectorSequence(unit_columns(2, {0, 0}))),
                  PreconditionError);
}

TEST_CASE("finite domain lower bound on the anti-diagonal example") {
  const auto spec = SequenceSpec::from_family(family::FiniteDomainExample{3});
  for (Index n : {4, 10, 30}) {
    const VectorSequence s = build_sequence(spec, n);
    const FiniteDomainBound b = finite_domain_lower_bound(s, Subspace::coordinate(s.ambient_dim(), 0, 3));
    CHECK(b.certificate.claim.lower == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(b.riesz_witness == std::vector<Index>{0, 1, 2});
    CHECK(b.direct_lower == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("finite domain lower bound on a line") {
  testgen::Gen gen(16);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = gen.integer(2, 6);
    Matrix cols = gen.gaussian(d, 4);
    const Vector v = cols.col(2);
    const FiniteDomainBound b =
        finite_domain_lower_bound(VectorSequence(cols), Subspace::from_orthonormal(v / v.norm()));
    CHECK(b.certificate.claim.lower >= v.squaredNorm() * (1.0 - 1e-12));
  }
}

TEST_CASE("finite domain lower bound matches a projected eigen oracle") {
  testgen::Gen gen(17);
  for (int trial = 0; trial < 60; ++trial) {
    const Index d = gen.integer(2, 8);
    const Index k = gen.integer(1, d);
    const Index m = gen.integer(k, 2 * d);
    const Matrix cols = gen.gaussian(d, m);
    const Matrix basis = gen.unitary(d).leftCols(k);
    const FiniteDomainBound b = finite_domain_lower_bound(VectorSequence(cols), Subspace::from_orthonormal(basis));
    const double oracle = testgen::eigen_bounds(basis.adjoint() * cols).lower;
    CHECK(b.certificate.claim.lower == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(b.direct_lower == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(b.witness_lower <= b.certificate.claim.lower * (1.0 + 1e-9));
    CHECK(static_cast<Index>(b.riesz_witness.size()) == k);
  }
  CHECK_THROWS_AS(finite_domain_lower_bound(VectorSequence(unit_columns(3, {0})), Subspace::coordinate(3, 1, 1)),
                  PreconditionError);
}

TEST_CASE("monotone weight check") {
  const VectorSequence onb(Matrix::Identity(3, 3));
  const WeightSeq w = WeightSeq::positive({0.5, 2.0, 1.0});
  const WeightSeq w1 = WeightSeq::positive({1.5, 3.0, 2.0});
  CHECK(monotone_weight_check(onb, w, w));
  CHECK(monotone_weight_check(onb, w, w1));
  CHECK(observe_bounds(onb, w).lower == doctest::Approx(0.25));
  CHECK(observe_bounds(onb, w1).lower == doctest::Approx(2.25));
  CHECK_THROWS_AS(monotone_weight_check(onb, w1, w), PreconditionError);
  CHECK_THROWS_AS(monotone_weight_check(onb, WeightSeq::nonnegative({0.0, 1.0, 1.0}), w1), PreconditionError);

  testgen::Gen gen(18);
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = gen.integer(1, 6);
    const Index m = gen.integer(1, 12);
    const VectorSequence s(messy(gen, d, m));
    std::vector<double> small = gen.positive(m, 0.01, 3.0), large = small;
    for (double& x : large) x += gen.uniform() < 0.3 ? 0.0 : gen.uniform(0.0, 2.0);
    CHECK(monotone_weight_check(s, WeightSeq::positive(small), WeightSeq::positive(large), 8,
                                static_cast<std::uint64_t>(trial)));
  }
}

TEST_CASE("necessary conditions: one_plus_en with unit weights") {
  const auto spec = SequenceSpec::from_family(family::OnePlusEn{});
  std::vector<WeightedTruncation> sweep;
  for (Index n : sweep_ns()) {
    VectorSequence s = build_sequence(spec, n);
    sweep.push_back({n, s, WeightSeq::ones(s.size())});
  }
  const auto r = necessary_conditions_check(sweep, spec.limit_meta());
  CHECK(!r.bessel_observed);
  // B = N - 1 for unit weights (frame operator has e_1 eigenvalue N)
  for (std::size_t i = 0; i < r.ns.size(); ++i) CHECK(r.upper_B[i] >= static_cast<double>(r.ns[i] - 1));
  bool three = false;
  for (const auto& f : r.findings) three = three || f.which == 3;
  CHECK(three);
}

TEST_CASE("necessary conditions: growing weights on an orthonormal basis") {
  const auto spec = SequenceSpec::from_family(family::OrthonormalBasis{});
  std::vector<WeightedTruncation> sweep;
  for (Index n : sweep_ns()) {
    std::vector<double> w;
    for (Index k = 1; k <= n; ++k) w.push_back(static_cast<double>(k));
    sweep.push_back({n, build_sequence(spec, n), WeightSeq::positive(w)});
  }
  const auto r = necessary_conditions_check(sweep, spec.limit_meta());
  std::vector<int> which;
  for (const auto& f : r.findings) which.push_back(f.which);
  CHECK(which == std::vector<int>{1, 2});
}

TEST_CASE("necessary conditions: bounded weights on a Bessel family") {
  testgen::Gen gen(19);
  const auto spec = SequenceSpec::from_family(family::OrthonormalBasis{});
  std::vector<WeightedTruncation> sweep;
  for (Index n : sweep_ns()) sweep.push_back({n, build_sequence(spec, n), WeightSeq::positive(gen.positive(n, 0.5, 2.0))});
  const auto r = necessary_conditions_check(sweep, spec.limit_meta());
  CHECK(r.findings.empty());
  CHECK(r.bessel_observed);
}

TEST_CASE("biorthogonal scan on one_plus_en") {
  const auto spec = SequenceSpec::from_family(family::OnePlusEn{});
  std::vector<VectorSequence> truncs;
  for (Index n : sweep_ns()) truncs.push_back(build_sequence(spec, n));
  const BiorthogonalScan scan = biorthogonal_obstruction(truncs, spec.limit_meta());
  CHECK(scan.fired);
  REQUIRE(scan.direction);
  CHECK(*scan.direction == 0);
  for (std::size_t i = 0; i < truncs.size(); ++i) {
    CHECK(scan.defects[i] == 1);
    // independent biorthogonal system G = F (F^* F)^{-1}
    const Matrix f = truncs[i].columns();
    const Matrix g = f * (f.adjoint() * f).inverse();
    double captured = 0.0;
    for (Index m = 0; m < g.cols(); ++m) captured += std::norm(g(0, m)) / g.col(m).squaredNorm();
    CHECK(scan.residuals[i] == doctest::Approx(1.0 - captured).epsilon(1e-10));
    CHECK(scan.residuals[i] == doctest::Approx(1.0 - 1.0 / static_cast<double>(scan.ns[i])).epsilon(1e-10));
  }

  const auto undeclared = SequenceSpec::from_family(family::OnePlusEn{}, LimitMeta{false, std::nullopt});
  CHECK(!biorthogonal_obstruction(truncs, undeclared.limit_meta()).fired);
}

TEST_CASE("biorthogonal scan stays quiet on complete biorthogonal systems") {
  for (const SequenceSpec& spec : {SequenceSpec::from_family(family::OrthonormalBasis{}),
                                   SequenceSpec::from_family(family::Diagonal{ScalarRule::power(1.0)})}) {
    std::vector<VectorSequence> truncs;
    for (Index n : sweep_ns()) truncs.push_back(build_sequence(spec, n));
    const BiorthogonalScan scan = biorthogonal_obstruction(truncs, spec.limit_meta());
    CHECK(!scan.fired);
    for (Index d : scan.defects) CHECK(d == 0);
  }
  // biorthogonal of Diagonal(n) is Diagonal(1/n)
  const VectorSequence diag = build_sequence(SequenceSpec::from_family(family::Diagonal{ScalarRule::power(1.0)}), 5);
  const BiorthogonalDefect d = biorthogonal_defect(diag);
  for (Index n = 0; n < 5; ++n) CHECK(std::abs(d.biorthogonal[n](n) - 1.0 / static_cast<double>(n + 1)) < 1e-12);
}

TEST_CASE("subsequence lift with junk") {
  testgen::Gen gen(20);
  const Index d = 4;
  Matrix cols(d, d + 3);
  cols << Matrix::Identity(d, d), gen.gaussian(d, 3) * 5.0;
  const VectorSequence s(cols);
  const std::vector<Index> subset{0, 1, 2, 3};
  const WeightCertificate c = subsequence_lift(s, subset, WeightSeq::ones(d));
  CHECK(c.claim.kind == ClaimKind::FrameBounds);
  const testgen::Bounds b = testgen::eigen_bounds(weighted(cols, c.weights));
  CHECK(b.lower >= 1.0 - 1e-9);
  CHECK(b.upper <= 2.0 + 1e-9);
  CHECK(c.claim.upper == doctest::Approx(2.0));
}

TEST_CASE("subsequence lift over the whole sequence is the frame bound") {
  testgen::Gen gen(21);
  const Matrix cols = gen.gaussian(3, 5);
  const std::vector<Index> all{0, 1, 2, 3, 4};
  const WeightSeq w = WeightSeq::positive(gen.positive(5, 0.5, 2.0));
  const WeightCertificate c = subsequence_lift(VectorSequence(cols), all, w);
  const testgen::Bounds b = testgen::eigen_bounds(weighted(cols, w));
  CHECK(c.claim.lower == doctest::Approx(b.lower).epsilon(1e-9));
  CHECK(c.claim.upper == doctest::Approx(b.upper).epsilon(1e-9));
}

TEST_CASE("subsequence lift on random frames") {
  testgen::Gen gen(22);
  for (int trial = 0; trial < 60; ++trial) {
    const Index d = gen.integer(1, 5);
    const Index k = gen.integer(d, 2 * d);
    const Index extra = gen.integer(0, 6);
    const Matrix cols = messy(gen, d, k + extra);
    std::vector<Index> subset;
    for (Index n = 0; n < k + extra; ++n) subset.push_back(n);
    // shuffle and keep k of them
    for (Index i = k + extra - 1; i > 0; --i)
      std::swap(subset[static_cast<std::size_t>(i)], subset[static_cast<std::size_t>(gen.integer(0, i))]);
    subset.resize(static_cast<std::size_t>(k));
    Matrix sub(d, k);
    for (Index i = 0; i < k; ++i) sub.col(i) = cols.col(subset[static_cast<std::size_t>(i)]);
    const WeightSeq w = WeightSeq::positive(gen.positive(k, 0.5, 2.0));
    const VectorSequence s(cols);
    if (testgen::eigen_bounds(weighted(sub, w)).lower < 1e-6) {
      CHECK_THROWS_AS(subsequence_lift(s, subset, w), PreconditionError);
      continue;
    }
    const WeightCertificate c = subsequence_lift(s, subset, w);
    const testgen::Bounds b = testgen::eigen_bounds(weighted(cols, c.weights));
    CHECK(b.lower >= c.claim.lower * (1.0 - 1e-9));
    CHECK(b.upper <= c.claim.upper * (1.0 + 1e-9));
  }
}

TEST_CASE("excess characterization examples") {
  const auto r = excess_characterization(VectorSequence(unit_columns(2, {0, 0, 1})), WeightSeq::ones(3));
  REQUIRE(r);
  CHECK(*r == std::vector<Index>{1, 2});

  const Index d = 4;
  Matrix cols(d, d + 1);
  cols << Matrix::Identity(d, d), Vector::Zero(d);
  cols(0, d) = 1.0;
  cols(1, d) = 1.0;
  const auto onb_plus = excess_characterization(VectorSequence(cols), WeightSeq::ones(d + 1));
  REQUIRE(onb_plus);
  CHECK(*onb_plus == std::vector<Index>{0, 1, 2, 3});

  CHECK_THROWS_AS(excess_characterization(VectorSequence(Matrix::Identity(2, 2)), WeightSeq::ones(2)), PreconditionError);
  CHECK_THROWS_AS(excess_characterization(VectorSequence(unit_columns(3, {0, 0})), WeightSeq::ones(2)), PreconditionError);
}

TEST_CASE("excess characterization agrees with exhaustive search") {
  testgen::Gen gen(23);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const Index d = gen.integer(1, 6);
    const Index k = gen.integer(1, 3);
    const Matrix cols = messy(gen, d, d + k);
    const WeightSeq w = WeightSeq::positive(gen.positive(d + k, 0.3, 3.0));
    const VectorSequence s(cols);
    const BoundsReport b = frame_bounds(apply_weights(s, w));
    if (!b.complete || b.excess == 0) continue;
    ++checked;
    const auto r = excess_characterization(s, w);
    CHECK(r.has_value() == some_basis_exists(weighted(cols, w)));
    if (r) {
      CHECK(static_cast<Index>(r->size()) < d + k);
      CHECK(std::is_sorted(r->begin(), r->end()));
      CHECK(riesz_test(apply_weights(s, w).subsequence(*r)).riesz);
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("range characterization legs agree") {
  const RangeCharacterization onb = range_characterization_check(VectorSequence(Matrix::Identity(3, 3)), WeightSeq::ones(3));
  CHECK(onb.weighted_frame);
  CHECK(onb.analysis_bounded_below);
  CHECK(onb.synthesis_onto);
  CHECK(onb.consistent);

  const RangeCharacterization inc = range_characterization_check(VectorSequence(unit_columns(3, {0, 1})), WeightSeq::ones(2));
  CHECK(!inc.weighted_frame);
  CHECK(!inc.analysis_bounded_below);
  CHECK(!inc.synthesis_onto);
  CHECK(inc.consistent);

  testgen::Gen gen(24);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = gen.integer(1, 6);
    const Index r = gen.integer(1, d);
    const Index m = gen.integer(1, 10);
    const Matrix cols = gen.gaussian(d, r) * gen.gaussian(r, m);
    const WeightSeq w = WeightSeq::positive(gen.positive(m, 0.1, 5.0));
    const RangeCharacterization rc = range_characterization_check(VectorSequence(cols), w);
    CHECK(rc.consistent);
    CHECK(rc.weighted_frame == (testgen::lu_rank(cols, 1e-9) == d));
  }
}

TEST_CASE("certificate checks reject false claims") {
  const VectorSequence onb(Matrix::Identity(2, 2));
  WeightCertificate c = bessel_weights(onb, 1.0, default_tau(2));
  CHECK(check_certificate(onb, c));
  c.claim = Claim::bessel(0.1);
  CHECK(!check_certificate(onb, c));
  c.claim = Claim::lower_bound(10.0);
  CHECK(!check_certificate(onb, c));
}
