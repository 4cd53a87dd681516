#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "frameforge/opspace.hpp"
#include "support/testgen.hpp"

using namespace frameforge;

namespace {

VectorSequence random_sequence(testgen::Gen& gen, Index d, Index m) { return VectorSequence(gen.gaussian(d, m)); }

Matrix unit_columns(Index d, std::initializer_list<Index> rows) {
  Matrix m = Matrix::Zero(d, static_cast<Index>(rows.size()));
  Index c = 0;
  for (Index r : rows) m(r, c++) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("operator matrices have the documented shapes and roles") {
  testgen::Gen gen(1);
  const VectorSequence s = random_sequence(gen, 3, 5);
  const OperatorMatrix c = analysis_matrix(s);
  CHECK(c.role == OperatorRole::Analysis);
  CHECK(c.rows() == 5);
  CHECK(c.cols() == 3);
  const Vector f = gen.unit(3);
  const Vector coeffs = c.entries * f;
  for (Index n = 0; n < 5; ++n) CHECK(std::abs(coeffs(n) - s[n].dot(f)) < 1e-12);  // <f, f_n>
  CHECK(testgen::max_abs(synthesis_matrix(s).entries - c.entries.adjoint()) == 0.0);
  const OperatorMatrix sf = frame_operator(s);
  CHECK(testgen::max_abs(sf.entries - sf.entries.adjoint()) == 0.0);
  const OperatorMatrix g = gram_matrix(s);
  for (Index m = 0; m < 5; ++m)
    for (Index n = 0; n < 5; ++n) CHECK(std::abs(g.entries(m, n) - s[m].dot(s[n])) < 1e-12);
}

TEST_CASE("frame bounds agree with the frame-operator eigenvalues") {
  testgen::Gen gen(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = gen.integer(1, 12);
    const Index m = gen.integer(d, 3 * d);
    const VectorSequence s = random_sequence(gen, d, m);
    const BoundsReport b = frame_bounds(s);
    const testgen::Bounds o = testgen::eigen_bounds(s.columns());
    CHECK(b.complete);
    CHECK(b.upper_B == doctest::Approx(o.upper).epsilon(1e-10));
    CHECK(b.lower_A == doctest::Approx(o.lower).epsilon(1e-8));
    CHECK(b.lower_A <= b.upper_B);
    CHECK(b.excess == m - d);
  }
}

TEST_CASE("basic frame-bound cases") {
  const BoundsReport onb = frame_bounds(VectorSequence(Matrix::Identity(4, 4)));
  CHECK(onb.lower_A == doctest::Approx(1.0));
  CHECK(onb.upper_B == doctest::Approx(1.0));
  CHECK(onb.minimal);
  CHECK(onb.excess == 0);

  const BoundsReport dup = frame_bounds(VectorSequence(unit_columns(2, {0, 0, 1})));
  CHECK(dup.complete);
  CHECK(!dup.minimal);
  CHECK(dup.excess == 1);
  CHECK(dup.upper_B == doctest::Approx(2.0));
  CHECK(dup.lower_A == doctest::Approx(1.0));

  const BoundsReport incomplete = frame_bounds(VectorSequence(unit_columns(3, {0, 1})));
  CHECK(!incomplete.complete);
  CHECK(incomplete.lower_A == 0.0);
  CHECK(incomplete.ratio() == 0.0);
}

TEST_CASE("excess matches a full-pivot LU rank") {
  testgen::Gen gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = gen.integer(1, 7);
    const Index r = gen.integer(1, d);
    const Index m = gen.integer(1, 10);
    // rank-r columns built from a random basis
    const Matrix cols = gen.gaussian(d, r) * gen.gaussian(r, m);
    const VectorSequence s(cols);
    CHECK(excess(s) == m - testgen::lu_rank(cols, 1e-9));
    CHECK(is_minimal(s) == (testgen::lu_rank(cols, 1e-9) == m));
  }
}

TEST_CASE("biorthogonal system is biorthogonal and lives in the span") {
  testgen::Gen gen(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = gen.integer(2, 10);
    const Index m = gen.integer(1, d);
    const VectorSequence f = random_sequence(gen, d, m);
    const VectorSequence g = biorthogonal(f);
    for (Index a = 0; a < m; ++a) {
      for (Index b = 0; b < m; ++b) {
        Scalar ip = 0.0;
        for (Index i = 0; i < d; ++i) ip += f[a](i) * std::conj(g[b](i));
        CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-9);
      }
    }
    // g_m = F c for some c: residual of the least-squares fit vanishes
    const Matrix coeffs = f.columns().colPivHouseholderQr().solve(g.columns());
    CHECK(testgen::max_abs(f.columns() * coeffs - g.columns()) < 1e-9);
  }
  CHECK_THROWS_AS(biorthogonal(VectorSequence(unit_columns(2, {0, 0}))), PreconditionError);
}

TEST_CASE("pseudo-inverse satisfies the Penrose identities") {
  testgen::Gen gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Index rows = gen.integer(1, 9);
    const Index cols = gen.integer(1, 9);
    const Index r = gen.integer(1, std::min(rows, cols));
    const Matrix a = gen.gaussian(rows, r) * gen.gaussian(r, cols);
    const Matrix p = pseudo_inverse({a, OperatorRole::General}).entries;
    const double scale = 1.0 + testgen::max_abs(a) * testgen::max_abs(p);
    CHECK(testgen::max_abs(a * p * a - a) < 1e-9 * scale * testgen::max_abs(a));
    CHECK(testgen::max_abs(p * a * p - p) < 1e-9 * scale * testgen::max_abs(p));
    const Matrix ap = a * p, pa = p * a;
    CHECK(testgen::max_abs(ap - ap.adjoint()) < 1e-9 * scale);
    CHECK(testgen::max_abs(pa - pa.adjoint()) < 1e-9 * scale);
  }
}

TEST_CASE("frame bounds are invariant under permutation and unitary maps") {
  testgen::Gen gen(6);
  for (int trial = 0; trial < 40; ++trial) {
    const Index d = gen.integer(1, 8);
    const Index m = gen.integer(d, 2 * d + 3);
    const VectorSequence s = random_sequence(gen, d, m);
    std::vector<Index> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), Index{0});
    for (Index i = m - 1; i > 0; --i) std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(gen.integer(0, i))]);
    const BoundsReport base = frame_bounds(s);
    const BoundsReport permuted = frame_bounds(s.subsequence(perm));
    const BoundsReport rotated = frame_bounds(s.transformed(gen.unitary(d)));
    CHECK(permuted.upper_B == doctest::Approx(base.upper_B).epsilon(1e-10));
    CHECK(permuted.lower_A == doctest::Approx(base.lower_A).epsilon(1e-8));
    CHECK(rotated.upper_B == doctest::Approx(base.upper_B).epsilon(1e-10));
    CHECK(rotated.lower_A == doctest::Approx(base.lower_A).epsilon(1e-8));
  }
}

TEST_CASE("riesz test") {
  CHECK(riesz_test(VectorSequence(Matrix::Identity(3, 3))).riesz);
  const RieszVerdict dup = riesz_test(VectorSequence(unit_columns(2, {0, 0, 1})));
  CHECK(!dup.riesz);
  CHECK(dup.reason.find("excess") != std::string::npos);
  const RieszVerdict inc = riesz_test(VectorSequence(unit_columns(3, {0, 1})));
  CHECK(!inc.riesz);
  CHECK(inc.reason.find("incomplete") != std::string::npos);
  testgen::Gen gen(7);
  CHECK(riesz_test(VectorSequence(gen.gaussian(5, 5))).riesz);
}

TEST_CASE("subspaces and projections") {
  CHECK_THROWS_AS(Subspace::from_orthonormal(Matrix::Ones(2, 1)), std::invalid_argument);
  const Subspace w = Subspace::coordinate(4, 1, 2);
  CHECK(w.dim() == 2);
  CHECK(w.ambient_dim() == 4);
  Matrix cols(4, 2);
  cols << 1, 0, 2, 0, 3, 5, 4, 0;
  const VectorSequence p = project_sequence(VectorSequence(cols), w);
  CHECK(p.ambient_dim() == 2);
  CHECK(p[0](0) == Scalar(2.0));
  CHECK(p[0](1) == Scalar(3.0));
  CHECK(p[1](1) == Scalar(5.0));
  CHECK_THROWS_AS(project_sequence(VectorSequence(Matrix::Identity(3, 3)), w), std::invalid_argument);
  CHECK(w.zero_padded(6).basis().bottomRows(2).isZero());

  testgen::Gen gen(8);
  const Subspace span = Subspace::span_of(gen.gaussian(5, 2) * gen.gaussian(2, 4));
  CHECK(span.dim() == 2);
  CHECK(testgen::max_abs(span.basis().adjoint() * span.basis() - Matrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("trend classification") {
  const std::vector<double> ns{4, 8, 16, 32, 64};
  std::vector<double> grow, decay, flat, zeros(5, 0.0);
  for (double n : ns) {
    grow.push_back(n);
    decay.push_back(1.0 / n);
    flat.push_back(3.0 + 1.0 / n);
  }
  Trend t = classify_series(ns, grow);
  CHECK(t.kind == TrendKind::Diverging);
  CHECK(*t.slope == doctest::Approx(1.0));
  CHECK(classify_series(ns, decay).kind == TrendKind::VanishingToZero);
  CHECK(classify_series(ns, flat).kind == TrendKind::Bounded);
  t = classify_series(ns, zeros);
  CHECK(t.kind == TrendKind::VanishingToZero);
  CHECK(!t.slope);
  CHECK_THROWS_AS(classify_series(ns, std::vector<double>{1.0}), std::invalid_argument);

  const auto spec = SequenceSpec::from_family(family::OnePlusEn{});
  const std::vector<Index> sweep_ns{4, 8, 16, 32, 64};
  const auto reports = truncation_sweep(spec, sweep_ns);
  CHECK(growth_classify(reports, TrendField::UpperB).kind == TrendKind::Diverging);
  CHECK(growth_classify(reports, TrendField::Ratio).kind == TrendKind::VanishingToZero);
  CHECK_THROWS_AS(growth_classify(std::span(reports).first(2), TrendField::UpperB), std::invalid_argument);
  std::vector<BoundsReport> shuffled = reports;
  std::swap(shuffled[0], shuffled[1]);
  CHECK_THROWS_AS(growth_classify(shuffled, TrendField::UpperB), std::invalid_argument);
  CHECK_THROWS_AS(truncation_sweep(spec, std::vector<Index>{8, 4, 16}), std::invalid_argument);
}

TEST_CASE("orthonormal basis sweep stays bounded") {
  const auto reports =
      truncation_sweep(SequenceSpec::from_family(family::OrthonormalBasis{}), std::vector<Index>{4, 8, 16});
  for (const BoundsReport& b : reports) {
    CHECK(b.lower_A == doctest::Approx(1.0));
    CHECK(b.upper_B == doctest::Approx(1.0));
  }
  CHECK(growth_classify(reports, TrendField::LowerA).kind == TrendKind::Bounded);
}
