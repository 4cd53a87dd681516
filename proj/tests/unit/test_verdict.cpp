#include <doctest.h>

#include <memory>

#include "frameforge/reweight.hpp"
#include "support/testgen.hpp"

using namespace frameforge;

namespace {

const std::vector<Index> kNs{4, 8, 16, 32, 64};

RunConfig quick() {
  RunConfig c;
  c.ascent_iters = 60;
  return c;
}

SpecPtr ptr(SequenceSpec s) { return std::make_shared<const SequenceSpec>(std::move(s)); }

}  // namespace

TEST_CASE("orthonormal basis is already a frame") {
  const auto v = weighted_frame_verdict(SequenceSpec::from_family(family::OrthonormalBasis{}), kNs, quick());
  CHECK(v.status == VerdictStatus::IsFrameAlready);
  REQUIRE(v.certificate);
  CHECK(v.certificate->claim.lower == doctest::Approx(1.0));
  CHECK(v.certificate->claim.upper == doctest::Approx(1.0));
  CHECK(v.reasons.empty());
}

TEST_CASE("diagonal n is a weighted frame with weights 1/n") {
  const auto spec = SequenceSpec::from_family(family::Diagonal{ScalarRule::power(1.0)});
  const auto v = weighted_frame_verdict(spec, kNs, quick());
  CHECK(v.status == VerdictStatus::WeightedFrame);
  REQUIRE(v.certificate);
  const WeightSeq& w = v.certificate->weights;
  REQUIRE(w.size() == 64);
  for (Index n = 0; n < 64; ++n) CHECK(w[n].real() == doctest::Approx(1.0 / static_cast<double>(n + 1)));
  // checkable by frame_bounds directly
  const BoundsReport b = frame_bounds(apply_weights(build_sequence(spec, 64), w));
  CHECK(b.lower_A == doctest::Approx(1.0));
  CHECK(b.upper_B == doctest::Approx(1.0));
  CHECK(check_certificate(build_sequence(spec, 64), *v.certificate));
}

TEST_CASE("one_plus_en is obstructed") {
  const auto v = weighted_frame_verdict(SequenceSpec::from_family(family::OnePlusEn{}), kNs, quick());
  CHECK(v.status == VerdictStatus::ObstructionFound);
  CHECK(!v.certificate);
  CHECK(v.has_reason(ReasonKind::BiorthogonalIncomplete));
  CHECK(v.has_reason(ReasonKind::RatioVanishes));
  // any weights: A <= min w^2 (test e_k) and B >= sum w^2 (test e_1)
  for (std::size_t i = 0; i < kNs.size(); ++i) {
    CHECK(v.best_ratio[i] <= 1.0 / static_cast<double>(kNs[i] - 1) * (1.0 + 1e-9));
    CHECK(v.unweighted[i].upper_B >= static_cast<double>(kNs[i] - 1));
    CHECK(v.unweighted[i].lower_A <= 1.0 + 1e-12);
  }
}

TEST_CASE("declared incompleteness is a structural reason") {
  const auto v = weighted_frame_verdict(SequenceSpec::from_family(family::RepeatedVector{2}), kNs, quick());
  CHECK(v.status == VerdictStatus::ObstructionFound);
  CHECK(v.has_reason(ReasonKind::NotCompleteInLimit));
}

TEST_CASE("ratio trends alone stay inconclusive") {
  // square random triangular truncations, no limit metadata to lean on
  const auto spec = SequenceSpec::from_family(family::RandomGaussian{5, {1, 0}, {1, 0}});
  REQUIRE(!spec.limit_meta().complete_in_limit);
  REQUIRE(!spec.limit_meta().bessel_in_limit);
  const auto v = weighted_frame_verdict(spec, kNs, quick());
  CHECK(v.status == VerdictStatus::Inconclusive);
  CHECK(!v.certificate);
  for (const auto& r : v.reasons) CHECK(r.kind == ReasonKind::RatioVanishes);
}

TEST_CASE("a spanning subsequence can be lifted") {
  const auto spec = SequenceSpec::from_family(family::Interleave{
      ptr(SequenceSpec::from_family(family::OrthonormalBasis{})),
      ptr(SequenceSpec::from_family(family::RepeatedVector{1}))});
  const auto v = weighted_frame_verdict(spec, kNs, quick());
  CHECK(v.status == VerdictStatus::WeightedFrame);
  CHECK(v.method == "subsequence_lift");
  REQUIRE(v.certificate);
  CHECK(v.certificate->claim.kind == ClaimKind::FrameBounds);
  CHECK(v.certificate->claim.lower >= 1.0 - 1e-9);
  CHECK(v.certificate->claim.upper <= 2.0 + 1e-9);
  CHECK(check_certificate(build_sequence(spec, kNs.back()), *v.certificate));
}

TEST_CASE("verdict statuses are mutually exclusive") {
  const std::vector<SequenceSpec> corpus{
      SequenceSpec::from_family(family::OrthonormalBasis{}),
      SequenceSpec::from_family(family::Diagonal{ScalarRule::power(1.0)}),
      SequenceSpec::from_family(family::Diagonal{ScalarRule::power(-1.0)}),
      SequenceSpec::from_family(family::OnePlusEn{}),
      SequenceSpec::from_family(family::NTimesOnePlusEn{}),
      SequenceSpec::from_family(family::FiniteDomainExample{2}),
      SequenceSpec::from_family(family::RandomGaussian{3, {1, 0}, {2, 0}}),
      SequenceSpec::from_family(family::RepeatedVector{1}),
      SequenceSpec::from_family(family::Weighted{ptr(SequenceSpec::from_family(family::OrthonormalBasis{})),
                                                 ScalarRule::geometric(0.5)}),
  };
  for (const SequenceSpec& spec : corpus) {
    CAPTURE(spec.name());
    const auto v = weighted_frame_verdict(spec, std::vector<Index>{4, 8, 16}, quick());
    const bool certified = v.status == VerdictStatus::IsFrameAlready || v.status == VerdictStatus::WeightedFrame;
    CHECK(certified == v.certificate.has_value());
    if (certified) {
      CHECK(v.reasons.empty());
      CHECK(check_certificate(build_sequence(spec, 16), *v.certificate));
    }
    if (v.status == VerdictStatus::ObstructionFound) {
      bool structural = false;
      for (const auto& r : v.reasons) structural = structural || r.kind != ReasonKind::RatioVanishes;
      CHECK(structural);
    }
  }
}

TEST_CASE("verdict is deterministic and validates its sweep") {
  const auto spec = SequenceSpec::from_family(family::RandomGaussian{9, {1, 0}, {2, 0}});
  const auto a = weighted_frame_verdict(spec, std::vector<Index>{4, 8, 16}, quick());
  const auto b = weighted_frame_verdict(spec, std::vector<Index>{4, 8, 16}, quick());
  CHECK(a.status == b.status);
  CHECK(a.best_ratio == b.best_ratio);
  CHECK_THROWS_AS(weighted_frame_verdict(spec, std::vector<Index>{4, 8}, quick()), std::invalid_argument);
}

TEST_CASE("ascent does not lose ground") {
  testgen::Gen gen(31);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = gen.integer(1, 5);
    const Index m = gen.integer(d, 3 * d);
    Matrix cols = gen.gaussian(d, m);
    // uneven scales make unit weights a poor start
    for (Index n = 0; n < m; ++n) cols.col(n) *= std::pow(10.0, gen.uniform(-2.0, 2.0));
    const VectorSequence s(cols);
    const testgen::Bounds start = testgen::eigen_bounds(cols);
    const AscentResult r = maximize_bound_ratio(s, WeightSeq::ones(m), 80);
    CHECK(r.ratio >= start.lower / start.upper * (1.0 - 1e-9));
    for (Index n = 0; n < m; ++n) CHECK(r.weights[n].real() > 0.0);
    const testgen::Bounds got = testgen::eigen_bounds(apply_weights(s, r.weights).columns());
    CHECK(r.ratio == doctest::Approx(got.lower / got.upper).epsilon(1e-8));
    const AscentResult again = maximize_bound_ratio(s, WeightSeq::ones(m), 80);
    CHECK(again.ratio == r.ratio);
  }
}

TEST_CASE("ascent balances a diagonal sequence") {
  const VectorSequence s = build_sequence(SequenceSpec::from_family(family::Diagonal{ScalarRule::power(1.0)}), 6);
  const AscentResult r = maximize_bound_ratio(s, WeightSeq::ones(6), 500);
  CHECK(r.ratio > 0.99);
}

TEST_CASE("verdict names") {
  CHECK(to_string(VerdictStatus::ObstructionFound) == "ObstructionFound");
  CHECK(to_string(ReasonKind::BiorthogonalIncomplete) == "BiorthogonalIncomplete");
  CHECK(to_string(ClaimKind::FrameBounds) == "FrameBounds");
}
