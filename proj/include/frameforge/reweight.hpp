#pragma once

// Weight synthesis and weighted-frame diagnostics.
//
// Every construction returns WeightCertificates: the weights together with
// the inequality they are claimed to produce, checked against the singular
// values of the reweighted truncation before being handed back.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frameforge/config.hpp"
#include "frameforge/opspace.hpp"
#include "frameforge/seqcore.hpp"

namespace frameforge {

enum class ClaimKind { BesselBound, LowerBound, FrameBounds };

struct Claim {
  ClaimKind kind = ClaimKind::BesselBound;
  double lower = 0.0;  // A, for LowerBound and FrameBounds
  double upper = 0.0;  // B, for BesselBound and FrameBounds

  static Claim bessel(double b) { return {ClaimKind::BesselBound, 0.0, b}; }
  static Claim lower_bound(double a) { return {ClaimKind::LowerBound, a, 0.0}; }
  static Claim frame(double a, double b) { return {ClaimKind::FrameBounds, a, b}; }
};

struct WeightCertificate {
  WeightSeq weights;
  Claim claim;
  Index verified_at = 0;
  /// Relative slack between the claim and the observed bound; 0 when tight.
  double residual = 0.0;
  double observed_lower = 0.0;
  double observed_upper = 0.0;
  /// When set, a LowerBound claim only concerns vectors in this subspace.
  std::optional<Subspace> domain;
};

/// Observed bounds of (w_n f_n), optionally restricted to f in `domain`.
struct ObservedBounds {
  double lower = 0.0;
  double upper = 0.0;
};
ObservedBounds observe_bounds(const VectorSequence& seq, const WeightSeq& w,
                              const std::optional<Subspace>& domain = std::nullopt);

/// Re-checks a certificate on `seq` within relative tolerance `rel_tol`.
bool check_certificate(const VectorSequence& seq, const WeightCertificate& cert,
                       double rel_tol = 1e-9);

/// lambda_n = tau_n sqrt(B) / ||f_n|| (1 for zero vectors); (lambda_n f_n) is
/// Bessel with bound B by Cauchy-Schwarz.
WeightCertificate bessel_weights(const VectorSequence& seq, double bound, const TauWeights& tau);

/// Weighting of a weakly dual pair (D_G C_F = I).
struct DualPairReweighting {
  WeightSeq lambda;
  WeightSeq beta;
  WeightCertificate lambda_inv_f;  ///< (f_n / lambda_n), lower bound 1
  WeightCertificate lambda_g;      ///< (lambda_n g_n), Bessel bound 1
  WeightCertificate beta_inv_g;    ///< (g_n / beta_n), lower bound 1
  WeightCertificate beta_f;        ///< (beta_n f_n), Bessel bound 1
  double duality_residual_lambda = 0.0;  ///< ||D_{lambda G} C_{F/lambda} - I||
  double duality_residual_beta = 0.0;    ///< ||D_{G/beta} C_{beta F} - I||
};

DualPairReweighting dual_pair_reweight(const VectorSequence& f, const VectorSequence& g,
                                       const TauWeights& tau, double tolerance = 1e-9);

/// Weighting of a reproducing pair: T = D_G C_F invertible.
struct ReproducingPairReweighting {
  WeightSeq lambda;
  WeightSeq beta;
  Matrix t;
  double t_condition = 0.0;
  double t_inverse_norm = 0.0;
  VectorSequence h;                ///< h_n = T^{-1} g_n
  WeightCertificate lambda_inv_f;  ///< (f_n / lambda_n), lower bound A
  WeightCertificate beta_inv_g;    ///< (g_n / beta_n), lower bound A
  WeightCertificate lambda_g;      ///< (lambda_n g_n), Bessel bound ||T||^2 / A
  WeightCertificate beta_f;        ///< (beta_n f_n), Bessel bound 1 / (A ||T^{-1}||^2)
};

ReproducingPairReweighting reproducing_pair_reweight(const VectorSequence& f,
                                                     const VectorSequence& g, double a,
                                                     const TauWeights& tau,
                                                     double condition_cap = 1e8);

/// Dual obtained from the pseudo-inverse of M f = sum_n <f, g_n> f_n.
struct SurjectiveDual {
  VectorSequence dual;  ///< M^{+*} g_n
  Matrix multiplier;    ///< M = D_F C_G
  double residual = 0.0;  ///< max_k ||e_k - sum_n <e_k, dual_n> f_n||
  bool verified = false;  ///< residual <= 1e-9
};

SurjectiveDual surjective_multiplier_dual(const VectorSequence& f, const VectorSequence& g,
                                          double svd_cutoff = linalg::kDefaultSvdCutoff);

/// Lower bound on a declared domain W for the unweighted sequence.
struct FiniteDomainBound {
  WeightCertificate certificate;     ///< unit weights, LowerBound(A) on W
  std::vector<Index> riesz_witness;  ///< members whose projections form a basis of W
  double witness_lower = 0.0;        ///< sigma_min^2 of the witness alone
  double direct_lower = 0.0;         ///< same bound computed without projecting
};

FiniteDomainBound finite_domain_lower_bound(const VectorSequence& seq, const Subspace& w,
                                            double svd_cutoff = linalg::kDefaultSvdCutoff);

/// lower_A(w_large f) >= lower_A(w_small f) - 1e-10, and the pointwise
/// inequality of the analysis sums on seeded random test vectors.
bool monotone_weight_check(const VectorSequence& seq, const WeightSeq& w_small,
                           const WeightSeq& w_large, int test_vectors = 32,
                           std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Necessary conditions and obstructions

struct WeightedTruncation {
  Index trunc_index = 0;
  VectorSequence seq;
  WeightSeq weights;
};

struct NecessaryFinding {
  int which = 0;  ///< 1: sup w||f|| bounded, 2: sup w bounded, 3: inf w vanishes
  std::string detail;
  Trend trend;
};

struct NecessaryConditionsReport {
  std::vector<Index> ns;
  std::vector<double> sup_weighted_norm;
  std::vector<double> sup_weight;
  std::vector<double> inf_weight;
  std::vector<double> inf_norm;
  std::vector<double> upper_B;
  /// Upper bound of the weighted truncations stays bounded, i.e. the
  /// hypothesis of the conditions is observed.
  bool bessel_observed = false;
  std::vector<NecessaryFinding> findings;  ///< violated conditions only
};

NecessaryConditionsReport necessary_conditions_check(std::span<const WeightedTruncation> sweep,
                                                     const LimitMeta& meta,
                                                     const TrendThresholds& thresholds = {});

/// Rank defect of the minimal-norm biorthogonal system of one truncation.
struct BiorthogonalDefect {
  Index defect = 0;
  Matrix defect_basis;  ///< orthonormal basis of span(biorthogonal)^perp
  VectorSequence biorthogonal;
};

BiorthogonalDefect biorthogonal_defect(const VectorSequence& seq,
                                       double svd_cutoff = linalg::kDefaultSvdCutoff);

/// Sweep-level scan for a persistent direction that the normalized
/// biorthogonal systems fail to capture.
///
/// The direction is the coordinate vector e_k with the largest component in
/// the defect space of the first truncation (smallest k on ties). At each
/// truncation its residual is 1 - sum_m |<e_k, g_m / ||g_m||>|^2. The scan
/// fires when the family is declared complete in the limit, the defect is
/// positive at every truncation and the residual exceeds `threshold` at every
/// truncation.
struct BiorthogonalScan {
  std::vector<Index> ns;
  std::vector<Index> defects;
  std::vector<double> residuals;
  std::optional<Index> direction;  ///< 0-based coordinate index
  double threshold = 0.5;
  bool fired = false;
  std::string note;
};

BiorthogonalScan biorthogonal_obstruction(std::span<const VectorSequence> truncations,
                                          const LimitMeta& meta, double threshold = 0.5,
                                          double svd_cutoff = linalg::kDefaultSvdCutoff);

// ---------------------------------------------------------------------------
// Sufficient conditions and characterizations

/// Extends frame weights on a subsequence to the whole sequence: the
/// complement gets Bessel weights with B = 1 and default tau. Claims
/// FrameBounds(A_sub, B_sub + 1).
WeightCertificate subsequence_lift(const VectorSequence& seq, std::span<const Index> subset,
                                   const WeightSeq& subset_weights,
                                   double svd_cutoff = linalg::kDefaultSvdCutoff);

/// Indices (ascending) of a proper subsequence whose weighted members form a
/// Riesz basis. Greedy: repeatedly drop the member whose removal keeps the
/// rank and leaves the largest lower bound, smallest index on ties.
std::optional<std::vector<Index>> excess_characterization(
    const VectorSequence& seq, const WeightSeq& w, double svd_cutoff = linalg::kDefaultSvdCutoff);

struct RangeCharacterization {
  bool weighted_frame = false;          ///< SVD of diag(w) C_F
  bool analysis_bounded_below = false;  ///< full-pivot LU rank of diag(w) C_F
  bool synthesis_onto = false;          ///< column-pivot QR rank of D_F diag(w)
  bool consistent = false;
};

RangeCharacterization range_characterization_check(const VectorSequence& seq, const WeightSeq& w,
                                                   double svd_cutoff = linalg::kDefaultSvdCutoff);

/// Log-weight ascent on sigma_min^2 / sigma_max^2 of the weighted analysis
/// operator. Zero members keep weight 1.
struct AscentResult {
  WeightSeq weights;
  double ratio = 0.0;
  int iterations = 0;
};

AscentResult maximize_bound_ratio(const VectorSequence& seq, const WeightSeq& start, int max_iters);

// ---------------------------------------------------------------------------
// Verdict

enum class VerdictStatus { IsFrameAlready, WeightedFrame, ObstructionFound, Inconclusive };
enum class ReasonKind { NotCompleteInLimit, BiorthogonalIncomplete, NecessaryConditionViolated, RatioVanishes };

struct ObstructionReason {
  ReasonKind kind;
  int which = 0;  ///< condition number for NecessaryConditionViolated
  std::string detail;
};

/// One weight rule tried across the sweep.
struct CandidateAttempt {
  std::string method;
  bool success = false;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> ratio;
  Trend lower_trend;
  Trend upper_trend;
  Trend ratio_trend;
  std::string note;
};

struct WeightedFrameVerdict {
  VerdictStatus status = VerdictStatus::Inconclusive;
  std::optional<WeightCertificate> certificate;
  std::string method;
  std::vector<ObstructionReason> reasons;
  std::vector<Index> ns;
  std::vector<BoundsReport> unweighted;
  std::vector<CandidateAttempt> attempts;
  std::optional<BiorthogonalScan> biorthogonal_scan;
  std::vector<double> biorthogonal_inf_norm;
  std::vector<double> best_ratio;
  Trend best_ratio_trend;

  bool has_reason(ReasonKind kind) const;
};

WeightedFrameVerdict weighted_frame_verdict(const SequenceSpec& spec, std::span<const Index> ns,
                                            const RunConfig& config);

std::string to_string(ClaimKind kind);
std::string to_string(VerdictStatus status);
std::string to_string(ReasonKind kind);

}  // namespace frameforge
