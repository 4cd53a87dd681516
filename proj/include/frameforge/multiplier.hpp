#pragma once

// Frame multipliers M f = sum_n m_n <f, psi_n> phi_n at finite truncation.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frameforge/opspace.hpp"
#include "frameforge/seqcore.hpp"

namespace frameforge {

struct MultiplierSpec {
  ScalarRule symbol;
  SequenceSpec phi;
  SequenceSpec psi;

  friend bool operator==(const MultiplierSpec&, const MultiplierSpec&) = default;
};

/// Phi, Psi and the symbol at one truncation, cut to the common member count.
struct TruncatedMultiplier {
  VectorSequence phi;
  VectorSequence psi;
  std::vector<Scalar> symbol;
  Index trunc_index = 0;
};

/// Throws PreconditionError when Phi and Psi live in different dimensions or
/// an explicit symbol is shorter than the member count.
TruncatedMultiplier truncate(const MultiplierSpec& spec, Index trunc_index);

/// D_Phi diag(m) C_Psi.
Matrix assemble(const TruncatedMultiplier& t);
OperatorMatrix multiplier_matrix(const MultiplierSpec& spec, Index trunc_index);

/// sum_n m_n <f, psi_n> phi_n, one term at a time.
Vector apply_direct(const TruncatedMultiplier& t, const Vector& f);

struct InvertibilityVerdict {
  bool invertible = false;
  double condition = 0.0;  ///< sigma_max / sigma_min; infinity when singular
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

InvertibilityVerdict invertibility_check(const MultiplierSpec& spec, Index trunc_index,
                                         double svd_cutoff = linalg::kDefaultSvdCutoff);

// ---------------------------------------------------------------------------
// Unconditional convergence

enum class ConvergenceEvidence { EvidenceUnconditional, EvidenceConditional, Inconclusive };

struct GrowthTest {
  double power_slope = 0.0;  ///< slope of log y on log N over the tail window
  double log_exponent = 0.0;  ///< slope of log y on log log N over the tail window
  bool diverging = false;
};

/// Divergence test on the last max(3, ceil(n/2)) points of a series: the
/// series grows when either the power slope exceeds `slope_threshold` or the
/// log exponent exceeds `log_threshold`. All-zero tails do not grow.
GrowthTest growth_test(std::span<const double> ns, std::span<const double> values, double slope_threshold,
                       double log_threshold);

/// Statistics for one test vector f across the truncations:
///   s1  sum_n |m_n| |<f, psi_n>| ||phi_n||
///   r   largest ||sum_n eps_n m_n <f, psi_n> phi_n|| over the sign patterns
///   l   (sum_n ||m_n <f, psi_n> phi_n||^2)^(1/2)
struct TestVectorSeries {
  std::vector<double> s1;
  std::vector<double> r;
  std::vector<double> l;
  GrowthTest s1_growth;
  GrowthTest r_growth;
};

struct UnconditionalityReport {
  std::vector<Index> ns;
  std::vector<TestVectorSeries> vectors;
  ConvergenceEvidence verdict = ConvergenceEvidence::Inconclusive;
  int trials = 0;
  std::uint64_t seed = 0;
};

struct UnconditionalityOptions {
  int trials = 64;
  std::uint64_t seed = 0;
  int test_vectors = 3;
  double slope_threshold = 0.25;
  double log_threshold = 0.5;
};

/// Test vectors are drawn once in the largest truncation with coefficients
/// decaying like 2^(-k/2), normalized, and restricted to each smaller one.
/// Sign patterns are the greedy pattern (eps_n = +1 iff the running sum has a
/// nonnegative real inner product with the new term, which forces r >= l) plus
/// `trials` seeded random patterns shared by all truncations.
UnconditionalityReport unconditionality_diagnostic(const MultiplierSpec& spec, std::span<const Index> ns,
                                                   const UnconditionalityOptions& options = {});

// ---------------------------------------------------------------------------
// Weight shifting

struct ShiftedWeights {
  std::vector<Scalar> alpha;
  std::vector<Scalar> beta;
};

/// alpha_n = m_n / sqrt|m_n|, beta_n = sqrt|m_n| (both 0 when m_n = 0).
ShiftedWeights canonical_shift(std::span<const Scalar> symbol);

/// max_n |alpha_n conj(beta_n) - m_n| / max(|m_n|, min_positive).
double shift_product_residual(const ShiftedWeights& w, std::span<const Scalar> symbol);

/// Odd (1-based) positions of weights over an interleaved sequence.
ShiftedWeights deinterleave_odd(const ShiftedWeights& w);

struct WeightShiftReport {
  ShiftedWeights weights;  ///< at the largest truncation
  double product_residual = 0.0;
  std::vector<Index> ns;
  std::vector<double> alpha_phi_bound;  ///< Bessel bound of (alpha_n phi_n)
  std::vector<double> beta_psi_bound;   ///< Bessel bound of (beta_n psi_n)
  Trend alpha_phi_trend;
  Trend beta_psi_trend;
  /// Both weighted sequences keep bounded Bessel bounds across the sweep.
  bool witnesses_split = false;
};

WeightShiftReport weight_shift(const MultiplierSpec& spec, std::span<const Index> ns,
                               const TrendThresholds& thresholds = {});

// ---------------------------------------------------------------------------
// Interleaving and duality

/// With G the standard basis and f_n = (I - M) g_n: Xi = (phi_1, f_1, phi_2,
/// f_2, ...), Theta = (psi_1, g_1, psi_2, g_2, ...), m' = (m_1, 1, m_2, 1, ...),
/// so that the multiplier of (m', Xi, Theta) is the identity.
struct InterleaveConstruction {
  std::vector<Scalar> symbol;
  VectorSequence xi;
  VectorSequence theta;
  double residual = 0.0;  ///< ||M_{m', Xi, Theta} - I||_2
  Index trunc_index = 0;
};

InterleaveConstruction interleave_identity_construction(const MultiplierSpec& spec, Index trunc_index);

struct DualityReport {
  bool stmt1 = false;  ///< sum_n <f, f_n> g_n = f
  bool stmt2 = false;  ///< (||g_n|| f_n), (g_n / ||g_n||) are dual frames
  bool stmt3 = false;  ///< (||f_n|| g_n), (f_n / ||f_n||) are dual frames
  bool consistent = false;
  double residual1 = 0.0;
  double residual2 = 0.0;
  double residual3 = 0.0;
  double inf_norm_product = 0.0;
};

/// Refuses with PreconditionError unless inf_n ||f_n|| ||g_n|| > tolerance or
/// one of the sequences is minimal.
DualityReport reconstruction_duality_check(const VectorSequence& f, const VectorSequence& g,
                                           double tolerance = 1e-9,
                                           double svd_cutoff = linalg::kDefaultSvdCutoff);

std::string to_string(ConvergenceEvidence e);

}  // namespace frameforge
