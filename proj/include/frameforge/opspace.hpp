#pragma once

// Operators attached to a truncated sequence F = (f_n), n = 1..M, in C^D:
//
//   analysis   C_F f = (<f, f_n>)_n        M x D, row n = f_n^*
//   synthesis  D_F c = sum_n c_n f_n       D x M, D_F = C_F^*
//   frame op   S_F  = D_F C_F              D x D, Hermitian PSD
//
// Frame bounds are the extreme squared singular values of C_F. A truncation
// that does not span C^D reports lower_A = 0 with complete = false.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frameforge/linalg.hpp"
#include "frameforge/seqcore.hpp"

namespace frameforge {

enum class OperatorRole { Analysis, Synthesis, Gram, FrameOperator, General };

struct OperatorMatrix {
  Matrix entries;
  OperatorRole role = OperatorRole::General;

  Index rows() const noexcept { return entries.rows(); }
  Index cols() const noexcept { return entries.cols(); }
};

OperatorMatrix analysis_matrix(const VectorSequence& seq);
OperatorMatrix synthesis_matrix(const VectorSequence& seq);
OperatorMatrix frame_operator(const VectorSequence& seq);
/// G_{mn} = <f_n, f_m>.
OperatorMatrix gram_matrix(const VectorSequence& seq);

struct BoundsReport {
  double lower_A = 0.0;
  double upper_B = 0.0;
  bool complete = false;
  bool minimal = false;
  Index excess = 0;
  Index rank = 0;
  Index count = 0;
  Index ambient_dim = 0;
  Index trunc_index = 0;
  /// Absolute threshold below which a squared singular value is treated as
  /// zero: (svd_cutoff * sigma_max)^2.
  double tolerance = 0.0;

  /// lower_A / upper_B, 0 when upper_B is 0.
  double ratio() const { return upper_B > 0.0 ? lower_A / upper_B : 0.0; }
};

BoundsReport frame_bounds(const VectorSequence& seq, double svd_cutoff = linalg::kDefaultSvdCutoff);

/// No member lies in the span of the others, i.e. the members are linearly
/// independent.
bool is_minimal(const VectorSequence& seq, double svd_cutoff = linalg::kDefaultSvdCutoff);

/// Minimal-norm biorthogonal system: columns of pinv(C_F), so that
/// <f_n, g_m> = delta_nm and every g_m lies in span(F). Throws
/// PreconditionError for non-minimal input.
VectorSequence biorthogonal(const VectorSequence& seq, double svd_cutoff = linalg::kDefaultSvdCutoff);

/// M - rank(C_F).
Index excess(const VectorSequence& seq, double svd_cutoff = linalg::kDefaultSvdCutoff);

struct RieszVerdict {
  bool riesz = false;
  double lower_A = 0.0;
  double upper_B = 0.0;
  std::string reason;  // empty when riesz
};

RieszVerdict riesz_test(const VectorSequence& seq, double svd_cutoff = linalg::kDefaultSvdCutoff);

OperatorMatrix pseudo_inverse(const OperatorMatrix& mat, double svd_cutoff = linalg::kDefaultSvdCutoff);

/// A subspace of C^ambient_dim held through an orthonormal basis.
class Subspace {
 public:
  /// Columns must be orthonormal within 1e-10.
  static Subspace from_orthonormal(Matrix basis);
  /// Orthonormalizes the column span of `spanning`.
  static Subspace span_of(const Matrix& spanning, double svd_cutoff = linalg::kDefaultSvdCutoff);
  /// span(e_first, ..., e_{first+count-1}), 0-based first.
  static Subspace coordinate(Index ambient_dim, Index first, Index count);

  const Matrix& basis() const noexcept { return basis_; }
  Index dim() const noexcept { return basis_.cols(); }
  Index ambient_dim() const noexcept { return basis_.rows(); }

  /// The same subspace viewed inside a larger space.
  Subspace zero_padded(Index ambient_dim) const;

 private:
  explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
  Matrix basis_;
};

/// (P_W f_n) in the coordinates of W's basis; result dimension is dim W.
VectorSequence project_sequence(const VectorSequence& seq, const Subspace& w);

/// frame_bounds of every truncation in Ns (strictly increasing, >= 1).
std::vector<BoundsReport> truncation_sweep(const SequenceSpec& spec, std::span<const Index> ns,
                                           double svd_cutoff = linalg::kDefaultSvdCutoff);

// ---------------------------------------------------------------------------
// Trends across truncations

enum class TrendField { LowerA, UpperB, Ratio };
enum class TrendKind { Bounded, Diverging, VanishingToZero };

struct Trend {
  TrendKind kind = TrendKind::Bounded;
  /// Least-squares slope of log(value) against log(N). Empty when the series
  /// is identically zero or too degenerate to fit.
  std::optional<double> slope;
};

struct TrendThresholds {
  double diverging = 0.25;
  double vanishing = -0.25;
};

/// Power-law classification of a positive series indexed by ns. Zero values
/// cannot be fitted on a log scale: a series whose last value is zero is
/// VanishingToZero, otherwise zeros are dropped before fitting.
Trend classify_series(std::span<const double> ns, std::span<const double> values,
                      const TrendThresholds& thresholds = {});

/// Requires at least 3 reports with strictly increasing trunc_index.
Trend growth_classify(std::span<const BoundsReport> reports, TrendField field,
                      const TrendThresholds& thresholds = {});

/// Least-squares slope of y on x.
double fitted_slope(std::span<const double> x, std::span<const double> y);

std::string to_string(TrendKind kind);
std::string to_string(TrendField field);
std::string to_string(OperatorRole role);

}  // namespace frameforge
