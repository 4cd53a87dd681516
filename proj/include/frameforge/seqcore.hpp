#pragma once

// Sequences, symbolic families, truncation and weights.
//
// Every infinite sequence handled by the toolkit is described by a
// SequenceSpec and rendered at truncation index N as a VectorSequence: the
// first M(N) members of the family inside C^D(N), where D(N) is the smallest
// dimension containing them. Truncations of a family are prefix compatible:
// the members at N-1 are the first members at N after zero padding.

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "frameforge/errors.hpp"

namespace frameforge {

using Scalar = std::complex<double>;
using Index = Eigen::Index;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Where a truncated sequence came from.
struct Origin {
  std::string family;
  Index trunc_index = 0;

  friend bool operator==(const Origin&, const Origin&) = default;
};

/// A non-empty finite list of vectors in C^ambient_dim, stored as the columns
/// of a dense matrix.
class VectorSequence {
 public:
  explicit VectorSequence(Matrix columns, std::optional<Origin> origin = std::nullopt);

  static VectorSequence from_vectors(std::span<const Vector> vectors);

  Index size() const noexcept { return columns_.cols(); }
  Index ambient_dim() const noexcept { return columns_.rows(); }

  auto operator[](Index n) const { return columns_.col(n); }
  const Matrix& columns() const noexcept { return columns_; }
  const std::optional<Origin>& origin() const noexcept { return origin_; }

  RealVector norms() const;

  /// Members at `indices`, in the given order.
  VectorSequence subsequence(std::span<const Index> indices) const;
  /// Same members embedded in a larger ambient space by appending zeros.
  VectorSequence zero_padded(Index ambient_dim) const;
  /// op * f_n for every member; op must have ambient_dim() columns.
  VectorSequence transformed(const Matrix& op) const;
  /// c_n * f_n for every member.
  VectorSequence scaled(std::span<const Scalar> factors) const;

 private:
  Matrix columns_;
  std::optional<Origin> origin_;
};

/// Affine count rule a*N + b used for dimensions and vector counts.
struct LinearRule {
  Index scale = 1;
  Index offset = 0;

  Index at(Index n) const { return scale * n + offset; }
  friend bool operator==(const LinearRule&, const LinearRule&) = default;
};

/// A deterministic scalar sequence indexed from n = 1. Used for diagonal
/// coefficients, weight rules and multiplier symbols.
class ScalarRule {
 public:
  enum class Kind { Constant, Power, OneOverN, Geometric, Explicit, RandomBounded };

  static ScalarRule constant(Scalar value);
  /// scale * n^exponent
  static ScalarRule power(double exponent, double scale = 1.0);
  static ScalarRule one_over_n();
  /// scale * ratio^(n-1)
  static ScalarRule geometric(double ratio, double scale = 1.0);
  static ScalarRule explicit_values(std::vector<Scalar> values);
  /// Modulus uniform in [0, max_modulus], phase uniform; value at n depends
  /// only on (seed, n).
  static ScalarRule random_bounded(std::uint64_t seed, double max_modulus = 1.0);

  Scalar at(Index n) const;
  std::vector<Scalar> first(Index count) const;

  Kind kind() const noexcept { return kind_; }
  Scalar value() const noexcept { return value_; }
  double exponent() const noexcept { return exponent_; }
  double scale() const noexcept { return scale_; }
  double ratio() const noexcept { return ratio_; }
  double max_modulus() const noexcept { return max_modulus_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<Scalar>& values() const noexcept { return values_; }

  /// Length for explicit rules, unbounded otherwise.
  std::optional<Index> length() const;
  /// Whether sup_n |rule(n)| is finite.
  bool bounded() const;

  friend bool operator==(const ScalarRule&, const ScalarRule&) = default;

 private:
  explicit ScalarRule(Kind kind) : kind_(kind) {}

  Kind kind_;
  Scalar value_{1.0, 0.0};
  double exponent_ = 0.0;
  double scale_ = 1.0;
  double ratio_ = 1.0;
  double max_modulus_ = 1.0;
  std::uint64_t seed_ = 0;
  std::vector<Scalar> values_;
};

class SequenceSpec;
using SpecPtr = std::shared_ptr<const SequenceSpec>;

namespace family {

/// (e_1, ..., e_N) in C^N.
struct OrthonormalBasis {
  friend bool operator==(const OrthonormalBasis&, const OrthonormalBasis&) = default;
};
/// f_n = c(n) e_n.
struct Diagonal {
  ScalarRule c;
  friend bool operator==(const Diagonal&, const Diagonal&) = default;
};
/// f_n = e_1 + e_n for n >= 2; N-1 members in C^N.
struct OnePlusEn {
  friend bool operator==(const OnePlusEn&, const OnePlusEn&) = default;
};
/// f_n = n (e_1 + e_n) for n >= 2; N-1 members in C^N.
struct NTimesOnePlusEn {
  friend bool operator==(const NTimesOnePlusEn&, const NTimesOnePlusEn&) = default;
};
/// e_1, ..., e_d followed by m e_{d+k} for the pairs (k, m) enumerated along
/// anti-diagonals: (1,1), (1,2), (2,1), (1,3), (2,2), (3,1), ...
/// Truncation N keeps the first N pairs. The analysis operator of the
/// infinite sequence has domain span(e_1, ..., e_d).
struct FiniteDomainExample {
  Index d = 1;
  friend bool operator==(const FiniteDomainExample&, const FiniteDomainExample&) = default;
};
/// Standard complex Gaussian entries, D(N) = dim.at(N), M(N) = count.at(N).
struct RandomGaussian {
  std::uint64_t seed = 0;
  LinearRule dim{1, 0};
  LinearRule count{2, 0};
  friend bool operator==(const RandomGaussian&, const RandomGaussian&) = default;
};
/// f_n = e_k for every n; N members in C^k.
struct RepeatedVector {
  Index k = 1;
  friend bool operator==(const RepeatedVector&, const RepeatedVector&) = default;
};
/// (a_1, b_1, a_2, b_2, ...); the longer tail is appended once the shorter
/// sequence runs out.
struct Interleave {
  SpecPtr first;
  SpecPtr second;
};
/// w(n) f_n.
struct Weighted {
  SpecPtr base;
  ScalarRule weights;
};

bool operator==(const Interleave& a, const Interleave& b);
bool operator==(const Weighted& a, const Weighted& b);

}  // namespace family

using Family = std::variant<family::OrthonormalBasis, family::Diagonal, family::OnePlusEn,
                            family::NTimesOnePlusEn, family::FiniteDomainExample,
                            family::RandomGaussian, family::RepeatedVector, family::Interleave,
                            family::Weighted>;

/// Declared properties of the infinite sequence. Never inferred from a
/// truncation.
struct LimitMeta {
  std::optional<bool> complete_in_limit;
  std::optional<bool> bessel_in_limit;

  friend bool operator==(const LimitMeta&, const LimitMeta&) = default;
};

struct Shape {
  Index ambient_dim = 0;
  Index count = 0;
};

class SequenceSpec {
 public:
  /// Columns are the members.
  static SequenceSpec explicit_vectors(Matrix columns, LimitMeta meta = {});
  static SequenceSpec from_family(Family family, LimitMeta meta = {});

  bool is_explicit() const noexcept { return std::holds_alternative<Matrix>(kind_); }
  const Matrix& explicit_columns() const { return std::get<Matrix>(kind_); }
  const Family& family() const { return std::get<Family>(kind_); }

  /// Stable lower-case identifier ("explicit", "one_plus_en", ...).
  std::string name() const;

  /// (D(N), M(N)) without materializing the vectors.
  Shape shape(Index trunc_index) const;

  /// Metadata as declared by the JSON input.
  const LimitMeta& declared_meta() const noexcept { return meta_; }
  /// Declared metadata, falling back to what the family is known to satisfy.
  LimitMeta limit_meta() const;

  friend bool operator==(const SequenceSpec& a, const SequenceSpec& b);

 private:
  SequenceSpec(std::variant<Matrix, Family> kind, LimitMeta meta)
      : kind_(std::move(kind)), meta_(meta) {}

  std::variant<Matrix, Family> kind_;
  LimitMeta meta_;
};

/// Materializes the truncation N of a spec. Explicit specs ignore N.
VectorSequence build_sequence(const SequenceSpec& spec, Index trunc_index);

/// Pairs (k, m) of the anti-diagonal enumeration, 1-based, first `count`.
std::vector<std::pair<Index, Index>> enumerate_pairs(Index count);

// ---------------------------------------------------------------------------
// Weights

enum class Positivity { StrictlyPositive, ComplexNonzero, NonnegativeAllowed };

class WeightSeq {
 public:
  static WeightSeq positive(std::vector<double> values);
  static WeightSeq complex_nonzero(std::vector<Scalar> values);
  static WeightSeq nonnegative(std::vector<double> values);
  static WeightSeq ones(Index count);

  Index size() const noexcept { return static_cast<Index>(values_.size()); }
  Scalar operator[](Index n) const { return values_[static_cast<std::size_t>(n)]; }
  const std::vector<Scalar>& values() const noexcept { return values_; }
  Positivity positivity() const noexcept { return positivity_; }

  /// Real parts; meaningful for the real-valued positivity classes.
  std::vector<double> real_values() const;

 private:
  WeightSeq(std::vector<Scalar> values, Positivity p) : values_(std::move(values)), positivity_(p) {}

  std::vector<Scalar> values_;
  Positivity positivity_;
};

/// Strictly positive reals with sum of squares equal to one.
class TauWeights {
 public:
  const std::vector<double>& values() const noexcept { return values_; }
  Index size() const noexcept { return static_cast<Index>(values_.size()); }
  double operator[](Index n) const { return values_[static_cast<std::size_t>(n)]; }
  bool normalized() const noexcept { return normalized_; }

 private:
  friend TauWeights normalize_tau(std::span<const double> raw);
  TauWeights(std::vector<double> values, bool normalized)
      : values_(std::move(values)), normalized_(normalized) {}

  std::vector<double> values_;
  bool normalized_;
};

/// Rescales positive values so their squares sum to one.
TauWeights normalize_tau(std::span<const double> raw);

/// tau_n proportional to 2^(-n/2), n = 1..length, normalized.
TauWeights default_tau(Index length);

/// Longest sequence default_tau accepts; beyond it 2^(-n/2) underflows.
inline constexpr Index kMaxGeometricTauLength = 2000;

/// (w_n f_n).
VectorSequence apply_weights(const VectorSequence& seq, const WeightSeq& w);

}  // namespace frameforge
