#include "frameforge/seqcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "frameforge/random.hpp"

namespace frameforge {

// ---------------------------------------------------------------------------
// VectorSequence

VectorSequence::VectorSequence(Matrix columns, std::optional<Origin> origin)
    : columns_(std::move(columns)), origin_(std::move(origin)) {
  if (columns_.cols() == 0 || columns_.rows() == 0) {
    throw std::invalid_argument("VectorSequence needs at least one vector of positive dimension");
  }
}

VectorSequence VectorSequence::from_vectors(std::span<const Vector> vectors) {
  if (vectors.empty()) throw std::invalid_argument("VectorSequence needs at least one vector");
  const Index dim = vectors.front().size();
  Matrix cols(dim, static_cast<Index>(vectors.size()));
  for (std::size_t n = 0; n < vectors.size(); ++n) {
    if (vectors[n].size() != dim) {
      throw std::invalid_argument("all vectors of a sequence must share the ambient dimension");
    }
    cols.col(static_cast<Index>(n)) = vectors[n];
  }
  return VectorSequence(std::move(cols));
}

RealVector VectorSequence::norms() const { return columns_.colwise().norm().transpose(); }

VectorSequence VectorSequence::subsequence(std::span<const Index> indices) const {
  Matrix cols(ambient_dim(), static_cast<Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const Index n = indices[k];
    if (n < 0 || n >= size()) throw std::out_of_range("subsequence index out of range");
    cols.col(static_cast<Index>(k)) = columns_.col(n);
  }
  return VectorSequence(std::move(cols), origin_);
}

VectorSequence VectorSequence::zero_padded(Index dim) const {
  if (dim < ambient_dim()) throw std::invalid_argument("zero_padded cannot shrink the ambient space");
  Matrix cols = Matrix::Zero(dim, size());
  cols.topRows(ambient_dim()) = columns_;
  return VectorSequence(std::move(cols), origin_);
}

VectorSequence VectorSequence::transformed(const Matrix& op) const {
  if (op.cols() != ambient_dim()) throw std::invalid_argument("operator does not act on this space");
  return VectorSequence(op * columns_, origin_);
}

VectorSequence VectorSequence::scaled(std::span<const Scalar> factors) const {
  if (static_cast<Index>(factors.size()) != size()) {
    throw PreconditionError("expected " + std::to_string(size()) + " factors, got " +
                                std::to_string(factors.size()),
                            "one weight per sequence member");
  }
  Matrix cols = columns_;
  for (Index n = 0; n < size(); ++n) cols.col(n) *= factors[static_cast<std::size_t>(n)];
  return VectorSequence(std::move(cols), origin_);
}

// ---------------------------------------------------------------------------
// ScalarRule

ScalarRule ScalarRule::constant(Scalar value) {
  ScalarRule r(Kind::Constant);
  r.value_ = value;
  return r;
}

ScalarRule ScalarRule::power(double exponent, double scale) {
  ScalarRule r(Kind::Power);
  r.exponent_ = exponent;
  r.scale_ = scale;
  return r;
}

ScalarRule ScalarRule::one_over_n() {
  ScalarRule r(Kind::OneOverN);
  r.exponent_ = -1.0;
  return r;
}

ScalarRule ScalarRule::geometric(double ratio, double scale) {
  if (!(ratio > 0.0)) throw SpecError("geometric rule needs a positive ratio");
  ScalarRule r(Kind::Geometric);
  r.ratio_ = ratio;
  r.scale_ = scale;
  return r;
}

ScalarRule ScalarRule::explicit_values(std::vector<Scalar> values) {
  if (values.empty()) throw SpecError("explicit rule needs at least one value");
  ScalarRule r(Kind::Explicit);
  r.values_ = std::move(values);
  return r;
}

ScalarRule ScalarRule::random_bounded(std::uint64_t seed, double max_modulus) {
  if (!(max_modulus >= 0.0) || !std::isfinite(max_modulus)) {
    throw SpecError("random_bounded rule needs a finite non-negative max_modulus");
  }
  ScalarRule r(Kind::RandomBounded);
  r.seed_ = seed;
  r.max_modulus_ = max_modulus;
  return r;
}

Scalar ScalarRule::at(Index n) const {
  if (n < 1) throw std::out_of_range("scalar rules are indexed from n = 1");
  switch (kind_) {
    case Kind::Constant:
      return value_;
    case Kind::Power:
      return scale_ * std::pow(static_cast<double>(n), exponent_);
    case Kind::OneOverN:
      return 1.0 / static_cast<double>(n);
    case Kind::Geometric:
      return scale_ * std::pow(ratio_, static_cast<double>(n - 1));
    case Kind::Explicit:
      if (n > static_cast<Index>(values_.size())) {
        throw SpecError("explicit rule has " + std::to_string(values_.size()) +
                        " values, index " + std::to_string(n) + " requested");
      }
      return values_[static_cast<std::size_t>(n - 1)];
    case Kind::RandomBounded: {
      const auto h = rng::derive(seed_, {static_cast<std::uint64_t>(n)});
      const double modulus = max_modulus_ * rng::unit_interval(h);
      const double phase = 2.0 * M_PI * rng::unit_interval(rng::splitmix64(h));
      return std::polar(modulus, phase);
    }
  }
  return {};
}

std::vector<Scalar> ScalarRule::first(Index count) const {
  std::vector<Scalar> out;
  out.reserve(static_cast<std::size_t>(std::max<Index>(count, 0)));
  for (Index n = 1; n <= count; ++n) out.push_back(at(n));
  return out;
}

std::optional<Index> ScalarRule::length() const {
  if (kind_ == Kind::Explicit) return static_cast<Index>(values_.size());
  return std::nullopt;
}

bool ScalarRule::bounded() const {
  switch (kind_) {
    case Kind::Power:
      return exponent_ <= 0.0 || scale_ == 0.0;
    case Kind::Geometric:
      return ratio_ <= 1.0 || scale_ == 0.0;
    default:
      return true;
  }
}

// ---------------------------------------------------------------------------
// Families

namespace family {

bool operator==(const Interleave& a, const Interleave& b) {
  return a.first && b.first && a.second && b.second && *a.first == *b.first &&
         *a.second == *b.second;
}

bool operator==(const Weighted& a, const Weighted& b) {
  return a.base && b.base && *a.base == *b.base && a.weights == b.weights;
}

}  // namespace family

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate_family(const Family& f) {
  std::visit(overloaded{
                 [](const family::FiniteDomainExample& x) {
                   if (x.d < 1) throw SpecError("finite_domain_example needs d >= 1");
                 },
                 [](const family::RepeatedVector& x) {
                   if (x.k < 1) throw SpecError("repeated_vector needs k >= 1");
                 },
                 [](const family::RandomGaussian& x) {
                   if (x.dim.scale < 0 || x.count.scale < 0) {
                     throw SpecError("random_gaussian rules must be nondecreasing in N");
                   }
                   if (x.dim.at(1) < 1 || x.count.at(1) < 1) {
                     throw SpecError("random_gaussian needs positive dimension and count at N = 1");
                   }
                 },
                 [](const family::Interleave& x) {
                   if (!x.first || !x.second) throw SpecError("interleave needs two sequences");
                 },
                 [](const family::Weighted& x) {
                   if (!x.base) throw SpecError("weighted needs a base sequence");
                 },
                 [](const auto&) {},
             },
             f);
}

std::string family_name(const Family& f) {
  return std::visit(overloaded{
                        [](const family::OrthonormalBasis&) { return std::string("orthonormal_basis"); },
                        [](const family::Diagonal&) { return std::string("diagonal"); },
                        [](const family::OnePlusEn&) { return std::string("one_plus_en"); },
                        [](const family::NTimesOnePlusEn&) { return std::string("n_times_one_plus_en"); },
                        [](const family::FiniteDomainExample&) {
                          return std::string("finite_domain_example");
                        },
                        [](const family::RandomGaussian&) { return std::string("random_gaussian"); },
                        [](const family::RepeatedVector&) { return std::string("repeated_vector"); },
                        [](const family::Interleave&) { return std::string("interleave"); },
                        [](const family::Weighted&) { return std::string("weighted"); },
                    },
                    f);
}

Index max_pair_k(Index count) {
  Index best = 0;
  for (const auto& [k, m] : enumerate_pairs(count)) best = std::max(best, k);
  return best;
}

void require_trunc(Index n, Index minimum, const std::string& name) {
  if (n < minimum) {
    throw SpecError(name + " needs truncation index >= " + std::to_string(minimum) + ", got " +
                    std::to_string(n));
  }
}

}  // namespace

std::vector<std::pair<Index, Index>> enumerate_pairs(Index count) {
  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(std::max<Index>(count, 0)));
  for (Index s = 2; static_cast<Index>(pairs.size()) < count; ++s) {
    for (Index k = 1; k < s && static_cast<Index>(pairs.size()) < count; ++k) {
      pairs.emplace_back(k, s - k);
    }
  }
  return pairs;
}

SequenceSpec SequenceSpec::explicit_vectors(Matrix columns, LimitMeta meta) {
  if (columns.cols() == 0 || columns.rows() == 0) {
    throw SpecError("explicit sequence needs at least one vector of positive dimension");
  }
  return SequenceSpec(std::move(columns), meta);
}

SequenceSpec SequenceSpec::from_family(Family f, LimitMeta meta) {
  validate_family(f);
  return SequenceSpec(std::move(f), meta);
}

std::string SequenceSpec::name() const {
  if (is_explicit()) return "explicit";
  return family_name(family());
}

bool operator==(const SequenceSpec& a, const SequenceSpec& b) {
  if (a.meta_ != b.meta_ || a.is_explicit() != b.is_explicit()) return false;
  if (a.is_explicit()) {
    const auto& x = a.explicit_columns();
    const auto& y = b.explicit_columns();
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  }
  return a.family() == b.family();
}

Shape SequenceSpec::shape(Index n) const {
  if (n < 1) throw SpecError("truncation index must be >= 1");
  if (is_explicit()) {
    const auto& cols = explicit_columns();
    return {cols.rows(), cols.cols()};
  }
  return std::visit(
      overloaded{
          [&](const family::OrthonormalBasis&) { return Shape{n, n}; },
          [&](const family::Diagonal&) { return Shape{n, n}; },
          [&](const family::OnePlusEn&) {
            require_trunc(n, 2, "one_plus_en");
            return Shape{n, n - 1};
          },
          [&](const family::NTimesOnePlusEn&) {
            require_trunc(n, 2, "n_times_one_plus_en");
            return Shape{n, n - 1};
          },
          [&](const family::FiniteDomainExample& f) {
            return Shape{f.d + max_pair_k(n), f.d + n};
          },
          [&](const family::RandomGaussian& f) {
            const Index d = f.dim.at(n);
            const Index m = f.count.at(n);
            if (d < 1 || m < 1) throw SpecError("random_gaussian rules give an empty truncation");
            return Shape{d, m};
          },
          [&](const family::RepeatedVector& f) { return Shape{f.k, n}; },
          [&](const family::Interleave& f) {
            const Shape a = f.first->shape(n);
            const Shape b = f.second->shape(n);
            return Shape{std::max(a.ambient_dim, b.ambient_dim), a.count + b.count};
          },
          [&](const family::Weighted& f) { return f.base->shape(n); },
      },
      family());
}

LimitMeta SequenceSpec::limit_meta() const {
  LimitMeta known;
  if (!is_explicit()) {
    known = std::visit(
        overloaded{
            [](const family::OrthonormalBasis&) { return LimitMeta{true, true}; },
            [](const family::Diagonal& f) { return LimitMeta{true, f.c.bounded()}; },
            [](const family::OnePlusEn&) { return LimitMeta{true, false}; },
            [](const family::NTimesOnePlusEn&) { return LimitMeta{true, false}; },
            [](const family::FiniteDomainExample&) { return LimitMeta{true, false}; },
            [](const family::RandomGaussian&) { return LimitMeta{}; },
            [](const family::RepeatedVector&) { return LimitMeta{false, false}; },
            [](const family::Interleave& f) {
              const LimitMeta a = f.first->limit_meta();
              const LimitMeta b = f.second->limit_meta();
              LimitMeta out;
              // Two incomplete halves may still span together, so only a
              // complete half decides.
              if (a.complete_in_limit == true || b.complete_in_limit == true) {
                out.complete_in_limit = true;
              }
              if (a.bessel_in_limit == false || b.bessel_in_limit == false) {
                out.bessel_in_limit = false;
              } else if (a.bessel_in_limit == true && b.bessel_in_limit == true) {
                out.bessel_in_limit = true;
              }
              return out;
            },
            [](const family::Weighted& f) {
              const LimitMeta base = f.base->limit_meta();
              LimitMeta out;
              out.complete_in_limit = base.complete_in_limit;
              if (base.bessel_in_limit == true && f.weights.bounded()) out.bessel_in_limit = true;
              return out;
            },
        },
        family());
  }
  if (meta_.complete_in_limit) known.complete_in_limit = meta_.complete_in_limit;
  if (meta_.bessel_in_limit) known.bessel_in_limit = meta_.bessel_in_limit;
  return known;
}

VectorSequence build_sequence(const SequenceSpec& spec, Index n) {
  const Shape shape = spec.shape(n);
  const Origin origin{spec.name(), n};
  if (spec.is_explicit()) return VectorSequence(spec.explicit_columns(), origin);

  Matrix cols = Matrix::Zero(shape.ambient_dim, shape.count);
  std::visit(
      overloaded{
          [&](const family::OrthonormalBasis&) { cols.setIdentity(); },
          [&](const family::Diagonal& f) {
            for (Index k = 0; k < n; ++k) cols(k, k) = f.c.at(k + 1);
          },
          [&](const family::OnePlusEn&) {
            for (Index j = 0; j < shape.count; ++j) {
              cols(0, j) = 1.0;
              cols(j + 1, j) = 1.0;
            }
          },
          [&](const family::NTimesOnePlusEn&) {
            for (Index j = 0; j < shape.count; ++j) {
              const double idx = static_cast<double>(j + 2);
              cols(0, j) = idx;
              cols(j + 1, j) = idx;
            }
          },
          [&](const family::FiniteDomainExample& f) {
            for (Index k = 0; k < f.d; ++k) cols(k, k) = 1.0;
            Index j = f.d;
            for (const auto& [k, m] : enumerate_pairs(n)) {
              cols(f.d + k - 1, j++) = static_cast<double>(m);
            }
          },
          [&](const family::RandomGaussian& f) {
            // column j lives in the rows that existed when it first appeared, so
            // later truncations only zero-pad it
            Index born = 1;
            for (Index j = 0; j < shape.count; ++j) {
              while (f.count.at(born) <= j) ++born;
              const Index rows = std::min(f.dim.at(born), shape.ambient_dim);
              rng::Gaussian g(rng::derive(f.seed, {static_cast<std::uint64_t>(j)}));
              for (Index i = 0; i < rows; ++i) cols(i, j) = g.complex_next();
            }
          },
          [&](const family::RepeatedVector& f) { cols.row(f.k - 1).setOnes(); },
          [&](const family::Interleave& f) {
            const VectorSequence a = build_sequence(*f.first, n);
            const VectorSequence b = build_sequence(*f.second, n);
            Index j = 0;
            const Index common = std::min(a.size(), b.size());
            for (Index k = 0; k < common; ++k) {
              cols.col(j++).head(a.ambient_dim()) = a[k];
              cols.col(j++).head(b.ambient_dim()) = b[k];
            }
            for (Index k = common; k < a.size(); ++k) cols.col(j++).head(a.ambient_dim()) = a[k];
            for (Index k = common; k < b.size(); ++k) cols.col(j++).head(b.ambient_dim()) = b[k];
          },
          [&](const family::Weighted& f) {
            cols = build_sequence(*f.base, n).columns();
            for (Index j = 0; j < shape.count; ++j) cols.col(j) *= f.weights.at(j + 1);
          },
      },
      spec.family());
  return VectorSequence(std::move(cols), origin);
}

// ---------------------------------------------------------------------------
// Weights

WeightSeq WeightSeq::positive(std::vector<double> values) {
  std::vector<Scalar> v;
  v.reserve(values.size());
  for (double x : values) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw PreconditionError("weight " + std::to_string(x) + " is not strictly positive",
                              "weights lie in (0, +inf)");
    }
    v.emplace_back(x, 0.0);
  }
  return WeightSeq(std::move(v), Positivity::StrictlyPositive);
}

WeightSeq WeightSeq::complex_nonzero(std::vector<Scalar> values) {
  for (const Scalar& x : values) {
    if (!(std::abs(x) > 0.0) || !std::isfinite(std::abs(x))) {
      throw PreconditionError("complex weight has zero or non-finite modulus",
                              "complex weights are nonzero");
    }
  }
  return WeightSeq(std::move(values), Positivity::ComplexNonzero);
}

WeightSeq WeightSeq::nonnegative(std::vector<double> values) {
  std::vector<Scalar> v;
  v.reserve(values.size());
  for (double x : values) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw PreconditionError("weight " + std::to_string(x) + " is negative or not finite",
                              "weights lie in [0, +inf)");
    }
    v.emplace_back(x, 0.0);
  }
  return WeightSeq(std::move(v), Positivity::NonnegativeAllowed);
}

WeightSeq WeightSeq::ones(Index count) {
  return positive(std::vector<double>(static_cast<std::size_t>(count), 1.0));
}

std::vector<double> WeightSeq::real_values() const {
  std::vector<double> out;
  out.reserve(values_.size());
  for (const Scalar& x : values_) out.push_back(x.real());
  return out;
}

TauWeights normalize_tau(std::span<const double> raw) {
  if (raw.empty()) throw std::invalid_argument("normalize_tau needs a non-empty list");
  double peak = 0.0;
  for (double x : raw) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("normalize_tau needs strictly positive finite values");
    }
    peak = std::max(peak, x);
  }
  double sum = 0.0;
  for (double x : raw) sum += (x / peak) * (x / peak);
  const double norm = peak * std::sqrt(sum);
  std::vector<double> values;
  values.reserve(raw.size());
  for (double x : raw) {
    const double t = x / norm;
    if (!(t > 0.0)) throw std::invalid_argument("normalize_tau underflowed to zero");
    values.push_back(t);
  }
  return TauWeights(std::move(values), true);
}

TauWeights default_tau(Index length) {
  if (length < 1) throw std::invalid_argument("default_tau needs length >= 1");
  if (length > kMaxGeometricTauLength) {
    throw std::invalid_argument("default_tau supports at most " +
                                std::to_string(kMaxGeometricTauLength) + " members");
  }
  std::vector<double> raw(static_cast<std::size_t>(length));
  for (Index n = 1; n <= length; ++n) raw[static_cast<std::size_t>(n - 1)] = std::exp2(-0.5 * static_cast<double>(n));
  return normalize_tau(raw);
}

VectorSequence apply_weights(const VectorSequence& seq, const WeightSeq& w) {
  if (w.size() != seq.size()) {
    throw PreconditionError("weight sequence has length " + std::to_string(w.size()) +
                                " but the sequence has " + std::to_string(seq.size()) + " members",
                            "one weight per sequence member");
  }
  return seq.scaled(w.values());
}

}  // namespace frameforge
