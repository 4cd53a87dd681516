#include "frameforge/opspace.hpp"

#include <algorithm>
#include <cmath>

namespace frameforge {

OperatorMatrix analysis_matrix(const VectorSequence& seq) {
  return {seq.columns().adjoint(), OperatorRole::Analysis};
}

OperatorMatrix synthesis_matrix(const VectorSequence& seq) {
  return {seq.columns(), OperatorRole::Synthesis};
}

OperatorMatrix frame_operator(const VectorSequence& seq) {
  Matrix s = seq.columns() * seq.columns().adjoint();
  // Exact Hermitian symmetry; the product is only Hermitian up to rounding.
  s = (0.5 * (s + s.adjoint())).eval();
  return {std::move(s), OperatorRole::FrameOperator};
}

OperatorMatrix gram_matrix(const VectorSequence& seq) {
  return {seq.columns().adjoint() * seq.columns(), OperatorRole::Gram};
}

BoundsReport frame_bounds(const VectorSequence& seq, double svd_cutoff) {
  const RealVector sv = linalg::singular_values(analysis_matrix(seq).entries);
  BoundsReport r;
  r.count = seq.size();
  r.ambient_dim = seq.ambient_dim();
  r.trunc_index = seq.origin() ? seq.origin()->trunc_index : 0;
  r.rank = linalg::numerical_rank(sv, svd_cutoff);
  const double top = sv.size() ? sv(0) : 0.0;
  r.upper_B = top * top;
  r.tolerance = (svd_cutoff * top) * (svd_cutoff * top);
  r.complete = r.rank == r.ambient_dim;
  r.lower_A = r.complete ? sv(r.ambient_dim - 1) * sv(r.ambient_dim - 1) : 0.0;
  r.minimal = r.rank == r.count;
  r.excess = r.count - r.rank;
  return r;
}

bool is_minimal(const VectorSequence& seq, double svd_cutoff) {
  return linalg::rank(seq.columns(), svd_cutoff) == seq.size();
}

VectorSequence biorthogonal(const VectorSequence& seq, double svd_cutoff) {
  if (!is_minimal(seq, svd_cutoff)) {
    throw PreconditionError("sequence is not minimal, so it has no biorthogonal system",
                            "minimal sequence (no member in the closed span of the others)");
  }
  return VectorSequence(linalg::pinv(analysis_matrix(seq).entries, svd_cutoff), seq.origin());
}

Index excess(const VectorSequence& seq, double svd_cutoff) {
  return seq.size() - linalg::rank(seq.columns(), svd_cutoff);
}

RieszVerdict riesz_test(const VectorSequence& seq, double svd_cutoff) {
  const BoundsReport b = frame_bounds(seq, svd_cutoff);
  RieszVerdict v;
  v.lower_A = b.lower_A;
  v.upper_B = b.upper_B;
  if (b.excess > 0) {
    v.reason = "excess " + std::to_string(b.excess) + " > 0";
  } else if (!b.complete) {
    v.reason = "incomplete: rank " + std::to_string(b.rank) + " < ambient dimension " +
               std::to_string(b.ambient_dim);
  } else if (!(b.lower_A > b.tolerance)) {
    v.reason = "lower bound below tolerance";
  }
  v.riesz = v.reason.empty() && b.count == b.ambient_dim;
  return v;
}

OperatorMatrix pseudo_inverse(const OperatorMatrix& mat, double svd_cutoff) {
  return {linalg::pinv(mat.entries, svd_cutoff), OperatorRole::General};
}

// ---------------------------------------------------------------------------
// Subspace

Subspace Subspace::from_orthonormal(Matrix basis) {
  if (basis.rows() == 0) throw std::invalid_argument("subspace needs a positive ambient dimension");
  const Matrix gram = basis.adjoint() * basis;
  const Matrix id = Matrix::Identity(basis.cols(), basis.cols());
  if (basis.cols() > 0 && (gram - id).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("subspace basis columns are not orthonormal within 1e-10");
  }
  return Subspace(std::move(basis));
}

Subspace Subspace::span_of(const Matrix& spanning, double svd_cutoff) {
  return Subspace(linalg::range_basis(spanning, svd_cutoff));
}

Subspace Subspace::coordinate(Index ambient_dim, Index first, Index count) {
  if (first < 0 || count < 0 || first + count > ambient_dim) {
    throw std::invalid_argument("coordinate subspace exceeds the ambient space");
  }
  Matrix basis = Matrix::Zero(ambient_dim, count);
  for (Index k = 0; k < count; ++k) basis(first + k, k) = 1.0;
  return Subspace(std::move(basis));
}

Subspace Subspace::zero_padded(Index dim) const {
  if (dim < ambient_dim()) throw std::invalid_argument("zero_padded cannot shrink the ambient space");
  Matrix basis = Matrix::Zero(dim, this->dim());
  basis.topRows(ambient_dim()) = basis_;
  return Subspace(std::move(basis));
}

VectorSequence project_sequence(const VectorSequence& seq, const Subspace& w) {
  if (w.ambient_dim() != seq.ambient_dim()) {
    throw std::invalid_argument("subspace lives in C^" + std::to_string(w.ambient_dim()) +
                                " but the sequence in C^" + std::to_string(seq.ambient_dim()));
  }
  if (w.dim() == 0) throw std::invalid_argument("cannot express a projection onto {0} in coordinates");
  return VectorSequence(w.basis().adjoint() * seq.columns(), seq.origin());
}

std::vector<BoundsReport> truncation_sweep(const SequenceSpec& spec, std::span<const Index> ns,
                                           double svd_cutoff) {
  std::vector<BoundsReport> out;
  out.reserve(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1) throw std::invalid_argument("truncation indices must be >= 1");
    if (i > 0 && ns[i] <= ns[i - 1]) {
      throw std::invalid_argument("truncation indices must be strictly increasing");
    }
    BoundsReport r = frame_bounds(build_sequence(spec, ns[i]), svd_cutoff);
    r.trunc_index = ns[i];
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trends

double fitted_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

Trend classify_series(std::span<const double> ns, std::span<const double> values,
                      const TrendThresholds& thresholds) {
  if (ns.size() != values.size()) throw std::invalid_argument("series length mismatch");
  if (values.empty()) throw std::invalid_argument("empty series");
  if (!(values.back() > 0.0)) return {TrendKind::VanishingToZero, std::nullopt};

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 0.0 && std::isfinite(values[i])) {
      lx.push_back(std::log(ns[i]));
      ly.push_back(std::log(values[i]));
    }
  }
  if (lx.size() < 2) return {TrendKind::Bounded, std::nullopt};
  const double p = fitted_slope(lx, ly);
  if (p > thresholds.diverging) return {TrendKind::Diverging, p};
  if (p < thresholds.vanishing) return {TrendKind::VanishingToZero, p};
  return {TrendKind::Bounded, p};
}

Trend growth_classify(std::span<const BoundsReport> reports, TrendField field,
                      const TrendThresholds& thresholds) {
  if (reports.size() < 3) throw std::invalid_argument("growth_classify needs at least 3 reports");
  std::vector<double> ns, values;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i > 0 && reports[i].trunc_index <= reports[i - 1].trunc_index) {
      throw std::invalid_argument("reports must have strictly increasing truncation indices");
    }
    ns.push_back(static_cast<double>(reports[i].trunc_index));
    switch (field) {
      case TrendField::LowerA:
        values.push_back(reports[i].lower_A);
        break;
      case TrendField::UpperB:
        values.push_back(reports[i].upper_B);
        break;
      case TrendField::Ratio:
        values.push_back(reports[i].ratio());
        break;
    }
  }
  return classify_series(ns, values, thresholds);
}

std::string to_string(TrendKind kind) {
  switch (kind) {
    case TrendKind::Bounded:
      return "Bounded";
    case TrendKind::Diverging:
      return "Diverging";
    case TrendKind::VanishingToZero:
      return "VanishingToZero";
  }
  return "?";
}

std::string to_string(TrendField field) {
  switch (field) {
    case TrendField::LowerA:
      return "lower_A";
    case TrendField::UpperB:
      return "upper_B";
    case TrendField::Ratio:
      return "ratio";
  }
  return "?";
}

std::string to_string(OperatorRole role) {
  switch (role) {
    case OperatorRole::Analysis:
      return "Analysis";
    case OperatorRole::Synthesis:
      return "Synthesis";
    case OperatorRole::Gram:
      return "Gram";
    case OperatorRole::FrameOperator:
      return "FrameOperator";
    case OperatorRole::General:
      return "General";
  }
  return "?";
}

}  // namespace frameforge
