#include "frameforge/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/SVD>

namespace frameforge::linalg {

namespace {

// Below this size two-sided Jacobi is both fast and the more accurate choice.
constexpr Index kJacobiLimit = 160;

Matrix rows_by_decreasing_norm(const Matrix& m) {
  const RealVector norms = m.rowwise().norm();
  std::vector<Index> order(static_cast<std::size_t>(m.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return norms(a) > norms(b); });
  Matrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) out.row(i) = m.row(order[static_cast<std::size_t>(i)]);
  return out;
}

struct Decomposition {
  Matrix u;
  RealVector s;
  Matrix v;
};

Decomposition full_svd(const Matrix& m, bool full_u) {
  const unsigned opts =
      (full_u ? Eigen::ComputeFullU : Eigen::ComputeThinU) | Eigen::ComputeThinV;
  if (std::min(m.rows(), m.cols()) <= kJacobiLimit) {
    if (full_u) {
      Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> svd(
          m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
    }
    Eigen::JacobiSVD<Matrix, Eigen::HouseholderQRPreconditioner> svd(m, opts);
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
  }
  Eigen::BDCSVD<Matrix> svd(m, opts);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

}  // namespace

RealVector singular_values(const Matrix& m) {
  if (m.size() == 0) return RealVector();
  const Matrix tall = m.rows() >= m.cols() ? rows_by_decreasing_norm(m)
                                           : rows_by_decreasing_norm(m.adjoint());
  if (tall.cols() <= kJacobiLimit) {
    Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> svd(tall);
    return svd.singularValues();
  }
  Eigen::BDCSVD<Matrix> svd(tall);
  return svd.singularValues();
}

Index numerical_rank(const RealVector& sv, double rel_cutoff) {
  if (sv.size() == 0 || !(sv(0) > 0.0)) return 0;
  const double threshold = rel_cutoff * sv(0);
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++r;
  }
  return r;
}

Index rank(const Matrix& m, double rel_cutoff) { return numerical_rank(singular_values(m), rel_cutoff); }

double spectral_norm(const Matrix& m) {
  const RealVector sv = singular_values(m);
  return sv.size() ? sv(0) : 0.0;
}

Matrix pinv(const Matrix& m, double rel_cutoff) {
  Matrix out = Matrix::Zero(m.cols(), m.rows());
  if (m.size() == 0) return out;
  const Decomposition d = full_svd(m, false);
  const Index r = numerical_rank(d.s, rel_cutoff);
  for (Index i = 0; i < r; ++i) {
    out.noalias() += d.v.col(i) * (1.0 / d.s(i)) * d.u.col(i).adjoint();
  }
  return out;
}

Matrix range_basis(const Matrix& m, double rel_cutoff) {
  const Decomposition d = full_svd(m, false);
  const Index r = numerical_rank(d.s, rel_cutoff);
  return d.u.leftCols(r);
}

Matrix complement_basis(const Matrix& m, double rel_cutoff) {
  const Decomposition d = full_svd(m, true);
  const Index r = numerical_rank(d.s, rel_cutoff);
  return d.u.rightCols(m.rows() - r);
}

}  // namespace frameforge::linalg
