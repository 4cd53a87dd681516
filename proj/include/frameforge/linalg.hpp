#pragma once

// Dense helpers shared by the operator layer. All rank decisions use a
// relative cutoff: a singular value counts as nonzero when it exceeds
// cutoff * sigma_max.

#include "frameforge/seqcore.hpp"

namespace frameforge::linalg {

inline constexpr double kDefaultSvdCutoff = 1e-10;

/// Singular values in decreasing order. Rows are sorted by norm before the
/// decomposition, which keeps row-graded matrices (weighted analysis
/// operators) accurate.
RealVector singular_values(const Matrix& m);

/// Number of singular values above cutoff * sv(0).
Index numerical_rank(const RealVector& sv, double rel_cutoff = kDefaultSvdCutoff);

Index rank(const Matrix& m, double rel_cutoff = kDefaultSvdCutoff);

double spectral_norm(const Matrix& m);

/// Moore-Penrose inverse by SVD with the relative cutoff.
Matrix pinv(const Matrix& m, double rel_cutoff = kDefaultSvdCutoff);

/// Orthonormal basis of the column space.
Matrix range_basis(const Matrix& m, double rel_cutoff = kDefaultSvdCutoff);

/// Orthonormal basis of the orthogonal complement of the column space.
Matrix complement_basis(const Matrix& m, double rel_cutoff = kDefaultSvdCutoff);

}  // namespace frameforge::linalg
