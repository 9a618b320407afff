#pragma once

#include <Eigen/Dense>

namespace arraycap {

/// Eigenpairs of a Hermitian matrix, A = vectors * diag(values) * vectors'.
struct HermitianEigen {
  Eigen::VectorXd values;     ///< descending
  Eigen::MatrixXcd vectors;   ///< unitary; columns are eigenvectors
};

/// Cyclic complex Jacobi eigensolver for small dense Hermitian matrices.
///
/// Eigenvalues are sorted descending. Each eigenvector is rotated so that its
/// largest-magnitude entry (first one on ties) is real and positive, which
/// makes the result deterministic for simple eigenvalues.
///
/// Only the upper triangle is trusted; the input is Hermitian-symmetrized
/// before rotation starts.
HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& matrix);

}  // namespace arraycap
