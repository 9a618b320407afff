#include "arraycap/hermitian_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "arraycap/error.hpp"

namespace arraycap {

namespace {

using cd = std::complex<double>;

double off_diagonal_norm2(const Eigen::MatrixXcd& a) {
  double sum = 0.0;
  const auto n = a.rows();
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = p + 1; q < n; ++q) sum += std::norm(a(p, q));
  return 2.0 * sum;
}

}  // namespace

HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& matrix) {
  if (matrix.rows() != matrix.cols())
    throw InvalidArgument("hermitian_eigen: matrix is not square");
  const Eigen::Index n = matrix.rows();
  if (!matrix.allFinite())
    throw InvalidArgument("hermitian_eigen: matrix has non-finite entries");

  Eigen::MatrixXcd a = 0.5 * (matrix + matrix.adjoint());
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);

  const double scale = a.squaredNorm();
  const double tol = 1e-30 * scale;

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal_norm2(a) <= tol) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const cd apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Phase the pair into a real symmetric 2x2 block, then apply the
        // classical real Jacobi rotation.
        const cd phase = apq / mag;
        const double zeta = (aqq - app) / (2.0 * mag);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(zeta * zeta + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cd g00 = c;
        const cd g01 = s;
        const cd g10 = -s * std::conj(phase);
        const cd g11 = c * std::conj(phase);

        for (Eigen::Index k = 0; k < n; ++k) {
          const cd akp = a(k, p);
          const cd akq = a(k, q);
          a(k, p) = akp * g00 + akq * g10;
          a(k, q) = akp * g01 + akq * g11;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const cd apk = a(p, k);
          const cd aqk = a(q, k);
          a(p, k) = std::conj(g00) * apk + std::conj(g10) * aqk;
          a(q, k) = std::conj(g01) * apk + std::conj(g11) * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const cd vkp = v(k, p);
          const cd vkq = v(k, q);
          v(k, p) = vkp * g00 + vkq * g10;
          v(k, q) = vkp * g01 + vkq * g11;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() > a(j, j).real();
  });

  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    const Eigen::Index src = order[static_cast<std::size_t>(col)];
    out.values(col) = a(src, src).real();
    Eigen::VectorXcd vec = v.col(src);
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double m = std::abs(vec(k));
      if (m > best * (1.0 + 1e-12)) {
        best = m;
        pivot = k;
      }
    }
    if (best > 0.0) vec *= std::conj(vec(pivot)) / best;
    vec(pivot) = std::abs(vec(pivot));
    out.vectors.col(col) = vec;
  }
  return out;
}

}  // namespace arraycap
