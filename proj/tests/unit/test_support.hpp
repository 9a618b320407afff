#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "arraycap/geometry.hpp"

namespace arraycap::test {

inline Eigen::MatrixXcd random_complex(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = {g(rng), g(rng)};
  return a;
}

/// B B' + shift I; positive definite for shift > 0.
inline Eigen::MatrixXcd random_hermitian_psd(std::mt19937_64& rng, Eigen::Index n, double shift = 0.1) {
  const auto b = random_complex(rng, n, n);
  Eigen::MatrixXcd a = b * b.adjoint();
  a += shift * Eigen::MatrixXcd::Identity(n, n);
  return 0.5 * (a + a.adjoint());
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline ArrayGeometry random_geometry(std::mt19937_64& rng, int count, double half_width = 0.05,
                                     bool planar = false) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  std::vector<Vec3> pos;
  while (static_cast<int>(pos.size()) < count) {
    Vec3 p(u(rng), u(rng), u(rng));
    if (planar) p.z() = 0.0;
    bool clear = true;
    for (const auto& q : pos) clear = clear && (p - q).norm() > 0.004;
    if (clear) pos.push_back(p);
  }
  return ArrayGeometry(std::move(pos));
}

}  // namespace arraycap::test
