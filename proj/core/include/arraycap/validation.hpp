#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arraycap/capacity.hpp"

namespace arraycap {

/// Reference values computed along routes that share no code with the
/// production evaluators.
namespace oracle {

/// sin(x)/x from its Taylor series in 50-digit arithmetic.
double sinc_series(double x);
/// J0(x) from its power series in 50-digit arithmetic; accurate for |x| <= 60.
double bessel_j0_series(double x);
/// d' Gamma^-1 d by a full-pivot LU solve.
double quadratic_form_direct(const Eigen::VectorXcd& d, const Eigen::MatrixXcd& gamma);

}  // namespace oracle

/// One randomized capacity problem.
struct RandomInstance {
  ArraySetup setup;
  double frequency;
  SourceSpec source;
  double snr_linear;
};

/// M in [2, 8], positions in a 10 cm cube, f log-uniform in [100, 8000] Hz,
/// noise cycling spherical / cylindrical / custom by `index`, epsilon log-uniform
/// in [0.001, 0.1]. Cylindrical instances use a planar array (z = 0).
RandomInstance random_instance(std::mt19937_64& rng, std::size_t index);

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

struct ValidationOptions {
  /// Implementations under test; replaceable to exercise failure reporting.
  std::function<double(double)> sinc;
  std::function<double(double)> bessel_j0;
  std::uint64_t seed = 20240101;
  std::size_t random_instances = 200;
};

ValidationOptions default_validation_options();

/// Runs the built-in oracle checks and returns one result per check.
std::vector<CheckResult> run_validation(const ValidationOptions& options);

}  // namespace arraycap
