#include "arraycap/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "arraycap/special.hpp"
#include "text_io.hpp"

namespace arraycap {

namespace oracle {

namespace {
using big = boost::multiprecision::cpp_bin_float_50;
}

double sinc_series(double x) {
  const big bx = x;
  const big x2 = bx * bx;
  big term = 1;
  big sum = 1;
  for (int k = 1; k < 400; ++k) {
    term *= -x2 / big((2 * k) * (2 * k + 1));
    sum += term;
    if (abs(term) < big("1e-40")) break;
  }
  return sum.convert_to<double>();
}

double bessel_j0_series(double x) {
  const big q = big(x) * big(x) / 4;
  big term = 1;
  big sum = 1;
  for (int k = 1; k < 400; ++k) {
    term *= -q / big(k * k);
    sum += term;
    if (abs(term) < big("1e-40")) break;
  }
  return sum.convert_to<double>();
}

double quadratic_form_direct(const Eigen::VectorXcd& d, const Eigen::MatrixXcd& gamma) {
  const Eigen::VectorXcd x = gamma.fullPivLu().solve(d);
  return d.dot(x).real();
}

}  // namespace oracle

RandomInstance random_instance(std::mt19937_64& rng, std::size_t index) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> count(2, 8);
  const int m = count(rng);
  // The cylindrical model only holds for arrays in the plane normal to its axis.
  const bool planar = index % 3 == 1;
  std::vector<Vec3> pos;
  while (static_cast<int>(pos.size()) < m) {
    Vec3 p(0.1 * unit(rng) - 0.05, 0.1 * unit(rng) - 0.05, 0.1 * unit(rng) - 0.05);
    if (planar) p.z() = 0.0;
    const bool clear = std::all_of(pos.begin(), pos.end(), [&](const Vec3& q) { return (p - q).norm() > 0.005; });
    if (clear) pos.push_back(p);
  }
  const double f = 100.0 * std::pow(80.0, unit(rng));
  const double eps = 0.001 * std::pow(100.0, unit(rng));
  const double sigma2 = 0.5 + unit(rng);

  NoiseModel noise;
  switch (index % 3) {
    case 0: noise.field = SphericalDiffuseNoise{sigma2, eps}; break;
    case 1: noise.field = CylindricalDiffuseNoise{sigma2, eps}; break;
    default: {
      // Smooth random lobe pattern on a coarse grid.
      const double a = unit(rng), b = unit(rng), phase = 2.0 * std::numbers::pi * unit(rng);
      auto density = std::make_shared<AngularDensity>(AngularDensity::sample(
          {0.0}, {0.0, 0.25 * std::numbers::pi, 0.5 * std::numbers::pi, 0.75 * std::numbers::pi, std::numbers::pi,
                  1.25 * std::numbers::pi, 1.5 * std::numbers::pi, 1.75 * std::numbers::pi},
          {0.0, 0.25 * std::numbers::pi, 0.5 * std::numbers::pi, 0.75 * std::numbers::pi, std::numbers::pi},
          [&](double, double az, double pol) {
            return sigma2 / (4.0 * std::numbers::pi) * (1.0 + 0.45 * a * std::cos(az - phase) + 0.45 * b * std::cos(pol));
          }));
      noise.field = CustomNoise{std::move(density), {16, 8}, eps};
    }
  }
  const Direction dir(2.0 * std::numbers::pi * unit(rng) * 0.999999, std::numbers::pi * unit(rng));
  const double snr = std::pow(10.0, (40.0 * unit(rng) - 10.0) / 10.0);
  ArraySetup setup{ArrayGeometry(std::move(pos)), std::move(noise), kDefaultSpeedOfSound, nullptr, "random"};
  return {std::move(setup), f, FarField{dir}, snr};
}

ValidationOptions default_validation_options() {
  ValidationOptions o;
  o.sinc = special::sinc;
  o.bessel_j0 = special::bessel_j0;
  return o;
}

namespace {

CheckResult scalar_oracle(const std::string& name, const std::function<double(double)>& impl,
                          double (*reference)(double)) {
  double worst = 0.0;
  double at = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = 0.05 * i;
    const double err = std::abs(impl(x) - reference(x));
    if (!(err <= worst)) {
      worst = err;
      at = x;
    }
  }
  std::ostringstream os;
  os << "max abs error " << worst << " at x = " << at << " over [0, 50] (limit 1e-10)";
  return {name, worst <= 1e-10, os.str()};
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  std::vector<CheckResult> results;
  results.push_back(scalar_oracle("sinc oracle", options.sinc, oracle::sinc_series));
  results.push_back(scalar_oracle("bessel J0 oracle", options.bessel_j0, oracle::bessel_j0_series));

  // Whitened route vs direct solve, and the MMSE identity on the same instances.
  {
    std::mt19937_64 rng(options.seed);
    double worst_gain = 0.0;
    double worst_mmse = 0.0;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < options.random_instances; ++i) {
      const auto inst = random_instance(rng, i);
      try {
        const auto gamma = inst.setup.covariance_at(inst.frequency);
        const auto d = inst.setup.steering_at(inst.frequency, inst.source);
        const auto w = whiten(gamma);
        const double q_white = whitened_gain(w, d);
        const double q_direct = oracle::quadratic_form_direct(d.entries, gamma.matrix());
        worst_gain = std::max(worst_gain, std::abs(q_white - q_direct) / std::abs(q_direct));

        const double power = inst.snr_linear * gamma.noise_power();
        const double c = narrowband_capacity(d, gamma, inst.snr_linear).value;
        const double mmse = wiener_mmse(d, gamma, power);
        worst_mmse = std::max(worst_mmse, std::abs(mmse - power * std::exp2(-c)) / (power * std::exp2(-c)));
      } catch (const std::exception&) {
        ++failures;
      }
    }
    std::ostringstream a, b;
    a << options.random_instances << " instances, max relative deviation " << worst_gain
      << " (limit 1e-9), errors " << failures;
    b << options.random_instances << " instances, max relative deviation " << worst_mmse
      << " (limit 1e-12), errors " << failures;
    results.push_back({"whitened vs direct solve", failures == 0 && worst_gain <= 1e-9, a.str()});
    results.push_back({"MMSE identity", failures == 0 && worst_mmse <= 1e-12, b.str()});
  }

  // Isotropic quadrature against the closed-form diffuse covariance.
  {
    const auto geometry = build_linear(3, 0.03);
    const double sigma2 = 1.0;
    const auto numeric = covariance_from_angular_density(geometry, 1000.0,
                                                         AngularDensity::isotropic(sigma2 / (4.0 * std::numbers::pi)),
                                                         kDefaultSpeedOfSound, {128, 64});
    // Closed form assembled from the sinc under test.
    const auto dist = pairwise_distances(geometry);
    const double k = 2.0 * std::numbers::pi * 1000.0 / kDefaultSpeedOfSound;
    double worst = 0.0;
    for (std::size_t m = 0; m < geometry.size(); ++m)
      for (std::size_t n = 0; n < geometry.size(); ++n) {
        const double closed = m == n ? sigma2 : sigma2 * options.sinc(k * dist(m, n));
        worst = std::max(worst, std::abs(numeric.matrix()(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) - closed));
      }
    std::ostringstream os;
    os << "max entrywise deviation " << worst << " (limit 1e-3 sigma^2)";
    results.push_back({"quadrature vs closed form", worst <= 1e-3 * sigma2, os.str()});
  }
  return results;
}

}  // namespace arraycap
