#include "arraycap/noisefield.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "arraycap/error.hpp"
#include "arraycap/hermitian_eigen.hpp"
#include "arraycap/special.hpp"
#include "text_io.hpp"

namespace arraycap {

NoiseCovariance::NoiseCovariance(Eigen::MatrixXcd matrix, double frequency, double noise_power,
                                 bool interference_augmented)
    : matrix_(std::move(matrix)),
      frequency_(frequency),
      noise_power_(noise_power),
      interference_augmented_(interference_augmented) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0)
    throw InvalidArgument("noise covariance must be a non-empty square matrix");
  if (!matrix_.allFinite()) throw InvalidArgument("noise covariance has non-finite entries");
  if (!(noise_power_ >= 0.0) || !std::isfinite(noise_power_))
    throw InvalidArgument("noise power must be nonnegative and finite");

  matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
  const auto n = matrix_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = matrix_(i, i).real();
    if (!interference_augmented_) {
      const double tol = 1e-9 * std::max(noise_power_, 1e-300);
      if (std::abs(diag - noise_power_) > tol)
        throw InvalidArgument("noise covariance diagonal entry " + std::to_string(i) + " (" +
                              detail::format_number(diag) + ") differs from the noise power " +
                              detail::format_number(noise_power_));
      diag = noise_power_;
    }
    matrix_(i, i) = diag;
  }

  if (n > 1) {
    const auto eig = hermitian_eigen(matrix_);
    const double top = eig.values(0);
    const double bottom = eig.values(n - 1);
    if (bottom < -1e-10 * std::max(top, 0.0))
      throw DegenerateCovariance("noise covariance is not positive semidefinite (min eigenvalue " +
                                 detail::format_number(bottom) + ", max " + detail::format_number(top) +
                                 "); use a positive incoherent fraction epsilon");
  } else if (matrix_(0, 0).real() < 0.0) {
    throw DegenerateCovariance("noise covariance has a negative variance");
  }
}

namespace {

void require_diffuse_args(double frequency, double noise_power, double epsilon, double c) {
  if (!(frequency >= 0.0) || !std::isfinite(frequency))
    throw InvalidArgument("diffuse noise: frequency must be nonnegative and finite");
  if (!(noise_power > 0.0) || !std::isfinite(noise_power))
    throw InvalidArgument("diffuse noise: noise power must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw InvalidArgument("diffuse noise: epsilon must be nonnegative");
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("speed of sound must be positive and finite");
}

template <typename Coherence>
NoiseCovariance diffuse(const DistanceMatrix& distances, double frequency, double noise_power, double epsilon,
                        double c, Coherence coherence) {
  require_diffuse_args(frequency, noise_power, epsilon, c);
  const auto n = static_cast<Eigen::Index>(distances.size());
  const double k = 2.0 * std::numbers::pi * frequency / c;
  Eigen::MatrixXcd gamma(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    gamma(m, m) = noise_power;
    for (Eigen::Index j = m + 1; j < n; ++j) {
      const double value = noise_power * coherence(k * distances.matrix()(m, j)) / (1.0 + epsilon);
      gamma(m, j) = value;
      gamma(j, m) = value;
    }
  }
  return NoiseCovariance(std::move(gamma), frequency, noise_power);
}

}  // namespace

NoiseCovariance covariance_incoherent(std::size_t mic_count, double noise_power, double frequency) {
  if (mic_count == 0) throw InvalidArgument("incoherent noise: microphone count must be positive");
  if (!(noise_power > 0.0) || !std::isfinite(noise_power))
    throw InvalidArgument("incoherent noise: noise power must be positive");
  const auto n = static_cast<Eigen::Index>(mic_count);
  return NoiseCovariance(noise_power * Eigen::MatrixXcd::Identity(n, n), frequency, noise_power);
}

NoiseCovariance covariance_spherical_diffuse(const DistanceMatrix& distances, double frequency, double noise_power,
                                             double epsilon, double speed_of_sound) {
  return diffuse(distances, frequency, noise_power, epsilon, speed_of_sound, special::sinc);
}

NoiseCovariance covariance_cylindrical_diffuse(const DistanceMatrix& distances, double frequency, double noise_power,
                                               double epsilon, double speed_of_sound) {
  return diffuse(distances, frequency, noise_power, epsilon, speed_of_sound, special::bessel_j0);
}

NoiseCovariance covariance_from_angular_density(const ArrayGeometry& geometry, double frequency,
                                                const AngularDensity& density, double speed_of_sound,
                                                QuadratureResolution resolution) {
  if (resolution.azimuth < 8 || resolution.polar < 4)
    throw InvalidArgument("angular quadrature resolution must be at least (8, 4)");
  const auto n = static_cast<Eigen::Index>(geometry.size());
  const double two_pi = 2.0 * std::numbers::pi;
  const double w_az = two_pi / resolution.azimuth;
  const double h_pol = std::numbers::pi / (resolution.polar - 1);

  Eigen::MatrixXcd gamma = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < resolution.polar; ++j) {
    // Endpoints: sin(0) = sin(pi) = 0, so they carry no weight anyway.
    const double polar = j == resolution.polar - 1 ? std::numbers::pi : std::numbers::pi * j / (resolution.polar - 1);
    const double w_pol = (j == 0 || j == resolution.polar - 1 ? 0.5 : 1.0) * h_pol * std::sin(polar);
    if (w_pol <= 0.0) continue;
    for (int i = 0; i < resolution.azimuth; ++i) {
      const double azimuth = w_az * i;
      const double power = density.evaluate(frequency, azimuth, polar);
      if (power == 0.0) continue;
      const auto d = steering_far_field(geometry, frequency, Direction(azimuth, polar), speed_of_sound);
      gamma.noalias() += (w_az * w_pol * power) * (d.entries * d.entries.adjoint());
    }
  }
  double noise_power = 0.0;
  for (Eigen::Index m = 0; m < n; ++m) noise_power += gamma(m, m).real();
  noise_power /= static_cast<double>(n);
  for (Eigen::Index m = 0; m < n; ++m) gamma(m, m) = noise_power;
  return NoiseCovariance(std::move(gamma), frequency, noise_power);
}

NoiseCovariance add_interference(const NoiseCovariance& base, const InterfererSpec& interferer,
                                 const ArrayGeometry& geometry, double speed_of_sound) {
  if (!(interferer.power >= 0.0) || !std::isfinite(interferer.power))
    throw InvalidArgument("interferer power must be nonnegative and finite");
  if (geometry.size() != base.size())
    throw InvalidArgument("interferer geometry does not match the covariance size");
  if (interferer.power == 0.0) return base;
  const auto d = steering(geometry, base.frequency(), interferer.source, speed_of_sound);
  Eigen::MatrixXcd gamma = base.matrix() + interferer.power * (d.entries * d.entries.adjoint());
  return NoiseCovariance(std::move(gamma), base.frequency(), base.noise_power(), true);
}

std::string NoiseModel::id() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, IncoherentNoise>) {
          os << "incoherent(sigma2=" << detail::format_number(f.noise_power) << ")";
        } else if constexpr (std::is_same_v<T, SphericalDiffuseNoise>) {
          os << "spherical(sigma2=" << detail::format_number(f.noise_power)
             << ",eps=" << detail::format_number(f.epsilon) << ")";
        } else if constexpr (std::is_same_v<T, CylindricalDiffuseNoise>) {
          os << "cylindrical(sigma2=" << detail::format_number(f.noise_power)
             << ",eps=" << detail::format_number(f.epsilon) << ")";
        } else {
          os << "custom(res=" << f.resolution.azimuth << "x" << f.resolution.polar
             << ",eps=" << detail::format_number(f.epsilon) << ")";
        }
      },
      field);
  for (const auto& i : interferers)
    os << "+interferer(" << describe(i.source) << ",power=" << detail::format_number(i.power) << ")";
  return os.str();
}

NoiseCovariance noise_covariance(const NoiseModel& model, const ArrayGeometry& geometry, double frequency,
                                 double speed_of_sound) {
  NoiseCovariance base = std::visit(
      [&](const auto& f) -> NoiseCovariance {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, IncoherentNoise>) {
          return covariance_incoherent(geometry.size(), f.noise_power, frequency);
        } else if constexpr (std::is_same_v<T, SphericalDiffuseNoise>) {
          return covariance_spherical_diffuse(pairwise_distances(geometry), frequency, f.noise_power, f.epsilon,
                                              speed_of_sound);
        } else if constexpr (std::is_same_v<T, CylindricalDiffuseNoise>) {
          return covariance_cylindrical_diffuse(pairwise_distances(geometry), frequency, f.noise_power, f.epsilon,
                                                speed_of_sound);
        } else {
          if (!f.density) throw InvalidArgument("custom noise model has no angular density");
          if (!(f.epsilon >= 0.0) || !std::isfinite(f.epsilon))
            throw InvalidArgument("custom noise: epsilon must be nonnegative");
          auto gamma = covariance_from_angular_density(geometry, frequency, *f.density, speed_of_sound, f.resolution);
          if (f.epsilon == 0.0) return gamma;
          Eigen::MatrixXcd scaled = gamma.matrix() / (1.0 + f.epsilon);
          scaled.diagonal() = gamma.matrix().diagonal();
          return NoiseCovariance(std::move(scaled), frequency, gamma.noise_power());
        }
      },
      model.field);
  for (const auto& interferer : model.interferers)
    base = add_interference(base, interferer, geometry, speed_of_sound);
  return base;
}

}  // namespace arraycap
