#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "arraycap/geometry.hpp"
#include "arraycap/wavefield.hpp"

namespace arraycap {

/// Spatial noise covariance at one frequency.
///
/// The stored matrix is always Hermitian (symmetrized on construction) and
/// positive semidefinite: the smallest eigenvalue may not fall below
/// -1e-10 times the largest. Unless the matrix carries interference, every
/// diagonal entry equals the per-microphone noise power.
class NoiseCovariance {
 public:
  NoiseCovariance(Eigen::MatrixXcd matrix, double frequency, double noise_power, bool interference_augmented = false);

  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  double frequency() const noexcept { return frequency_; }
  /// Per-microphone power of the base noise field, before any interferers.
  double noise_power() const noexcept { return noise_power_; }
  bool interference_augmented() const noexcept { return interference_augmented_; }

 private:
  Eigen::MatrixXcd matrix_;
  double frequency_;
  double noise_power_;
  bool interference_augmented_;
};

/// Nonnegative noise power density sigma_w^2(f, azimuth, polar) sampled on a
/// product grid. Azimuth is periodic; the polar grid must span [0, pi].
/// Evaluation is multilinear. A single-frequency grid is treated as
/// frequency independent.
class AngularDensity {
 public:
  /// `values` is laid out frequency-major, then azimuth, then polar.
  AngularDensity(std::vector<double> frequencies, std::vector<double> azimuths, std::vector<double> polars,
                 std::vector<double> values);

  /// Constant density at every frequency and direction.
  static AngularDensity isotropic(double power);

  /// Samples `fn(f, azimuth, polar)` on the given grid.
  static AngularDensity sample(std::vector<double> frequencies, std::vector<double> azimuths,
                               std::vector<double> polars, const std::function<double(double, double, double)>& fn);

  double evaluate(double frequency, double azimuth, double polar) const;

  const std::vector<double>& frequencies() const noexcept { return frequencies_; }
  const std::vector<double>& azimuths() const noexcept { return azimuths_; }
  const std::vector<double>& polars() const noexcept { return polars_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  double at(std::size_t f, std::size_t a, std::size_t p) const {
    return values_[(f * azimuths_.size() + a) * polars_.size() + p];
  }

  std::vector<double> frequencies_;
  std::vector<double> azimuths_;
  std::vector<double> polars_;
  std::vector<double> values_;
};

// CSV with header `freq_hz,azimuth_rad,polar_rad,power`; same grid rules as
// the scattering table.
AngularDensity read_angular_density(std::istream& in);
AngularDensity load_angular_density(const std::filesystem::path& path);
void write_angular_density(std::ostream& out, const AngularDensity& density);

/// Trapezoid-rule node counts for the direction integral.
struct QuadratureResolution {
  int azimuth = 64;
  int polar = 32;
};

/// Point interferer added on top of the base noise field.
struct InterfererSpec {
  SourceSpec source;
  double power = 1.0;
};

/// sigma^2 I.
NoiseCovariance covariance_incoherent(std::size_t mic_count, double noise_power, double frequency = 0.0);

/// Spherically isotropic noise: off-diagonal sigma^2 sinc(2 pi f l / c) / (1 + epsilon).
NoiseCovariance covariance_spherical_diffuse(const DistanceMatrix& distances, double frequency, double noise_power,
                                             double epsilon, double speed_of_sound = kDefaultSpeedOfSound);

/// Cylindrically isotropic noise: off-diagonal sigma^2 J0(2 pi f l / c) / (1 + epsilon).
/// Assumes the array lies in a plane normal to the cylinder axis; not checked.
NoiseCovariance covariance_cylindrical_diffuse(const DistanceMatrix& distances, double frequency, double noise_power,
                                               double epsilon, double speed_of_sound = kDefaultSpeedOfSound);

/// Integrates d(f, theta) d(f, theta)' sigma_w^2(f, theta) sin(polar) over the
/// sphere with the trapezoid rule. Azimuth nodes are 2 pi i / n_azimuth;
/// polar nodes are pi j / (n_polar - 1), endpoints included.
NoiseCovariance covariance_from_angular_density(const ArrayGeometry& geometry, double frequency,
                                                const AngularDensity& density,
                                                double speed_of_sound = kDefaultSpeedOfSound,
                                                QuadratureResolution resolution = {});

/// base + power * d_I d_I'. The diagonal no longer equals the noise power,
/// and the result is flagged as interference augmented.
NoiseCovariance add_interference(const NoiseCovariance& base, const InterfererSpec& interferer,
                                 const ArrayGeometry& geometry, double speed_of_sound = kDefaultSpeedOfSound);

struct IncoherentNoise {
  double noise_power = 1.0;
};

struct SphericalDiffuseNoise {
  double noise_power = 1.0;
  double epsilon = 0.0;
};

struct CylindricalDiffuseNoise {
  double noise_power = 1.0;
  double epsilon = 0.0;
};

/// Integrated angular density. Off-diagonal terms are divided by (1 + epsilon)
/// exactly as for the closed-form diffuse fields.
struct CustomNoise {
  std::shared_ptr<const AngularDensity> density;
  QuadratureResolution resolution;
  double epsilon = 0.0;
};

/// A noise field description that can produce a covariance at any frequency.
struct NoiseModel {
  std::variant<IncoherentNoise, SphericalDiffuseNoise, CylindricalDiffuseNoise, CustomNoise> field;
  std::vector<InterfererSpec> interferers;

  /// Short stable identifier, e.g. "spherical(sigma2=1,eps=0.01)".
  std::string id() const;
};

NoiseCovariance noise_covariance(const NoiseModel& model, const ArrayGeometry& geometry, double frequency,
                                 double speed_of_sound = kDefaultSpeedOfSound);

}  // namespace arraycap
