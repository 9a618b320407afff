#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "arraycap/geometry.hpp"
#include "arraycap/noisefield.hpp"
#include "arraycap/scattering.hpp"
#include "arraycap/wavefield.hpp"

namespace arraycap {

/// Eigen factors Gamma = U diag(s) U' of a full-rank noise covariance.
class Whitener {
 public:
  Whitener(Eigen::MatrixXcd basis, Eigen::VectorXd singular_values, double frequency);

  const Eigen::MatrixXcd& basis() const noexcept { return basis_; }
  const Eigen::VectorXd& singular_values() const noexcept { return singular_values_; }
  double frequency() const noexcept { return frequency_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(singular_values_.size()); }

 private:
  Eigen::MatrixXcd basis_;
  Eigen::VectorXd singular_values_;
  double frequency_;
};

/// Relative eigenvalue floor below which a covariance counts as singular.
inline constexpr double kRankTolerance = 1e-12;

/// Throws SingularCovariance when min(s) < 1e-12 max(s).
Whitener whiten(const NoiseCovariance& covariance);

/// h~ = diag(s)^(-1/2) U' d.
Eigen::VectorXcd whitened_channel(const Whitener& whitener, const SteeringVector& steering);

/// ||h~||^2, which equals d' Gamma^-1 d.
double whitened_gain(const Whitener& whitener, const SteeringVector& steering);

struct CapacityResult {
  double value;       ///< bits/s/Hz
  double snr_linear;  ///< per-microphone SNR relative to the base noise power
  double frequency;
  SourceSpec source;
};

/// log2(1 + snr * noise_power * gain).
double capacity_bits(double snr_linear, double noise_power, double whitened_gain);

/// C = log2(1 + snr sigma^2 d' Gamma^-1 d), with sigma^2 the base noise power
/// of `covariance`.
CapacityResult narrowband_capacity(const SteeringVector& steering, const NoiseCovariance& covariance,
                                   double snr_linear);

/// Linear MMSE of the source after the optimal multichannel Wiener filter:
/// P / (1 + P d' Gamma^-1 d).
double wiener_mmse(const SteeringVector& steering, const NoiseCovariance& covariance, double source_power);

/// Normalized nonnegative weights on an ascending frequency grid.
class SpectralWeights {
 public:
  /// Requires ascending frequencies, nonnegative weights summing to 1 within 1e-12.
  SpectralWeights(std::vector<double> frequencies, std::vector<double> weights);

  static SpectralWeights uniform(std::vector<double> frequencies);
  static SpectralWeights one_hot(double frequency);
  /// Sorts by frequency and rescales to unit sum. `renormalized` reports
  /// whether the raw weights were off by more than 1e-12.
  static SpectralWeights normalized(std::vector<double> frequencies, std::vector<double> raw_weights,
                                    bool* renormalized = nullptr);

  const std::vector<double>& frequencies() const noexcept { return frequencies_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return frequencies_.size(); }

 private:
  std::vector<double> frequencies_;
  std::vector<double> weights_;
};

// CSV with header `freq_hz,weight`.
SpectralWeights read_spectral_weights(std::istream& in, bool* renormalized = nullptr);
SpectralWeights load_spectral_weights(const std::filesystem::path& path, bool* renormalized = nullptr);

/// Everything that fixes the acoustic channel apart from the source.
struct ArraySetup {
  ArrayGeometry geometry;
  NoiseModel noise;
  double speed_of_sound = kDefaultSpeedOfSound;
  /// Optional scattered-field table added to every incident steering vector.
  std::shared_ptr<const ScatteringTable> scattering;
  std::string geometry_id = "custom";

  SteeringVector steering_at(double frequency, const SourceSpec& source) const;
  NoiseCovariance covariance_at(double frequency) const;
};

/// Narrowband capacity with the covariance built from the setup. Failures
/// are rethrown with the offending frequency in the message.
CapacityResult narrowband_capacity(const ArraySetup& setup, double frequency, const SourceSpec& source,
                                   double snr_linear);

/// Weighted mean of narrowband capacity over the weight grid, reduced in
/// ascending frequency order with compensated summation.
double broadband_capacity(const ArraySetup& setup, const SourceSpec& source, const SpectralWeights& weights,
                          double snr_linear);

/// Broadband capacity for each azimuth in `azimuths`, keeping the range and
/// polar angle of `nominal`. Whitens once per frequency.
std::vector<double> broadband_azimuth_profile(const ArraySetup& setup, const SourceSpec& nominal,
                                              const std::vector<double>& azimuths, const SpectralWeights& weights,
                                              double snr_linear);

/// Nodes and weights for E[g(X)], X ~ N(0, 1); weights sum to 1.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch rule with `points` nodes.
GaussHermiteRule gauss_hermite(int points);

/// Zero-mean Gaussian error on the source azimuth.
struct AzimuthUncertainty {
  double stddev = 0.0;  ///< radians
  int points = 9;       ///< odd quadrature order
};

/// E[C] over the azimuth error, by Gauss-Hermite quadrature. A zero stddev
/// returns the nominal broadband capacity.
double expected_capacity_under_position_uncertainty(const ArraySetup& setup, const SourceSpec& nominal,
                                                    const SpectralWeights& weights,
                                                    const AzimuthUncertainty& uncertainty, double snr_linear);

/// Capacity values on one axis plus provenance metadata.
struct CapacityMap {
  std::string axis_name;
  std::vector<double> axis;
  std::vector<double> values;
  std::vector<std::pair<std::string, std::string>> metadata;

  void set_metadata(const std::string& key, const std::string& value);
  const std::string* find_metadata(const std::string& key) const;
};

/// Capacity at each azimuth, keeping the polar angle (and range, for a
/// near-field source) of `nominal`.
CapacityMap azimuth_scan(const ArraySetup& setup, double frequency, const SourceSpec& nominal,
                         const std::vector<double>& azimuths, double snr_linear);

CapacityMap frequency_scan(const ArraySetup& setup, const SourceSpec& source, const std::vector<double>& frequencies,
                           double snr_linear);

/// Broadband capacity per azimuth.
CapacityMap broadband_scan(const ArraySetup& setup, const SourceSpec& nominal, const std::vector<double>& azimuths,
                           const SpectralWeights& weights, double snr_linear);

// CSV: `# key=value` metadata lines, then `axis_value,capacity_bits` rows.
void write_capacity_map(std::ostream& out, const CapacityMap& map);
std::string capacity_map_csv(const CapacityMap& map);
CapacityMap read_capacity_map(std::istream& in);

double db_to_linear(double db);

}  // namespace arraycap
