#pragma once

#include <string>
#include <variant>

#include <Eigen/Dense>

#include "arraycap/geometry.hpp"

namespace arraycap {

inline constexpr double kDefaultSpeedOfSound = 343.0;  // m/s

/// Arrival direction. `polar` is measured from +z, so polar = pi/2 is the
/// horizontal (x-y) plane. Azimuth is measured from +x toward +y.
class Direction {
 public:
  /// Requires azimuth in [0, 2pi) and polar in [0, pi].
  Direction(double azimuth, double polar);

  /// Wraps the azimuth into [0, 2pi) before validating.
  static Direction wrapped(double azimuth, double polar);
  /// Horizontal-plane direction at the given azimuth.
  static Direction horizontal(double azimuth) { return wrapped(azimuth, kHorizontal); }

  double azimuth() const noexcept { return azimuth_; }
  double polar() const noexcept { return polar_; }

  /// Unit vector pointing from the array toward the source.
  Vec3 unit_vector() const;

  static constexpr double kHorizontal = 1.5707963267948966;

 private:
  double azimuth_;
  double polar_;
};

struct FarField {
  Direction direction;
};

/// Point source at `range` meters from the coordinate origin.
struct NearField {
  double range;
  Direction direction;
};

using SourceSpec = std::variant<FarField, NearField>;

const Direction& direction_of(const SourceSpec& source);
/// Same source kind and range with a different direction.
SourceSpec with_direction(const SourceSpec& source, const Direction& direction);
std::string describe(const SourceSpec& source);

struct SteeringVector {
  Eigen::VectorXcd entries;
  double frequency;
  SourceSpec source;
};

/// Plane-wave delays tau_k = -(p_k . u) / c; microphones nearer the source
/// get negative delays.
Eigen::VectorXd far_field_delays(const ArrayGeometry& geometry, const Direction& direction,
                                 double speed_of_sound = kDefaultSpeedOfSound);

/// d_k = exp(-j 2 pi f tau_k). Negative f yields the entrywise conjugate.
SteeringVector steering_far_field(const ArrayGeometry& geometry, double frequency, const Direction& direction,
                                  double speed_of_sound = kDefaultSpeedOfSound);

/// Spherical wavefront from s = range * u. With r_k = |s - p_k|:
/// alpha_k = range / r_k and tau_k = (r_k - range) / c, so a microphone at
/// the origin sees unit gain and zero phase.
///
/// Throws InvalidArgument unless range exceeds the largest microphone
/// distance from the origin.
SteeringVector steering_near_field(const ArrayGeometry& geometry, double frequency, double range,
                                   const Direction& direction, double speed_of_sound = kDefaultSpeedOfSound);

/// Dispatches on the source kind.
SteeringVector steering(const ArrayGeometry& geometry, double frequency, const SourceSpec& source,
                        double speed_of_sound = kDefaultSpeedOfSound);

}  // namespace arraycap
