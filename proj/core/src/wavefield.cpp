#include "arraycap/wavefield.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "arraycap/error.hpp"
#include "text_io.hpp"

namespace arraycap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_speed(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("speed of sound must be positive and finite");
}

void require_frequency(double f) {
  if (!std::isfinite(f)) throw InvalidArgument("frequency must be finite");
}

}  // namespace

Direction::Direction(double azimuth, double polar) : azimuth_(azimuth), polar_(polar) {
  if (!(azimuth >= 0.0 && azimuth < kTwoPi))
    throw InvalidArgument("direction: azimuth must lie in [0, 2pi), got " + detail::format_number(azimuth));
  if (!(polar >= 0.0 && polar <= std::numbers::pi))
    throw InvalidArgument("direction: polar angle must lie in [0, pi], got " + detail::format_number(polar));
}

Direction Direction::wrapped(double azimuth, double polar) {
  if (!std::isfinite(azimuth)) throw InvalidArgument("direction: azimuth must be finite");
  double a = std::fmod(azimuth, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return Direction(a, polar);
}

Vec3 Direction::unit_vector() const {
  const double s = std::sin(polar_);
  return {std::cos(azimuth_) * s, std::sin(azimuth_) * s, std::cos(polar_)};
}

const Direction& direction_of(const SourceSpec& source) {
  return std::visit([](const auto& s) -> const Direction& { return s.direction; }, source);
}

SourceSpec with_direction(const SourceSpec& source, const Direction& direction) {
  if (const auto* near = std::get_if<NearField>(&source)) return NearField{near->range, direction};
  return FarField{direction};
}

std::string describe(const SourceSpec& source) {
  std::ostringstream os;
  const auto& d = direction_of(source);
  if (const auto* near = std::get_if<NearField>(&source)) {
    os << "near(r=" << detail::format_number(near->range) << ",az=" << detail::format_number(d.azimuth())
       << ",polar=" << detail::format_number(d.polar()) << ")";
  } else {
    os << "far(az=" << detail::format_number(d.azimuth()) << ",polar=" << detail::format_number(d.polar()) << ")";
  }
  return os.str();
}

Eigen::VectorXd far_field_delays(const ArrayGeometry& geometry, const Direction& direction, double speed_of_sound) {
  require_speed(speed_of_sound);
  const Vec3 u = direction.unit_vector();
  Eigen::VectorXd tau(static_cast<Eigen::Index>(geometry.size()));
  for (std::size_t k = 0; k < geometry.size(); ++k)
    tau(static_cast<Eigen::Index>(k)) = -geometry.position(k).dot(u) / speed_of_sound;
  return tau;
}

SteeringVector steering_far_field(const ArrayGeometry& geometry, double frequency, const Direction& direction,
                                  double speed_of_sound) {
  require_frequency(frequency);
  const Eigen::VectorXd tau = far_field_delays(geometry, direction, speed_of_sound);
  Eigen::VectorXcd d(tau.size());
  for (Eigen::Index k = 0; k < tau.size(); ++k) d(k) = std::polar(1.0, -kTwoPi * frequency * tau(k));
  return {std::move(d), frequency, FarField{direction}};
}

SteeringVector steering_near_field(const ArrayGeometry& geometry, double frequency, double range,
                                   const Direction& direction, double speed_of_sound) {
  require_frequency(frequency);
  require_speed(speed_of_sound);
  const double extent = geometry.max_radius();
  if (!(range > extent) || !std::isfinite(range))
    throw InvalidArgument("near-field range " + detail::format_number(range) +
                          " m must exceed the array extent " + detail::format_number(extent) + " m");
  const Vec3 source = range * direction.unit_vector();
  Eigen::VectorXcd d(static_cast<Eigen::Index>(geometry.size()));
  for (std::size_t k = 0; k < geometry.size(); ++k) {
    const double rk = (source - geometry.position(k)).norm();
    const double alpha = range / rk;
    const double tau = (rk - range) / speed_of_sound;
    d(static_cast<Eigen::Index>(k)) = std::polar(alpha, -kTwoPi * frequency * tau);
  }
  return {std::move(d), frequency, NearField{range, direction}};
}

SteeringVector steering(const ArrayGeometry& geometry, double frequency, const SourceSpec& source,
                        double speed_of_sound) {
  if (const auto* near = std::get_if<NearField>(&source))
    return steering_near_field(geometry, frequency, near->range, near->direction, speed_of_sound);
  return steering_far_field(geometry, frequency, std::get<FarField>(source).direction, speed_of_sound);
}

}  // namespace arraycap
