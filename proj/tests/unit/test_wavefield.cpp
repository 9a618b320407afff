#include <doctest.h>

#include <cmath>
#include <numbers>

#include "arraycap/error.hpp"
#include "arraycap/wavefield.hpp"
#include "test_support.hpp"

using namespace arraycap;
constexpr double pi = std::numbers::pi;

TEST_CASE("direction validation and unit vector") {
  CHECK_THROWS_AS(Direction(-0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Direction(2 * pi, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Direction(0.0, 3.5), InvalidArgument);
  CHECK(Direction::wrapped(-pi / 2, pi / 2).azimuth() == doctest::Approx(1.5 * pi));
  CHECK(Direction::wrapped(2 * pi, pi / 2).azimuth() == 0.0);
  const auto u = Direction(0.0, pi / 2).unit_vector();
  CHECK(u.x() == 1.0);
  CHECK(std::abs(u.z()) < 1e-16);
}

TEST_CASE("far-field delays") {
  const ArrayGeometry origin({Vec3::Zero()});
  CHECK(far_field_delays(origin, Direction(1.0, 0.3), 343.0)(0) == 0.0);

  const auto line = build_linear(3, 0.03);
  const auto broadside = far_field_delays(line, Direction(pi / 2, pi / 2), 343.0);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(broadside(k)) < 1e-18);

  const auto endfire = far_field_delays(line, Direction(0.0, pi / 2), 343.0);
  CHECK(endfire(0) == doctest::Approx(0.03 / 343.0).epsilon(1e-14));
  CHECK(endfire(1) == 0.0);
  CHECK(endfire(2) == doctest::Approx(-0.03 / 343.0).epsilon(1e-14));
}

TEST_CASE("far-field steering") {
  const auto line = build_linear(3, 0.03);
  const auto dc = steering_far_field(line, 0.0, Direction(0.3, 1.1));
  for (int k = 0; k < 3; ++k) CHECK(dc.entries(k) == std::complex<double>(1.0, 0.0));

  const auto broad = steering_far_field(line, 3000.0, Direction(pi / 2, pi / 2));
  for (int k = 0; k < 3; ++k) CHECK(std::abs(broad.entries(k) - 1.0) < 1e-12);

  const auto d = steering_far_field(line, 1000.0, Direction(0.0, pi / 2), 343.0);
  // -2 pi 1000 (0.03 / 343), frozen from a 30-digit evaluation.
  CHECK(std::arg(d.entries(0)) == doctest::Approx(-0.549549735321830).epsilon(1e-12));
}

TEST_CASE("far-field properties on random inputs") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = test::random_geometry(rng, 2 + trial % 6);
    const double f = 8000.0 * u(rng);
    const Direction dir(2 * pi * u(rng) * 0.9999, pi * u(rng));
    const auto d = steering_far_field(g, f, dir);
    for (Eigen::Index k = 0; k < d.entries.size(); ++k) CHECK(std::abs(std::abs(d.entries(k)) - 1.0) < 1e-12);

    const auto neg = steering_far_field(g, -f, dir);
    CHECK((neg.entries - d.entries.conjugate()).norm() < 1e-12);

    // Rotating geometry and direction together about z changes nothing.
    const double angle = 2 * pi * u(rng);
    const auto rotated = steering_far_field(g.rotated(rotation_z(angle)), f,
                                            Direction::wrapped(dir.azimuth() + angle, dir.polar()));
    CHECK((rotated.entries - d.entries).norm() < 1e-10);
  }
}

TEST_CASE("near-field steering") {
  const ArrayGeometry origin({Vec3::Zero()});
  const auto o = steering_near_field(origin, 1000.0, 2.0, Direction(0.5, 1.0));
  CHECK(std::abs(o.entries(0) - 1.0) < 1e-15);

  const ArrayGeometry pair({Vec3::Zero(), Vec3(0.03, 0.0, 0.0)});
  const auto d = steering_near_field(pair, 1000.0, 1.0, Direction(0.0, pi / 2), 343.0);
  CHECK(std::abs(d.entries(1)) == doctest::Approx(1.0 / 0.97).epsilon(1e-12));
  CHECK(std::arg(d.entries(1)) == doctest::Approx(-2 * pi * 1000.0 * (0.97 - 1.0) / 343.0).epsilon(1e-10));

  CHECK_THROWS_AS(steering_near_field(build_linear(3, 0.03), 1000.0, 0.03, Direction(0, pi / 2)), InvalidArgument);
  CHECK_THROWS_AS(steering_near_field(build_linear(3, 0.03), 1000.0, 0.01, Direction(0, pi / 2)), InvalidArgument);

  // Attenuation is bounded by r / min_k r_k.
  const auto hex = build_circular(6, 0.03);
  const auto near = steering_near_field(hex, 2000.0, 0.1, Direction(0.2, 1.2));
  for (Eigen::Index k = 0; k < near.entries.size(); ++k) CHECK(std::abs(near.entries(k)) <= 0.1 / (0.1 - 0.03) + 1e-12);
}

TEST_CASE("near field converges to far field as range grows") {
  for (const auto& g : {build_linear(3, 0.03), build_rectangular(2, 3, 0.03), build_circular(6, 0.03)}) {
    const double extent = g.max_radius();
    const Direction dir(1.1, pi / 2);
    const auto near = steering_near_field(g, 1000.0, 1e3 * extent, dir);
    const auto far = steering_far_field(g, 1000.0, dir);
    for (Eigen::Index k = 0; k < far.entries.size(); ++k) {
      CHECK(std::abs(std::arg(near.entries(k) / far.entries(k))) < 1e-3);
      CHECK(std::abs(std::abs(near.entries(k)) - 1.0) < 1e-3);
    }
  }
}

TEST_CASE("dispatch and source helpers") {
  const auto g = build_linear(3, 0.03);
  const SourceSpec far = FarField{Direction(0.4, 1.0)};
  const SourceSpec near = NearField{0.5, Direction(0.4, 1.0)};
  CHECK(steering(g, 500.0, far).entries == steering_far_field(g, 500.0, Direction(0.4, 1.0)).entries);
  CHECK(steering(g, 500.0, near).entries == steering_near_field(g, 500.0, 0.5, Direction(0.4, 1.0)).entries);
  const auto moved = with_direction(near, Direction(1.0, 2.0));
  CHECK(std::get<NearField>(moved).range == 0.5);
  CHECK(direction_of(moved).azimuth() == 1.0);
}
