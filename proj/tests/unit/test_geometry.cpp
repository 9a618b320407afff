#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "arraycap/error.hpp"
#include "arraycap/geometry.hpp"
#include "test_support.hpp"

using namespace arraycap;

TEST_CASE("linear builder") {
  const auto g = build_linear(3, 0.03);
  REQUIRE(g.size() == 3);
  CHECK(g.position(0).x() == doctest::Approx(-0.03).epsilon(1e-15));
  CHECK(g.position(1).x() == 0.0);
  CHECK(g.position(2).x() == doctest::Approx(0.03).epsilon(1e-15));
  CHECK(pairwise_distances(g)(0, 2) == doctest::Approx(0.06).epsilon(1e-14));

  const auto one = build_linear(1, 0.03);
  CHECK(one.size() == 1);
  CHECK(one.position(0).norm() == 0.0);

  CHECK_THROWS_AS(build_linear(0, 0.03), InvalidArgument);
  CHECK_THROWS_AS(build_linear(3, 0.0), InvalidArgument);
  CHECK_THROWS_AS(build_linear(3, -1.0), InvalidArgument);
}

TEST_CASE("rectangular builder") {
  const auto g = build_rectangular(2, 3, 0.03);
  CHECK(g.size() == 6);
  const auto d = pairwise_distances(g);
  double nearest = 1.0;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j) nearest = std::min(nearest, d(i, j));
  CHECK(nearest == doctest::Approx(0.03).epsilon(1e-13));
  // Row index advances along y.
  CHECK(g.position(3).y() > g.position(0).y());
  CHECK(g.position(1).x() > g.position(0).x());

  const auto degenerate = build_rectangular(1, 3, 0.03);
  const auto line = build_linear(3, 0.03);
  for (std::size_t i = 0; i < 3; ++i) CHECK(degenerate.position(i) == line.position(i));

  const auto square = build_rectangular(2, 2, 0.03);
  CHECK(pairwise_distances(square)(0, 3) == doctest::Approx(0.03 * std::sqrt(2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(build_rectangular(0, 2, 0.03), InvalidArgument);
}

TEST_CASE("circular builder") {
  const auto hex = build_circular(6, 0.03);
  for (const auto& p : hex.positions()) CHECK(std::abs(p.norm() - 0.03) < 1e-15);
  CHECK(hex.position(0).y() == 0.0);
  CHECK(hex.position(0).x() > 0.0);
  // Chords recomputed from the emitted positions.
  for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs((hex.position(k) - hex.position((k + 1) % 6)).norm() - 0.03) < 1e-12);

  const auto sq = build_circular(4, 0.03);
  CHECK(sq.position(0).norm() == doctest::Approx(0.03 / std::sqrt(2.0)).epsilon(1e-14));

  // Brute-force maximum over pairs.
  const auto d = pairwise_distances(hex);
  double far = 0.0;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) far = std::max(far, d(i, j));
  CHECK(far == doctest::Approx(0.06).epsilon(1e-14));

  CHECK_THROWS_AS(build_circular(1, 0.03), InvalidArgument);
}

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(ArrayGeometry({}), InvalidArgument);
  CHECK_THROWS_AS(ArrayGeometry({Vec3(0, 0, 0), Vec3(0, 0, 0)}), InvalidArgument);
  CHECK_THROWS_AS(ArrayGeometry({Vec3(std::nan(""), 0, 0)}), InvalidArgument);
  CHECK_THROWS_AS(ArrayGeometry({Vec3(0, 0, 0)}, {"a", "b"}), InvalidArgument);
}

TEST_CASE("builders are centered and distance matrices are well formed") {
  for (const auto& g : {build_linear(5, 0.02), build_rectangular(3, 4, 0.025), build_circular(7, 0.03),
                        build_rectangular(2, 3, 0.03)}) {
    CHECK(g.centroid().norm() < 1e-12);
    const auto d = pairwise_distances(g);
    CHECK(d.matrix() == d.matrix().transpose());
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(d(i, i) == 0.0);
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (i != j) CHECK(d(i, j) > 0.0);
        for (std::size_t k = 0; k < g.size(); ++k) CHECK(d(i, k) <= d(i, j) + d(j, k) + 1e-15);
      }
    }
  }
}

TEST_CASE("pairwise distances are invariant under rigid rotation") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = test::random_geometry(rng, 2 + trial % 7);
    const auto r = test::random_rotation(rng);
    const auto a = pairwise_distances(g).matrix();
    const auto b = pairwise_distances(g.rotated(r)).matrix();
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("geometry file round trip and errors") {
  const auto g = build_circular(6, 0.03);
  std::stringstream ss;
  write_geometry(ss, g);
  const auto back = read_geometry(ss);
  REQUIRE(back.size() == g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(back.position(i) == g.position(i));
    CHECK(back.labels()[i] == g.labels()[i]);
  }

  std::stringstream bad1(R"({"microphones": [{"label": "a", "x_m": 0, "y_m": 0}]})");
  CHECK_THROWS_AS(read_geometry(bad1), ParseError);
  std::stringstream bad2(R"({"mics": []})");
  CHECK_THROWS_AS(read_geometry(bad2), ParseError);
  std::stringstream bad3("not json");
  CHECK_THROWS_AS(read_geometry(bad3), ParseError);
  std::stringstream dup(R"({"microphones": [{"x_m": 0, "y_m": 0, "z_m": 0}, {"x_m": 0, "y_m": 0, "z_m": 0}]})");
  CHECK_THROWS_AS(read_geometry(dup), ParseError);
  CHECK_THROWS_AS(load_geometry("/nonexistent/geometry.json"), IoError);
}
