#include <doctest.h>

#include <numbers>
#include <sstream>

#include "arraycap/error.hpp"
#include "arraycap/scattering.hpp"

using namespace arraycap;
constexpr double pi = std::numbers::pi;

namespace {

// Scattered field linear in frequency: d_S = (f / 1000) * (mic + 1) * (1 + 0.5j).
ScatteringTable linear_in_f() {
  std::vector<double> f{500.0, 1500.0}, az{0.0, pi / 2, pi, 1.5 * pi}, pol{pi / 2};
  std::vector<std::complex<double>> s;
  for (double fv : f)
    for (std::size_t a = 0; a < az.size(); ++a)
      for (std::size_t p = 0; p < pol.size(); ++p)
        for (int m = 0; m < 3; ++m) s.emplace_back(fv / 1000.0 * (m + 1), 0.5 * fv / 1000.0 * (m + 1));
  return ScatteringTable(f, az, pol, 3, s);
}

}  // namespace

TEST_CASE("zero table leaves the incident field unchanged") {
  const auto g = build_linear(3, 0.03);
  const auto table = ScatteringTable::zeros({100.0, 2000.0}, {0.0, pi}, {0.0, pi}, 3);
  const auto inc = steering_far_field(g, 1000.0, Direction(0.3, 1.0));
  CHECK(total_steering(inc, table).entries == inc.entries);
}

TEST_CASE("grid node lookups are exact and midpoints interpolate linearly") {
  const auto table = linear_in_f();
  const auto node = table.interpolate(1500.0, Direction(pi / 2, pi / 2));
  for (int m = 0; m < 3; ++m) CHECK(node(m) == table.sample(1, 1, 0, static_cast<std::size_t>(m)));

  const auto mid = table.interpolate(1000.0, Direction(pi / 4, pi / 2));
  for (int m = 0; m < 3; ++m) {
    CHECK(std::abs(mid(m) - std::complex<double>(1.0 * (m + 1), 0.5 * (m + 1))) < 1e-14);
  }
  const auto g = build_linear(3, 0.03);
  const auto inc = steering_far_field(g, 1000.0, Direction(pi / 4, pi / 2));
  const auto total = total_steering(inc, table);
  CHECK((total.entries - inc.entries - mid).norm() < 1e-14);
}

TEST_CASE("queries outside the grid hull are rejected") {
  const auto table = linear_in_f();
  CHECK_THROWS_AS(table.interpolate(400.0, Direction(0.0, pi / 2)), OutOfRange);
  CHECK_THROWS_AS(table.interpolate(1000.0, Direction(1.6 * pi, pi / 2)), OutOfRange);
  CHECK_THROWS_AS(table.interpolate(1000.0, Direction(0.0, 1.0)), OutOfRange);
}

TEST_CASE("table construction validation") {
  CHECK_THROWS_AS(ScatteringTable({2.0, 1.0}, {0.0}, {0.0}, 1, std::vector<std::complex<double>>(2)), InvalidArgument);
  CHECK_THROWS_AS(ScatteringTable({1.0}, {0.0}, {0.0}, 2, std::vector<std::complex<double>>(1)), InvalidArgument);
}

TEST_CASE("file round trip") {
  const auto table = linear_in_f();
  std::stringstream ss;
  write_scattering_table(ss, table);
  const auto back = read_scattering_table(ss);
  CHECK(back == table);
  CHECK(back.frequencies().size() == 2);
  CHECK(back.azimuths().size() == 4);
  CHECK(back.polars().size() == 1);
  CHECK(back.mic_count() == 3);
  CHECK(back.samples().size() == 24);
}

TEST_CASE("rows may come in any order") {
  std::stringstream ss(
      "freq_hz,azimuth_rad,polar_rad,mic_index,re,im\n"
      "2,0,0,1,4,0\n"
      "1,0,0,0,1,0\n"
      "2,0,0,0,3,0\n"
      "1,0,0,1,2,0\n");
  const auto t = read_scattering_table(ss);
  CHECK(t.sample(1, 0, 0, 1) == std::complex<double>(4.0, 0.0));
  CHECK(t.sample(0, 0, 0, 0) == std::complex<double>(1.0, 0.0));
}

TEST_CASE("parse errors") {
  auto parse = [](const std::string& text) {
    std::stringstream ss(text);
    return read_scattering_table(ss);
  };
  const std::string header = "freq_hz,azimuth_rad,polar_rad,mic_index,re,im\n";
  CHECK_THROWS_WITH_AS(parse(header + "1,0,0,0,1,0\n1,0,0,0,2,0\n"), doctest::Contains("line 3"), ParseError);
  CHECK_THROWS_WITH_AS(parse(header + "1,0,0,0,1\n"), doctest::Contains("line 2"), ParseError);
  CHECK_THROWS_WITH_AS(parse(header + "1,0,0,0,abc,0\n"), doctest::Contains("line 2"), ParseError);
  CHECK_THROWS_WITH_AS(parse(header + "1,0,0,0,1,0\n2,0,0,1,1,0\n"), doctest::Contains("missing grid node"), ParseError);
  CHECK_THROWS_AS(parse("1,0,0,0,1,0\n"), ParseError);
  CHECK_THROWS_AS(parse(header), ParseError);
  CHECK_THROWS_AS(parse(header + "1,0,0,-1,1,0\n"), ParseError);
  CHECK_THROWS_AS(load_scattering_table("/nonexistent.csv"), IoError);
}
