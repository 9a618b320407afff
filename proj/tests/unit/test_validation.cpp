#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "arraycap/special.hpp"
#include "arraycap/validation.hpp"

using namespace arraycap;

TEST_CASE("oracles agree with simple values") {
  CHECK(oracle::sinc_series(0.0) == 1.0);
  CHECK(oracle::sinc_series(std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(oracle::bessel_j0_series(0.0) == 1.0);
  CHECK(std::abs(oracle::bessel_j0_series(2.404825557695773)) < 1e-15);
  Eigen::VectorXcd d(2);
  d << 1.0, std::complex<double>(0.0, 1.0);
  CHECK(oracle::quadratic_form_direct(d, Eigen::MatrixXcd::Identity(2, 2) * 2.0) == doctest::Approx(1.0));
}

TEST_CASE("random instances are reproducible") {
  std::mt19937_64 a(5), b(5);
  for (std::size_t i = 0; i < 10; ++i) {
    const auto x = random_instance(a, i);
    const auto y = random_instance(b, i);
    CHECK(x.setup.geometry.positions() == y.setup.geometry.positions());
    CHECK(x.frequency == y.frequency);
    CHECK(x.setup.geometry.size() >= 2);
    CHECK(x.setup.geometry.size() <= 8);
  }
}

TEST_CASE("default validation passes") {
  auto options = default_validation_options();
  options.random_instances = 60;
  const auto results = run_validation(options);
  CHECK(results.size() >= 5);
  for (const auto& r : results) CHECK_MESSAGE(r.passed, r.name << ": " << r.detail);
}

TEST_CASE("a corrupted sinc is reported by name") {
  auto options = default_validation_options();
  options.random_instances = 10;
  options.sinc = [](double x) { return special::sinc(x) * (1.0 + 1e-6); };
  const auto results = run_validation(options);
  const auto it = std::find_if(results.begin(), results.end(), [](const CheckResult& r) { return r.name == "sinc oracle"; });
  REQUIRE(it != results.end());
  CHECK_FALSE(it->passed);
  CHECK(std::any_of(results.begin(), results.end(), [](const CheckResult& r) { return !r.passed; }));
}
