#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fracstep/special_functions.hpp"

using fracstep::mittag_leffler;
using fracstep::MLQuery;

TEST_CASE("E_alpha(0) is exactly one") {
  for (double a : {0.05, 0.5, 0.999, 1.0}) CHECK(mittag_leffler(a, 0.0) == 1.0);
}

TEST_CASE("alpha = 1 reduces to the exponential") {
  CHECK(mittag_leffler(1.0, -1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  for (double z = -5.0; z <= 0.0; z += 0.125) {
    CHECK(std::abs(mittag_leffler(1.0, z) - std::exp(z)) <= 1e-13);
  }
}

TEST_CASE("alpha = 1/2 matches exp(z^2) erfc(-z)") {
  // Frozen from a 30-digit series sum; equals e^{1/4} erfc(1/2).
  CHECK(std::abs(mittag_leffler(0.5, -0.5) - 0.6156903441929259) <= 1e-14);
  CHECK(std::abs(mittag_leffler(0.5, -0.5) - std::exp(0.25) * std::erfc(0.5)) <= 1e-14);
  for (double z = -2.0; z <= 0.0; z += 0.01) {
    CHECK(std::abs(mittag_leffler(0.5, z) - std::exp(z * z) * std::erfc(-z)) <= 1e-11);
  }
}

TEST_CASE("relaxation profile is strictly decreasing") {
  for (double a : {0.1, 0.5, 0.9}) {
    double prev = 1.0;
    for (int i = 1; i <= 1000; ++i) {
      const double v = mittag_leffler(a, -std::pow(i / 1000.0, a));
      REQUIRE(v < prev);
      REQUIRE(v > 0.0);
      prev = v;
    }
  }
}

TEST_CASE("invalid queries are refused") {
  CHECK_THROWS_AS(mittag_leffler(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(mittag_leffler(-0.3, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(mittag_leffler(1.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(mittag_leffler(0.5, 10.5), std::domain_error);
  CHECK_THROWS_AS(mittag_leffler(0.5, -11.0), std::domain_error);
  CHECK_THROWS_AS(mittag_leffler(MLQuery{0.5, 3.0, 2.0}), std::domain_error);
  // Inside z_max but hopelessly cancelling in double precision.
  CHECK_THROWS_AS(mittag_leffler(0.1, -10.0), std::domain_error);
}

TEST_CASE("positive arguments are summed without cancellation") {
  CHECK(mittag_leffler(1.0, 3.0) == doctest::Approx(std::exp(3.0)).epsilon(1e-14));
  CHECK(mittag_leffler(0.5, 1.5) ==
        doctest::Approx(std::exp(2.25) * std::erfc(-1.5)).epsilon(1e-13));
}
