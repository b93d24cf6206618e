#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fracstep/cq_kernel.hpp"
#include "fracstep/properties.hpp"

using namespace fracstep;

TEST_CASE("FBDF2 with alpha = 1 is the BDF2 stencil") {
  const auto w = base_weights({GeneratorKind::FBDF2, 1.0}, 3);
  REQUIRE(w.size() == 4);
  CHECK(w[0] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(w[1] == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(w[2] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(w[3]) < 1e-15);
}

TEST_CASE("leading weights") {
  // Taylor coefficients of sqrt(3/2 - 2z + z^2/2), frozen from a 30-digit expansion.
  const auto f = base_weights({GeneratorKind::FBDF2, 0.5}, 3);
  CHECK(f[0] == doctest::Approx(1.224744871391589).epsilon(1e-14));
  CHECK(f[1] == doctest::Approx(-0.816496580927726).epsilon(1e-14));
  CHECK(f[2] == doctest::Approx(-0.06804138174397717).epsilon(1e-13));
  CHECK(f[3] == doctest::Approx(-0.04536092116265145).epsilon(1e-13));
  for (double a : {0.1, 0.37, 0.9}) {
    const auto fa = base_weights({GeneratorKind::FBDF2, a}, 2);
    CHECK(fa[1] == doctest::Approx(-(4.0 * a / 3.0) * std::pow(1.5, a)).epsilon(1e-14));
    const auto g = base_weights({GeneratorKind::GNG2, a}, 1);
    CHECK(g[0] == doctest::Approx(1.0 + a / 2).epsilon(1e-15));
  }
}

TEST_CASE("averaged weights") {
  const WeightSequence base({1.5, -2.0, 0.5}, WeightKind::Base, {GeneratorKind::FBDF2, 1.0});
  const auto avg = averaged_weights(base);
  CHECK(avg.kind() == WeightKind::Averaged);
  CHECK(avg[0] == 0.75);
  CHECK(avg[1] == -0.25);
  CHECK(avg[2] == -0.75);
  const auto half = averaged_weights(base_weights({GeneratorKind::FBDF2, 0.5}, 4));
  CHECK(half[0] == doctest::Approx(0.6123724356957945).epsilon(1e-14));
  CHECK_THROWS_AS(averaged_weights(avg), std::invalid_argument);
}

TEST_CASE("weight generation rejects bad input") {
  CHECK_THROWS_AS(base_weights({GeneratorKind::GNG2, 0.5}, 0), std::invalid_argument);
  CHECK_THROWS_AS(base_weights({GeneratorKind::GNG2, 0.0}, 4), std::invalid_argument);
  CHECK_THROWS_AS(base_weights({GeneratorKind::FBDF2, 1.2}, 4), std::invalid_argument);
  CHECK_THROWS_AS(validate(Generator{GeneratorKind::FBDF2, 1.0}), std::invalid_argument);
}

TEST_CASE("symbol closed forms") {
  for (double a : {0.2, 0.5, 0.8}) {
    const auto f = symbol({GeneratorKind::FBDF2, a}, -1.0);
    CHECK(f.real() == doctest::Approx(std::pow(4.0, a)).epsilon(1e-14));
    CHECK(std::abs(f.imag()) < 1e-15);
    const auto g = symbol({GeneratorKind::GNG2, a}, -1.0);
    CHECK(g.real() == doctest::Approx(std::pow(2.0, a) * (1 + a)).epsilon(1e-14));
    CHECK(std::abs(symbol({GeneratorKind::FBDF2, a}, 1.0)) == 0.0);
    CHECK(std::abs(symbol({GeneratorKind::GNG2, a}, 1.0)) == 0.0);
  }
}

TEST_CASE("weights decay like n^{-alpha-1}") {
  for (auto kind : {GeneratorKind::FBDF2, GeneratorKind::GNG2}) {
    for (double a : {0.25, 0.5, 0.75}) {
      const auto w = base_weights({kind, a}, 2048);
      std::vector<double> n, y;
      for (std::size_t k = 128; k <= 2048; ++k) {
        n.push_back(static_cast<double>(k));
        y.push_back(w[k]);
      }
      CHECK(std::abs(loglog_slope(n, y) + a + 1.0) <= 0.1);
    }
  }
}

TEST_CASE("consistency residual is second order") {
  for (auto kind : {GeneratorKind::FBDF2, GeneratorKind::GNG2}) {
    const Generator g{kind, 0.5};
    // C fitted at tau = 1e-2 bounds the residual at 1e-3 well below 1e-5.
    const double c = consistency_residual(g, 1e-2) / 1e-4;
    CHECK(consistency_residual(g, 1e-3) <= 1.1 * c * 1e-6);
    CHECK(consistency_residual(g, 1e-3) <= 1e-5);
    for (double tau : {1e-2, 5e-3, 2.5e-3}) {
      const double r = std::log2(consistency_residual(g, tau) / consistency_residual(g, tau / 2));
      CHECK(r >= 1.9);
      CHECK(r <= 2.1);
    }
  }
  CHECK_THROWS_AS(consistency_residual({GeneratorKind::FBDF2, 0.5}, 0.0), std::invalid_argument);
}

TEST_CASE("discrete derivative") {
  const auto w = base_weights({GeneratorKind::FBDF2, 0.5}, 64);
  SUBCASE("zero samples") {
    const std::vector<double> zeros(65, 0.0);
    for (double v : apply_discrete_derivative(w, 1.0 / 64, zeros)) CHECK(v == 0.0);
  }
  SUBCASE("length mismatch") {
    const std::vector<double> too_long(66, 1.0);
    CHECK_THROWS_AS(apply_discrete_derivative(w, 1.0 / 64, too_long), std::invalid_argument);
  }
  SUBCASE("t^2 converges at second order") {
    const double a = 0.5;
    const double exact = 2.0 / std::tgamma(3.0 - a);  // at t = 1
    std::vector<double> errs;
    for (std::size_t n : {64u, 128u, 256u}) {
      const auto wn = base_weights({GeneratorKind::FBDF2, a}, n);
      std::vector<double> s(n + 1);
      for (std::size_t k = 0; k <= n; ++k) s[k] = std::pow(static_cast<double>(k) / n, 2);
      errs.push_back(std::abs(apply_discrete_derivative(wn, 1.0 / n, s)[n] - exact));
    }
    CHECK(std::log2(errs[0] / errs[1]) >= 1.9);
    CHECK(std::log2(errs[1] / errs[2]) >= 1.9);
  }
  SUBCASE("constant converges to t^{-alpha}/Gamma(1-alpha)") {
    for (double a : {0.25, 0.5, 0.75}) {
      const double exact = 1.0 / std::tgamma(1.0 - a);  // at t = 1
      std::vector<double> errs;
      for (std::size_t n : {64u, 128u, 256u, 512u}) {
        const auto wn = base_weights({GeneratorKind::FBDF2, a}, n);
        const std::vector<double> ones(n + 1, 1.0);
        errs.push_back(std::abs(apply_discrete_derivative(wn, 1.0 / n, ones)[n] - exact));
      }
      const double rate = std::log2(errs[2] / errs[3]);
      MESSAGE("alpha = " << a << ": observed rate for the constant " << rate);
      CHECK(rate >= a);
    }
  }
}
