#include "fracstep/special_functions.hpp"

#include <cfloat>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fracstep/compensated_sum.hpp"

namespace fracstep {

namespace {

constexpr int kMaxTerms = 20000;
constexpr long double kAbsTolerance = 1e-13L;

// z^j / Gamma(alpha*j + 1); switches to the log form once Gamma would overflow.
long double series_term(long double alpha, long double z, int j) {
  const long double g_arg = alpha * j + 1.0L;
  if (g_arg < 1700.0L) {
    return std::pow(z, static_cast<long double>(j)) / std::tgamma(g_arg);
  }
  const long double mag = std::exp(j * std::log(std::fabs(z)) - std::lgamma(g_arg));
  return (z < 0 && (j % 2 == 1)) ? -mag : mag;
}

}  // namespace

double mittag_leffler(const MLQuery& q) {
  if (!(q.alpha > 0.0) || q.alpha > 1.0) {
    throw std::invalid_argument("mittag_leffler: alpha must lie in (0, 1], got " +
                                std::to_string(q.alpha));
  }
  if (!std::isfinite(q.z) || std::fabs(q.z) > q.z_max) {
    throw std::domain_error("mittag_leffler: argument outside validated range (|z| = " +
                            std::to_string(std::fabs(q.z)) + ")");
  }
  if (q.z == 0.0) return 1.0;

  const long double alpha = q.alpha;
  const long double z = q.z;
  CompensatedSum<long double> sum(1.0L);
  long double abs_mass = 1.0L;
  int small_run = 0;
  for (int j = 1; j < kMaxTerms; ++j) {
    const long double term = series_term(alpha, z, j);
    sum.add(term);
    abs_mass += std::fabs(term);
    if (!std::isfinite(abs_mass)) break;
    if (std::fabs(term) < 1e-16L * std::fabs(sum.value())) {
      if (++small_run == 3) {
        // Rounding in each term is bounded by a few ulps of that term.
        const long double scale = std::fmax(1.0L, std::fabs(sum.value()));
        if (4.0L * LDBL_EPSILON * abs_mass > kAbsTolerance * scale) break;
        return static_cast<double>(sum.value());
      }
    } else {
      small_run = 0;
    }
  }
  throw std::domain_error("mittag_leffler: argument outside validated range (series too "
                          "ill-conditioned at z = " + std::to_string(q.z) + ")");
}

}  // namespace fracstep
