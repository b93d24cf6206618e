#pragma once

namespace fracstep {

/// Arguments for the one-parameter Mittag-Leffler function E_alpha(z).
struct MLQuery {
  double alpha = 0.5;
  double z = 0.0;
  /// Largest |z| accepted; beyond this the power series loses double precision.
  double z_max = 10.0;
};

/// E_alpha(z) = sum_j z^j / Gamma(alpha*j + 1) for real z and alpha in (0, 1].
///
/// The series is summed term by term in extended precision with compensated
/// accumulation. Throws std::invalid_argument for alpha outside (0, 1] and
/// std::domain_error when |z| > z_max or when cancellation in the series
/// would spoil the 1e-13 absolute accuracy target.
double mittag_leffler(const MLQuery& q);

inline double mittag_leffler(double alpha, double z) {
  return mittag_leffler(MLQuery{alpha, z});
}

}  // namespace fracstep
