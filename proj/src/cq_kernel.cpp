#include "fracstep/cq_kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fracstep/compensated_sum.hpp"

namespace fracstep {

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::FBDF2: return "fbdf2";
    case GeneratorKind::GNG2: return "gng2";
  }
  return "unknown";
}

GeneratorKind parse_generator_kind(std::string_view name) {
  if (name == "fbdf2") return GeneratorKind::FBDF2;
  if (name == "gng2") return GeneratorKind::GNG2;
  throw std::invalid_argument("unknown generator '" + std::string(name) + "'");
}

void validate(const Generator& g, bool allow_unit_order) {
  const bool ok = g.alpha > 0.0 && (g.alpha < 1.0 || (allow_unit_order && g.alpha == 1.0));
  if (!ok) {
    throw std::invalid_argument("fractional order alpha = " + std::to_string(g.alpha) +
                                (allow_unit_order ? " outside (0, 1]" : " outside (0, 1)"));
  }
}

WeightSequence::WeightSequence(std::vector<double> values, WeightKind kind, Generator generator)
    : values_(std::move(values)), kind_(kind), generator_(generator) {
  if (values_.empty()) throw std::invalid_argument("WeightSequence: empty");
}

namespace {

// Coefficients of (1 - z)^alpha: b_0 = 1, b_k = b_{k-1} (k - 1 - alpha) / k.
std::vector<double> binomial_series(double alpha, std::size_t n_terms) {
  std::vector<double> b(n_terms + 1);
  b[0] = 1.0;
  for (std::size_t k = 1; k <= n_terms; ++k) {
    b[k] = b[k - 1] * (static_cast<double>(k) - 1.0 - alpha) / static_cast<double>(k);
  }
  return b;
}

}  // namespace

WeightSequence base_weights(const Generator& g, std::size_t n_terms) {
  if (n_terms == 0) throw std::invalid_argument("base_weights: n_terms must be >= 1");
  validate(g, /*allow_unit_order=*/true);

  const double alpha = g.alpha;
  const std::vector<double> b = binomial_series(alpha, n_terms);
  std::vector<double> w(n_terms + 1);

  if (g.kind == GeneratorKind::FBDF2) {
    // (3/2)^alpha (1 - z)^alpha (1 - z/3)^alpha; the second factor decays like 3^{-k}.
    std::vector<double> c;
    double scale = 1.0;
    for (std::size_t k = 0; k <= n_terms; ++k) {
      const double ck = b[k] * scale;
      if (k > 0 && std::abs(ck) < 1e-18) break;
      c.push_back(ck);
      scale /= 3.0;
    }
    const double lead = std::pow(1.5, alpha);
    for (std::size_t n = 0; n <= n_terms; ++n) {
      CompensatedSum<double> acc;
      const std::size_t jmax = std::min(n, c.size() - 1);
      for (std::size_t j = 0; j <= jmax; ++j) acc.add(c[j] * b[n - j]);
      w[n] = lead * acc.value();
    }
  } else {
    const double half = 0.5 * alpha;
    w[0] = (1.0 + half) * b[0];
    for (std::size_t k = 1; k <= n_terms; ++k) w[k] = (1.0 + half) * b[k] - half * b[k - 1];
  }
  return WeightSequence(std::move(w), WeightKind::Base, g);
}

WeightSequence averaged_weights(const WeightSequence& base) {
  if (base.kind() != WeightKind::Base) {
    throw std::invalid_argument("averaged_weights: input is already averaged");
  }
  std::vector<double> w(base.size());
  w[0] = base[0] / 2;
  for (std::size_t k = 1; k < base.size(); ++k) w[k] = (base[k] + base[k - 1]) / 2;
  return WeightSequence(std::move(w), WeightKind::Averaged, base.generator());
}

std::complex<double> symbol(const Generator& g, std::complex<double> zeta) {
  using C = std::complex<double>;
  const double alpha = g.alpha;
  const C one_minus = 1.0 - zeta;
  if (one_minus == C(0.0)) return C(0.0);
  const C base_pow = std::pow(one_minus, alpha);
  if (g.kind == GeneratorKind::FBDF2) {
    return std::pow(1.5, alpha) * base_pow * std::pow(1.0 - zeta / 3.0, alpha);
  }
  return base_pow * (1.0 + 0.5 * alpha * one_minus);
}

double consistency_residual(const Generator& g, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("consistency_residual: tau must be positive");
  const double alpha = g.alpha;
  // 1 - e^{-tau} without cancellation.
  const double d = -std::expm1(-tau);
  double value = 0.0;
  if (g.kind == GeneratorKind::FBDF2) {
    // (3/2)(1 - z)(1 - z/3) with 1 - z/3 = (2 + d)/3.
    value = std::pow(1.5 * d * (2.0 + d) / 3.0, alpha);
  } else {
    value = std::pow(d, alpha) * (1.0 + 0.5 * alpha * d);
  }
  return std::abs(std::pow(tau, -alpha) * value - 1.0);
}

std::vector<double> apply_discrete_derivative(const WeightSequence& w, double tau,
                                              std::span<const double> samples) {
  if (samples.size() > w.size()) {
    throw std::invalid_argument("apply_discrete_derivative: " + std::to_string(samples.size()) +
                                " samples but only " + std::to_string(w.size()) + " weights");
  }
  if (!(tau > 0.0)) throw std::invalid_argument("apply_discrete_derivative: tau must be positive");
  const double scale = std::pow(tau, -w.generator().alpha);
  std::vector<double> out(samples.size());
  for (std::size_t n = 0; n < samples.size(); ++n) {
    CompensatedSum<double> acc;
    for (std::size_t k = 0; k <= n; ++k) acc.add(w[n - k] * samples[k]);
    out[n] = scale * acc.value();
  }
  return out;
}

}  // namespace fracstep
