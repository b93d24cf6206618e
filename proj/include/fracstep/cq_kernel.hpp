#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace fracstep {

// Convolution quadrature (CQ) weights for second-order generating functions.
//
//   FBDF2:  w(z) = (3/2 - 2z + z^2/2)^alpha
//   GNG2:   w(z) = (1 - z)^alpha * (1 + alpha/2 * (1 - z))
//
// The averaged (Crank-Nicolson) weights have symbol (1 + z)/2 * w(z).

enum class GeneratorKind { FBDF2, GNG2 };

std::string_view to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(std::string_view name);

struct Generator {
  GeneratorKind kind = GeneratorKind::FBDF2;
  double alpha = 0.5;
};

/// Throws unless alpha lies in (0, 1). With allow_unit_order, alpha = 1 is accepted too.
void validate(const Generator& g, bool allow_unit_order = false);

enum class WeightKind { Base, Averaged };

/// Immutable prefix {w_0, ..., w_N} of a CQ weight series.
class WeightSequence {
 public:
  WeightSequence(std::vector<double> values, WeightKind kind, Generator generator);

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const { return values_.size(); }
  WeightKind kind() const { return kind_; }
  const Generator& generator() const { return generator_; }

 private:
  std::vector<double> values_;
  WeightKind kind_;
  Generator generator_;
};

/// Taylor coefficients w_0..w_{n_terms} of the generating function.
/// alpha = 1 is admitted so integer-coefficient cases can be checked exactly.
WeightSequence base_weights(const Generator& g, std::size_t n_terms);

/// w_k = (base_k + base_{k-1}) / 2 with base_{-1} = 0.
WeightSequence averaged_weights(const WeightSequence& base);

/// Closed-form generating function, analytic in the unit disc.
std::complex<double> symbol(const Generator& g, std::complex<double> zeta);

/// |tau^{-alpha} w(e^{-tau}) - 1|, which is O(tau^2) for both generators.
double consistency_residual(const Generator& g, double tau);

/// out[n] = tau^{-alpha} * sum_{k<=n} w_{n-k} samples[k] for every n.
std::vector<double> apply_discrete_derivative(const WeightSequence& w, double tau,
                                              std::span<const double> samples);

}  // namespace fracstep
