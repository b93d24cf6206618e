#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracstep/cq_kernel.hpp"
#include "fracstep/spatial.hpp"

namespace fracstep {

enum class SchemeFamily { ACN, MACN, BDF2Plain };

std::string_view to_string(SchemeFamily family);
SchemeFamily parse_scheme_family(std::string_view name);

/// Time-stepping scheme bound to a CQ generator.
///
/// ACN averages the CQ derivative at t_n and t_{n-1} and pairs it with a
/// Crank-Nicolson average of the spatial operator. MACN additionally adds
/// a1 (resp. a2) times the data vector f_h(0) + Delta_h v_h at steps 1 and 2;
/// removing the pole of the error symbol at zeta = -1 requires
/// 1/2 + a1 - a2 = 0, and second order fixes (a1, a2) = (-1/4, 1/4).
/// BDF2Plain is the unaveraged, uncorrected CQ scheme.
class SchemeSpec {
 public:
  static SchemeSpec acn(Generator g);
  static SchemeSpec macn(Generator g, double a1 = -0.25, double a2 = 0.25);
  static SchemeSpec bdf2_plain(Generator g);

  SchemeFamily family() const { return family_; }
  const Generator& generator() const { return generator_; }
  double a1() const { return a1_; }
  double a2() const { return a2_; }

 private:
  SchemeSpec(SchemeFamily f, Generator g, double a1, double a2)
      : family_(f), generator_(g), a1_(a1), a2_(a2) {}

  SchemeFamily family_;
  Generator generator_;
  double a1_;
  double a2_;
};

/// Problem for  d_t^alpha u - u_xx = f  on (0, pi) x (0, T], u = 0 on the boundary.
struct ProblemSpec {
  InitialDatum u0;
  SpaceTimeFunction f;
  std::optional<SpaceTimeFunction> exact;
  double T = 1.0;
  std::string label;
};

struct Trajectory {
  std::vector<GridFunction> states;  // U^0 .. U^N
  double tau = 0.0;
  SchemeSpec scheme;
};

enum class HistoryMode { Naive, Fast };

/// Runs N uniform steps with tau = T / N.
Trajectory run(const SchemeSpec& scheme, const SpatialDiscretization& disc, const ProblemSpec& prob,
               std::size_t n_steps, HistoryMode history = HistoryMode::Naive);

/// Oscillatory residue component of the ACN error,
///   I_3^n = (-1)^n (tau^{-alpha} w(-1) - Delta_h)^{-1} (Delta_h v_h + f_h(0)),
/// so that u(t_n) - U^n = I_3^n + O(tau^2) for the ACN solution.
GridFunction residue_term(const SchemeSpec& scheme, const SpatialDiscretization& disc,
                          const ProblemSpec& prob, double tau, std::size_t n);

/// sum_{k<n} w_{n-k} M W^k via the blocked FFT convolver. W^k = states[k].
GridFunction fast_history_sum(const WeightSequence& weights, const SpatialDiscretization& disc,
                              std::span<const GridFunction> states, std::size_t n);

/// Same sum by direct accumulation; reference for fast_history_sum.
GridFunction naive_history_sum(const WeightSequence& weights, const SpatialDiscretization& disc,
                               std::span<const GridFunction> states, std::size_t n);

}  // namespace fracstep
