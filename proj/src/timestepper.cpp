#include "fracstep/timestepper.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fracstep/history.hpp"

namespace fracstep {

namespace {

void axpy(double a, std::span<const double> x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

std::vector<double> difference(std::span<const double> a, std::span<const double> b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

void check_dirichlet(const SpatialDiscretization& disc, const ProblemSpec& prob) {
  if (disc.mode() != SpaceMode::FEM) return;
  const double left = prob.u0.value(0.0);
  const double right = prob.u0.value(std::numbers::pi);
  if (std::abs(left) > 1e-12 || std::abs(right) > 1e-12) {
    throw std::invalid_argument("initial datum violates the Dirichlet boundary condition");
  }
}

// F^0 - A v_h, the data vector f_h(0) + Delta_h v_h in dual form.
std::vector<double> data_vector(const SpatialDiscretization& disc, const ProblemSpec& prob,
                                const GridFunction& v) {
  const GridFunction f0 = load_vector(disc, prob.f, 0.0);
  return difference(f0.values, disc.apply_stiffness(v.values));
}

}  // namespace

std::string_view to_string(SchemeFamily family) {
  switch (family) {
    case SchemeFamily::ACN: return "acn";
    case SchemeFamily::MACN: return "macn";
    case SchemeFamily::BDF2Plain: return "bdf2";
  }
  return "unknown";
}

SchemeFamily parse_scheme_family(std::string_view name) {
  if (name == "acn") return SchemeFamily::ACN;
  if (name == "macn") return SchemeFamily::MACN;
  if (name == "bdf2") return SchemeFamily::BDF2Plain;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

SchemeSpec SchemeSpec::acn(Generator g) {
  validate(g);
  return {SchemeFamily::ACN, g, 0.0, 0.0};
}

SchemeSpec SchemeSpec::macn(Generator g, double a1, double a2) {
  validate(g);
  if (!std::isfinite(a1) || !std::isfinite(a2) || std::abs(0.5 + a1 - a2) > 1e-12) {
    throw std::invalid_argument("MACN coefficients must satisfy 1/2 + a1 - a2 = 0 (got a1 = " +
                                std::to_string(a1) + ", a2 = " + std::to_string(a2) + ")");
  }
  return {SchemeFamily::MACN, g, a1, a2};
}

SchemeSpec SchemeSpec::bdf2_plain(Generator g) {
  validate(g);
  return {SchemeFamily::BDF2Plain, g, 0.0, 0.0};
}

Trajectory run(const SchemeSpec& scheme, const SpatialDiscretization& disc, const ProblemSpec& prob,
               std::size_t n_steps, HistoryMode history) {
  if (!(prob.T > 0.0)) throw std::invalid_argument("run: final time must be positive");
  if (n_steps == 0) throw std::invalid_argument("run: need at least one step");
  if (scheme.family() == SchemeFamily::MACN && n_steps < 3) {
    throw std::invalid_argument("run: MACN needs at least 3 steps");
  }
  check_dirichlet(disc, prob);

  const double alpha = scheme.generator().alpha;
  const double tau = prob.T / static_cast<double>(n_steps);
  const double scale = std::pow(tau, -alpha);
  const bool averaged = scheme.family() != SchemeFamily::BDF2Plain;

  const WeightSequence base = base_weights(scheme.generator(), n_steps);
  const WeightSequence weights = averaged ? averaged_weights(base) : base;
  const double sigma = scale * weights[0];
  const double kappa = averaged ? 0.5 : 1.0;

  const std::size_t dim = disc.size();
  const GridFunction v = ritz_projection(disc, prob.u0);
  const GridFunction f0 = load_vector(disc, prob.f, 0.0);
  const std::vector<double> data = difference(f0.values, disc.apply_stiffness(v.values));

  std::vector<std::vector<double>> w_states;
  w_states.reserve(n_steps + 1);
  w_states.emplace_back(dim, 0.0);

  std::optional<HistoryConvolver> convolver;
  if (history == HistoryMode::Fast) {
    convolver.emplace(weights, dim, n_steps);
    convolver->push(w_states[0]);
  }

  std::vector<double> g_prev(dim, 0.0);  // G^0 = 0
  std::vector<double> hist(dim);
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double t_n = static_cast<double>(n) * tau;

    if (convolver) {
      const auto h = convolver->current();
      hist.assign(h.begin(), h.end());
    } else {
      std::fill(hist.begin(), hist.end(), 0.0);
      for (std::size_t k = 1; k < n; ++k) axpy(weights[n - k], w_states[k], hist);
    }
    std::vector<double> rhs = disc.apply_mass(hist);
    for (double& r : rhs) r *= -scale;

    const GridFunction f_n = load_vector(disc, prob.f, t_n);
    const std::vector<double> g_n = difference(f_n.values, f0.values);

    if (averaged) {
      axpy(-0.5, disc.apply_stiffness(w_states[n - 1]), rhs);
      axpy(0.5, g_n, rhs);
      axpy(0.5, g_prev, rhs);
      axpy(1.0, data, rhs);
      if (scheme.family() == SchemeFamily::MACN) {
        if (n == 1) axpy(scheme.a1(), data, rhs);
        if (n == 2) axpy(scheme.a2(), data, rhs);
      }
    } else {
      axpy(1.0, g_n, rhs);
      axpy(1.0, data, rhs);
    }

    GridFunction w_n = solve_shifted(disc, sigma, GridFunction{std::move(rhs)}, kappa);
    w_states.push_back(std::move(w_n.values));
    if (convolver && n < n_steps) convolver->push(w_states.back());
    g_prev = g_n;
  }

  Trajectory traj{{}, tau, scheme};
  traj.states.reserve(n_steps + 1);
  for (auto& w : w_states) {
    axpy(1.0, v.values, w);
    traj.states.push_back(GridFunction{std::move(w)});
  }
  return traj;
}

GridFunction residue_term(const SchemeSpec& scheme, const SpatialDiscretization& disc,
                          const ProblemSpec& prob, double tau, std::size_t n) {
  if (scheme.family() != SchemeFamily::ACN) {
    throw std::invalid_argument("residue_term is defined for the ACN scheme only");
  }
  if (!(tau > 0.0)) throw std::invalid_argument("residue_term: tau must be positive");
  const GridFunction v = ritz_projection(disc, prob.u0);
  const std::vector<double> data = data_vector(disc, prob, v);
  const double alpha = scheme.generator().alpha;
  const double sigma = std::pow(tau, -alpha) * symbol(scheme.generator(), {-1.0, 0.0}).real();
  GridFunction r = solve_shifted(disc, sigma, GridFunction{data}, 1.0);
  if (n % 2 == 1) {
    for (double& x : r.values) x = -x;
  }
  return r;
}

GridFunction fast_history_sum(const WeightSequence& weights, const SpatialDiscretization& disc,
                              std::span<const GridFunction> states, std::size_t n) {
  if (n > states.size()) throw std::out_of_range("fast_history_sum: index past the stored states");
  HistoryConvolver conv(weights, disc.size(), n);
  for (std::size_t k = 0; k < n; ++k) conv.push(states[k].values);
  return {disc.apply_mass(conv.current())};
}

GridFunction naive_history_sum(const WeightSequence& weights, const SpatialDiscretization& disc,
                               std::span<const GridFunction> states, std::size_t n) {
  if (n > states.size()) throw std::out_of_range("naive_history_sum: index past the stored states");
  std::vector<std::vector<double>> raw;
  raw.reserve(n);
  for (std::size_t k = 0; k < n; ++k) raw.push_back(states[k].values);
  if (n == 0) return {std::vector<double>(disc.size(), 0.0)};
  return {disc.apply_mass(naive_history(weights, raw, n))};
}

}  // namespace fracstep
