#include "fracstep/properties.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fracstep/cq_kernel.hpp"
#include "fracstep/experiments.hpp"
#include "fracstep/special_functions.hpp"
#include "fracstep/spatial.hpp"
#include "fracstep/timestepper.hpp"

namespace fracstep {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

PropertyResult check(std::string name, const std::function<PropertyResult()>& body) {
  try {
    PropertyResult r = body();
    r.name = std::move(name);
    return r;
  } catch (const std::exception& e) {
    return {std::move(name), false, std::string("exception: ") + e.what()};
  }
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// --- special functions -------------------------------------------------------

PropertyResult ml_at_zero() {
  for (double a : {0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
    if (mittag_leffler(a, 0.0) != 1.0) return {"", false, fmt("E_%g(0) != 1", a)};
  }
  return {"", true, "E_a(0) == 1 exactly"};
}

PropertyResult ml_exponential() {
  double worst = 0.0;
  for (int i = 0; i <= 500; ++i) {
    const double z = -5.0 * i / 500.0;
    worst = std::max(worst, std::abs(mittag_leffler(1.0, z) - std::exp(z)));
  }
  return {"", worst <= 1e-13, fmt("max |E_1(z) - e^z| on [-5,0] = %.3g (tol 1e-13)", worst)};
}

PropertyResult ml_erfc_identity() {
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double z = -2.0 * i / 400.0;
    const double oracle = std::exp(z * z) * std::erfc(-z);
    worst = std::max(worst, std::abs(mittag_leffler(0.5, z) - oracle));
  }
  return {"", worst <= 1e-11,
          fmt("max |E_1/2(z) - e^{z^2} erfc(-z)| on [-2,0] = %.3g (tol 1e-11)", worst)};
}

PropertyResult ml_relaxation_monotone() {
  for (double a : {0.1, 0.5, 0.9}) {
    double prev = mittag_leffler(a, 0.0);
    for (int i = 1; i <= 1000; ++i) {
      const double t = i / 1000.0;
      const double v = mittag_leffler(a, -std::pow(t, a));
      if (!(v < prev) || !(v > 0.0) || v > 1.0) {
        return {"", false, fmt("E_%g(-t^a) not strictly decreasing in (0,1] at t = %g", a, t)};
      }
      prev = v;
    }
  }
  return {"", true, "t -> E_a(-t^a) strictly decreasing in (0,1], 1000 points, a = 0.1/0.5/0.9"};
}

// --- CQ kernel ---------------------------------------------------------------

PropertyResult averaged_bitwise() {
  for (auto kind : {GeneratorKind::FBDF2, GeneratorKind::GNG2}) {
    for (double a : {0.25, 0.5, 0.75}) {
      const auto base = base_weights({kind, a}, 512);
      const auto avg = averaged_weights(base);
      for (std::size_t k = 0; k < base.size(); ++k) {
        const double prev = k == 0 ? 0.0 : base[k - 1];
        if (avg[k] - (base[k] + prev) / 2 != 0.0) return {"", false, "averaging mismatch"};
      }
    }
  }
  return {"", true, "averaged weights equal (base_k + base_{k-1})/2 bitwise"};
}

PropertyResult weight_decay() {
  std::ostringstream detail;
  bool ok = true;
  for (auto kind : {GeneratorKind::FBDF2, GeneratorKind::GNG2}) {
    for (double a : {0.25, 0.5, 0.75}) {
      const auto w = base_weights({kind, a}, 2048);
      std::vector<double> x, y, ps;
      double partial = 0.0;
      for (std::size_t n = 0; n <= 2048; ++n) {
        partial += w[n];
        if (n >= 128) {
          x.push_back(static_cast<double>(n));
          y.push_back(w[n]);
          ps.push_back(partial);
        }
      }
      const double slope = loglog_slope(x, y);
      const double ps_slope = loglog_slope(x, ps);
      const bool good = std::abs(slope - (-a - 1.0)) <= 0.1 && std::abs(ps_slope + a) <= 0.1;
      ok = ok && good;
      detail << to_string(kind) << " a=" << a << ": slope " << slope << ", partial " << ps_slope
             << "; ";
    }
  }
  return {"", ok, detail.str()};
}

PropertyResult consistency_second_order() {
  std::ostringstream detail;
  bool ok = true;
  for (auto kind : {GeneratorKind::FBDF2, GeneratorKind::GNG2}) {
    for (double a : {0.25, 0.5, 0.75}) {
      for (double tau : {1e-2, 5e-3, 2.5e-3}) {
        const double r = std::log2(consistency_residual({kind, a}, tau) /
                                   consistency_residual({kind, a}, tau / 2));
        if (r < 1.9 || r > 2.1) {
          ok = false;
          detail << to_string(kind) << " a=" << a << " tau=" << tau << " order " << r << "; ";
        }
      }
    }
  }
  return {"", ok, ok ? "log2 ratios in [1.9, 2.1]" : detail.str()};
}

PropertyResult symbol_matches_series() {
  double worst = 0.0;
  for (auto kind : {GeneratorKind::FBDF2, GeneratorKind::GNG2}) {
    for (double a : {0.25, 0.5, 0.75}) {
      const Generator g{kind, a};
      const auto w = base_weights(g, 600);
      for (int j = 0; j < 16; ++j) {
        const std::complex<double> zeta = std::polar(0.9, 2.0 * kPi * j / 16.0);
        std::complex<double> s = 0.0, p = 1.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
          s += w[k] * p;
          p *= zeta;
        }
        worst = std::max(worst, std::abs(s - symbol(g, zeta)));
      }
    }
  }
  // Tail beyond 600 terms at |zeta| = 0.9 is below 1e-25.
  return {"", worst <= 1e-12, fmt("max |series - symbol| on |zeta| = 0.9: %.3g", worst)};
}

PropertyResult discrete_derivative_t2() {
  const double t_end = 1.0;
  std::ostringstream detail;
  bool ok = true;
  for (double a : {0.25, 0.5, 0.75}) {
    const double exact = 2.0 / std::tgamma(3.0 - a) * std::pow(t_end, 2.0 - a);
    std::vector<double> errs;
    for (std::size_t n : {64u, 128u, 256u, 512u}) {
      const double tau = t_end / static_cast<double>(n);
      const auto w = base_weights({GeneratorKind::FBDF2, a}, n);
      std::vector<double> s(n + 1);
      for (std::size_t k = 0; k <= n; ++k) s[k] = std::pow(k * tau, 2.0);
      errs.push_back(std::abs(apply_discrete_derivative(w, tau, s)[n] - exact));
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
      const double r = std::log2(errs[i - 1] / errs[i]);
      ok = ok && r >= 1.9;
      detail << "a=" << a << " rate " << r << "; ";
    }
  }
  return {"", ok, detail.str()};
}

// --- spatial -----------------------------------------------------------------

PropertyResult fem_matrices_spd() {
  const auto disc = SpatialDiscretization::fem(kPi / 64);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto v = random_vector(rng, disc.size());
    if (!(dot(v, disc.apply_mass(v)) > 0.0) || !(dot(v, disc.apply_stiffness(v)) > 0.0)) {
      return {"", false, "non-positive quadratic form"};
    }
  }
  return {"", true, "v^T M v > 0 and v^T A v > 0 for 100 random v (symmetric storage)"};
}

PropertyResult shifted_solve_residual() {
  const auto disc = SpatialDiscretization::fem(kPi / 256);
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double sigma = std::exp(std::uniform_real_distribution<double>(-3.0, 6.0)(rng));
    const GridFunction rhs{random_vector(rng, disc.size())};
    const auto u = solve_shifted(disc, sigma, rhs);
    auto r = disc.apply_mass(u.values);
    const auto au = disc.apply_stiffness(u.values);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = sigma * r[j] + 0.5 * au[j] - rhs.values[j];
    worst = std::max(worst, norm2(r) / norm2(rhs.values));
  }
  return {"", worst <= 1e-12, fmt("max relative residual %.3g (tol 1e-12)", worst)};
}

// L2 distance between the P1 field with nodal values u and sin x, by 3-point Gauss.
double p1_error_against_sine(const SpatialDiscretization& disc, const std::vector<double>& u) {
  constexpr double g[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  constexpr double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const double h = disc.h();
  double s = 0.0;
  for (std::size_t e = 0; e <= u.size(); ++e) {
    const double ul = e == 0 ? 0.0 : u[e - 1];
    const double ur = e == u.size() ? 0.0 : u[e];
    for (int q = 0; q < 3; ++q) {
      const double r = 0.5 * (1.0 + g[q]);
      const double d = (1.0 - r) * ul + r * ur - std::sin((static_cast<double>(e) + r) * h);
      s += 0.5 * h * gw[q] * d * d;
    }
  }
  return std::sqrt(s);
}

PropertyResult fem_spectral_steady() {
  // -u'' = sin x has the single-mode answer u = sin x.
  std::vector<double> hs, errs;
  const SpaceTimeFunction f{[](double x, double) { return std::sin(x); }, std::nullopt};
  for (int cells : {32, 64, 128}) {
    const auto disc = SpatialDiscretization::fem(kPi / cells);
    const auto load = load_vector(disc, f, 0.0);
    const auto u = solve_tridiagonal(disc.mass(), 0.0, disc.stiffness(), 1.0, load.values);
    hs.push_back(disc.h());
    errs.push_back(p1_error_against_sine(disc, u));
  }
  const double slope = loglog_slope(hs, errs);
  return {"", slope >= 1.9 && slope <= 2.1,
          fmt("FEM vs spectral steady solution: h-slope %.3f (expect 2)", slope)};
}

// --- timestepper -------------------------------------------------------------

ProblemSpec steady_problem() {
  ProblemSpec p;
  p.u0 = {[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }, 1.0};
  p.f = {[](double x, double) { return std::sin(x); }, std::function<double(double)>([](double) { return 1.0; })};
  p.T = 1.0;
  p.label = "steady";
  return p;
}

PropertyResult steady_state_preserved() {
  const auto prob = steady_problem();
  double worst = 0.0;
  for (bool fem : {false, true}) {
    const auto disc = fem ? SpatialDiscretization::fem(kPi / 64) : SpatialDiscretization::spectral();
    const Generator g{GeneratorKind::FBDF2, 0.5};
    for (const auto& scheme : {SchemeSpec::acn(g), SchemeSpec::macn(g), SchemeSpec::bdf2_plain(g)}) {
      const auto traj = run(scheme, disc, prob, 64);
      for (const auto& s : traj.states) {
        GridFunction d{s.values};
        for (std::size_t j = 0; j < d.values.size(); ++j) d.values[j] -= traj.states[0].values[j];
        worst = std::max(worst, l2_norm(disc, d));
      }
    }
  }
  return {"", worst <= 1e-10, fmt("max_n ||U^n - v_h|| = %.3g (tol 1e-10)", worst)};
}

PropertyResult linearity() {
  const auto disc = SpatialDiscretization::fem(kPi / 32);
  const Generator g{GeneratorKind::GNG2, 0.4};
  auto problem = [](double c1, double c2) {
    ProblemSpec p;
    p.u0 = {[=](double x) { return c1 * std::sin(x) + c2 * std::sin(2 * x); },
            [=](double x) { return c1 * std::cos(x) + 2 * c2 * std::cos(2 * x); }, std::nullopt};
    p.f = {[](double, double) { return 0.0; }, std::nullopt};
    return p;
  };
  const double a = 0.7, b = -1.3;
  double worst = 0.0;
  for (const auto& scheme : {SchemeSpec::acn(g), SchemeSpec::macn(g), SchemeSpec::bdf2_plain(g)}) {
    const auto r1 = run(scheme, disc, problem(1, 0), 32);
    const auto r2 = run(scheme, disc, problem(0, 1), 32);
    const auto rc = run(scheme, disc, problem(a, b), 32);
    for (std::size_t n = 0; n < rc.states.size(); ++n) {
      for (std::size_t j = 0; j < disc.size(); ++j) {
        const double lin = a * r1.states[n].values[j] + b * r2.states[n].values[j];
        worst = std::max(worst, std::abs(rc.states[n].values[j] - lin));
      }
    }
  }
  return {"", worst <= 1e-11, fmt("max superposition defect %.3g (tol 1e-11)", worst)};
}

PropertyResult macn_equals_acn_without_data() {
  // u0 = 0 and f(0) = 0 make the data vector vanish.
  auto prob = make_problem(ExampleId::Ex2, 0.5);
  const auto disc = SpatialDiscretization::spectral();
  const Generator g{GeneratorKind::FBDF2, 0.5};
  const auto acn = run(SchemeSpec::acn(g), disc, prob, 64);
  const auto macn = run(SchemeSpec::macn(g), disc, prob, 64);
  double worst = 0.0;
  for (std::size_t n = 0; n < acn.states.size(); ++n) {
    worst = std::max(worst, std::abs(acn.states[n].values[0] - macn.states[n].values[0]));
  }
  return {"", worst <= 1e-11, fmt("max |MACN - ACN| with zero data vector = %.3g", worst)};
}

PropertyResult fast_history_agrees() {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (bool fem : {false, true}) {
    const auto disc = fem ? SpatialDiscretization::fem(kPi / 16) : SpatialDiscretization::spectral();
    const auto w = averaged_weights(base_weights({GeneratorKind::FBDF2, 0.3}, 300));
    std::vector<GridFunction> states;
    for (int k = 0; k < 300; ++k) states.push_back({random_vector(rng, disc.size())});
    for (std::size_t n : {1u, 2u, 63u, 64u, 65u, 129u, 200u, 300u}) {
      const auto fast = fast_history_sum(w, disc, states, n);
      const auto naive = naive_history_sum(w, disc, states, n);
      std::vector<double> d(naive.values);
      for (std::size_t j = 0; j < d.size(); ++j) d[j] -= fast.values[j];
      worst = std::max(worst, norm2(d) / norm2(naive.values));
    }
  }
  // End-to-end: a full run with both paths.
  const auto prob = make_problem(ExampleId::Table1, 0.5);
  const auto disc = SpatialDiscretization::spectral();
  const auto scheme = SchemeSpec::acn({GeneratorKind::FBDF2, 0.5});
  const auto a = run(scheme, disc, prob, 512, HistoryMode::Naive);
  const auto b = run(scheme, disc, prob, 512, HistoryMode::Fast);
  double run_diff = 0.0;
  for (std::size_t n = 0; n < a.states.size(); ++n) {
    run_diff = std::max(run_diff, std::abs(a.states[n].values[0] - b.states[n].values[0]));
  }
  return {"", worst <= 1e-12 && run_diff <= 1e-10,
          fmt("history relative diff %.3g (tol 1e-12); full-run diff %.3g (tol 1e-10)", worst,
              run_diff)};
}

PropertyResult macn_constraint_rejected() {
  const Generator g{GeneratorKind::FBDF2, 0.5};
  try {
    SchemeSpec::macn(g, 0.25, 0.25);
    return {"", false, "(a1, a2) = (1/4, 1/4) accepted"};
  } catch (const std::invalid_argument&) {
  }
  SchemeSpec::macn(g, -0.25, 0.25);
  SchemeSpec::macn(g, 0.0, 0.5);
  return {"", true, "1/2 + a1 - a2 != 0 rejected; admissible pairs accepted"};
}

PropertyResult residue_sign_alternates() {
  const auto prob = make_problem(ExampleId::Table1, 0.5);
  const auto disc = SpatialDiscretization::fem(kPi / 32);
  const auto scheme = SchemeSpec::acn({GeneratorKind::GNG2, 0.5});
  const auto r4 = residue_term(scheme, disc, prob, 1.0 / 128, 4);
  const auto r5 = residue_term(scheme, disc, prob, 1.0 / 128, 5);
  for (std::size_t j = 0; j < disc.size(); ++j) {
    if (r5.values[j] != -r4.values[j]) return {"", false, "I3^{n+1} != -I3^n"};
  }
  return {"", true, "I3^{n+1} == -I3^n exactly"};
}

// --- experiments -------------------------------------------------------------

PropertyResult report_orders_and_determinism() {
  ExperimentConfig cfg;
  cfg.example = ExampleId::Ex1;
  cfg.alphas = {0.3, 0.7};
  cfg.n_steps = {32, 64, 128};
  const auto a = measure(cfg);
  const auto b = measure(cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i] != b.rows[i]) return {"", false, "rerun not bit-identical"};
    if (a.rows[i].order) {
      const double expect = std::log2(a.rows[i - 1].error / a.rows[i].error);
      worst = std::max(worst, std::abs(*a.rows[i].order - expect));
    }
  }
  cfg.space.h = 0.123;  // ignored in spectral mode
  const auto c = measure(cfg);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i] != c.rows[i]) return {"", false, "spectral errors depend on h"};
  }
  return {"", worst <= 1e-12, "orders equal log2 error ratios; reruns bit-identical; spectral "
                              "errors independent of h"};
}

}  // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("loglog_slope: need >= 2 paired points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

std::vector<PropertyResult> run_property_suite() {
  return {
      check("mittag_leffler.zero_argument", ml_at_zero),
      check("mittag_leffler.alpha1_exponential", ml_exponential),
      check("mittag_leffler.alpha_half_erfc_identity", ml_erfc_identity),
      check("mittag_leffler.relaxation_monotone", ml_relaxation_monotone),
      check("cq.averaged_weights_bitwise", averaged_bitwise),
      check("cq.weight_and_partial_sum_decay", weight_decay),
      check("cq.consistency_second_order", consistency_second_order),
      check("cq.symbol_matches_series", symbol_matches_series),
      check("cq.discrete_derivative_t2_rate", discrete_derivative_t2),
      check("spatial.fem_matrices_spd", fem_matrices_spd),
      check("spatial.shifted_solve_residual", shifted_solve_residual),
      check("spatial.fem_converges_to_spectral", fem_spectral_steady),
      check("timestepper.steady_state_preserved", steady_state_preserved),
      check("timestepper.linearity", linearity),
      check("timestepper.macn_equals_acn_without_data", macn_equals_acn_without_data),
      check("timestepper.fast_history_matches_naive", fast_history_agrees),
      check("timestepper.macn_constraint_rejected", macn_constraint_rejected),
      check("timestepper.residue_sign_alternates", residue_sign_alternates),
      check("experiments.orders_and_determinism", report_orders_and_determinism),
  };
}

}  // namespace fracstep
