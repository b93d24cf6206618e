#include "fracstep/spatial.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracstep {

namespace {

constexpr double kPi = std::numbers::pi;

// 3-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 3> kGaussNodes = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kGaussWeights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

void check_size(const SpatialDiscretization& disc, std::size_t n, const char* what) {
  if (n != disc.size()) {
    throw std::invalid_argument(std::string(what) + ": vector of length " + std::to_string(n) +
                                " does not match " + std::to_string(disc.size()) + " unknowns");
  }
}

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::runtime_error(std::string(what) + ": non-finite value");
  }
}

double spectral_amplitude(const SpaceTimeFunction& f, double t) {
  if (!f.sine_amplitude) {
    throw std::invalid_argument("spectral mode requires single-mode data");
  }
  return (*f.sine_amplitude)(t);
}

}  // namespace

std::string_view to_string(SpaceMode mode) {
  return mode == SpaceMode::FEM ? "fem" : "spectral";
}

std::vector<double> SymTridiagonal::multiply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += off[i - 1] * x[i - 1];
    if (i + 1 < n) s += off[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

std::vector<double> solve_tridiagonal(const SymTridiagonal& m, double sigma,
                                      const SymTridiagonal& a, double kappa,
                                      std::span<const double> rhs) {
  const std::size_t n = m.size();
  std::vector<double> c(n), x(rhs.begin(), rhs.end());
  double denom = sigma * m.diag[0] + kappa * a.diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const double sub = sigma * m.off[i - 1] + kappa * a.off[i - 1];
      denom = sigma * m.diag[i] + kappa * a.diag[i] - sub * c[i - 1];
      x[i] -= sub * x[i - 1];
    }
    if (i + 1 < n) c[i] = (sigma * m.off[i] + kappa * a.off[i]) / denom;
    x[i] /= denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

SpatialDiscretization SpatialDiscretization::fem(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("fem: h must be positive");
  const double cells = kPi / h;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-6 * cells) {
    throw std::invalid_argument("fem: h = " + std::to_string(h) + " does not divide pi");
  }
  if (rounded < 4.0) {
    throw std::invalid_argument("fem: h = " + std::to_string(h) + " is coarser than pi/4");
  }
  SpatialDiscretization d;
  d.mode_ = SpaceMode::FEM;
  d.nodes_ = static_cast<std::size_t>(rounded) - 1;
  d.h_ = kPi / rounded;
  const double hh = d.h_;
  d.mass_.diag.assign(d.nodes_, 4.0 * hh / 6.0);
  d.mass_.off.assign(d.nodes_ - 1, hh / 6.0);
  d.stiffness_.diag.assign(d.nodes_, 2.0 / hh);
  d.stiffness_.off.assign(d.nodes_ - 1, -1.0 / hh);
  return d;
}

SpatialDiscretization SpatialDiscretization::spectral(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("spectral: lambda must be positive");
  SpatialDiscretization d;
  d.mode_ = SpaceMode::Spectral;
  d.lambda_ = lambda;
  return d;
}

std::size_t SpatialDiscretization::size() const {
  return mode_ == SpaceMode::FEM ? nodes_ : 1;
}

void SpatialDiscretization::require_fem(const char* what) const {
  if (mode_ != SpaceMode::FEM) {
    throw std::logic_error(std::string(what) + " is only defined in FEM mode");
  }
}

double SpatialDiscretization::h() const {
  require_fem("h");
  return h_;
}

double SpatialDiscretization::node(std::size_t j) const {
  require_fem("node");
  return static_cast<double>(j + 1) * h_;
}

const SymTridiagonal& SpatialDiscretization::mass() const {
  require_fem("mass");
  return mass_;
}

const SymTridiagonal& SpatialDiscretization::stiffness() const {
  require_fem("stiffness");
  return stiffness_;
}

std::vector<double> SpatialDiscretization::apply_mass(std::span<const double> v) const {
  check_size(*this, v.size(), "apply_mass");
  if (mode_ == SpaceMode::Spectral) return {v[0]};
  return mass_.multiply(v);
}

std::vector<double> SpatialDiscretization::apply_stiffness(std::span<const double> v) const {
  check_size(*this, v.size(), "apply_stiffness");
  if (mode_ == SpaceMode::Spectral) return {lambda_ * v[0]};
  return stiffness_.multiply(v);
}

GridFunction ritz_projection(const SpatialDiscretization& disc, const InitialDatum& u0) {
  if (disc.mode() == SpaceMode::Spectral) {
    if (!u0.sine_amplitude) throw std::invalid_argument("spectral mode requires single-mode data");
    return {{*u0.sine_amplitude}};
  }
  const std::size_t n = disc.size();
  const double h = disc.h();
  std::vector<double> b(n, 0.0);
  // Element e spans [e h, (e+1) h]; node j sits at (j+1) h.
  for (std::size_t e = 0; e <= n; ++e) {
    const double left = static_cast<double>(e) * h;
    double integral = 0.0;
    for (std::size_t q = 0; q < 3; ++q) {
      const double x = left + 0.5 * h * (1.0 + kGaussNodes[q]);
      integral += kGaussWeights[q] * u0.derivative(x);
    }
    integral *= 0.5 * h;
    if (!std::isfinite(integral)) throw std::runtime_error("ritz_projection: non-finite integrand");
    // phi' = +1/h on the element left of its node, -1/h on the right.
    if (e > 0) b[e - 1] -= integral / h;
    if (e < n) b[e] += integral / h;
  }
  return {solve_tridiagonal(disc.mass(), 0.0, disc.stiffness(), 1.0, b)};
}

GridFunction load_vector(const SpatialDiscretization& disc, const SpaceTimeFunction& f, double t) {
  if (disc.mode() == SpaceMode::Spectral) return {{spectral_amplitude(f, t)}};
  const std::size_t n = disc.size();
  const double h = disc.h();
  std::vector<double> load(n, 0.0);
  for (std::size_t e = 0; e <= n; ++e) {
    const double left = static_cast<double>(e) * h;
    double to_left = 0.0;   // against the hat of node e-1 (decreasing on this element)
    double to_right = 0.0;  // against the hat of node e (increasing)
    for (std::size_t q = 0; q < 3; ++q) {
      const double s = 0.5 * (1.0 + kGaussNodes[q]);
      const double fx = f.value(left + s * h, t);
      to_left += kGaussWeights[q] * fx * (1.0 - s);
      to_right += kGaussWeights[q] * fx * s;
    }
    if (e > 0) load[e - 1] += 0.5 * h * to_left;
    if (e < n) load[e] += 0.5 * h * to_right;
  }
  check_finite(load, "load_vector");
  return {std::move(load)};
}

GridFunction interpolate(const SpatialDiscretization& disc, const SpaceTimeFunction& u, double t) {
  if (disc.mode() == SpaceMode::Spectral) return {{spectral_amplitude(u, t)}};
  std::vector<double> v(disc.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = u.value(disc.node(j), t);
  return {std::move(v)};
}

double l2_norm(const SpatialDiscretization& disc, const GridFunction& v) {
  check_size(disc, v.values.size(), "l2_norm");
  if (disc.mode() == SpaceMode::Spectral) return std::abs(v.values[0]) * std::sqrt(kPi / 2.0);
  const std::vector<double> mv = disc.mass().multiply(v.values);
  double s = 0.0;
  for (std::size_t i = 0; i < mv.size(); ++i) s += v.values[i] * mv[i];
  return std::sqrt(std::max(s, 0.0));
}

GridFunction solve_shifted(const SpatialDiscretization& disc, double sigma, const GridFunction& rhs,
                           double stiffness_scale) {
  if (!(sigma > 0.0)) throw std::invalid_argument("solve_shifted: sigma must be positive");
  check_size(disc, rhs.values.size(), "solve_shifted");
  check_finite(rhs.values, "solve_shifted");
  if (disc.mode() == SpaceMode::Spectral) {
    return {{rhs.values[0] / (sigma + stiffness_scale * disc.lambda())}};
  }
  return {solve_tridiagonal(disc.mass(), sigma, disc.stiffness(), stiffness_scale, rhs.values)};
}

}  // namespace fracstep
