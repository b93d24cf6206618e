#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fracstep {

// Spatial operators on Omega = (0, pi) with homogeneous Dirichlet data.
//
// Two modes share one interface:
//   FEM       P1 elements on a uniform mesh; tridiagonal mass M and stiffness A.
//   Spectral  a single sine mode; M = 1 and A = lambda (lambda = 1 for sin x).

enum class SpaceMode { FEM, Spectral };

std::string_view to_string(SpaceMode mode);

/// Symmetric tridiagonal matrix stored by diagonals.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples rows i and i+1

  std::size_t size() const { return diag.size(); }
  std::vector<double> multiply(std::span<const double> x) const;
};

/// Thomas algorithm for (sigma * M + kappa * A) x = rhs.
std::vector<double> solve_tridiagonal(const SymTridiagonal& m, double sigma,
                                      const SymTridiagonal& a, double kappa,
                                      std::span<const double> rhs);

class SpatialDiscretization {
 public:
  static SpatialDiscretization fem(double h);
  static SpatialDiscretization spectral(double lambda = 1.0);

  SpaceMode mode() const { return mode_; }
  /// Degrees of freedom: interior nodes (FEM) or 1 (Spectral).
  std::size_t size() const;

  // FEM accessors; calling them in spectral mode throws.
  double h() const;
  double node(std::size_t j) const;
  const SymTridiagonal& mass() const;
  const SymTridiagonal& stiffness() const;

  double lambda() const { return lambda_; }

  std::vector<double> apply_mass(std::span<const double> v) const;
  std::vector<double> apply_stiffness(std::span<const double> v) const;

 private:
  SpatialDiscretization() = default;
  void require_fem(const char* what) const;

  SpaceMode mode_ = SpaceMode::Spectral;
  double h_ = 0.0;
  std::size_t nodes_ = 0;
  SymTridiagonal mass_;
  SymTridiagonal stiffness_;
  double lambda_ = 1.0;
};

/// Nodal values (FEM) or the sine-mode amplitude (Spectral).
struct GridFunction {
  std::vector<double> values;
};

// Data on Omega. The optional sine amplitude marks data of the form a(t) * sin x,
// which is the only kind the spectral mode accepts.
struct SpaceTimeFunction {
  std::function<double(double x, double t)> value;
  std::optional<std::function<double(double t)>> sine_amplitude;
};

struct InitialDatum {
  std::function<double(double x)> value;
  std::function<double(double x)> derivative;
  std::optional<double> sine_amplitude;
};

/// R_h u0: solves A v = b with b_j = int u0' phi_j' (3-point Gauss per element).
GridFunction ritz_projection(const SpatialDiscretization& disc, const InitialDatum& u0);

/// FEM: F_j = int f(x, t) phi_j dx. Spectral: sine coefficient of f(., t).
GridFunction load_vector(const SpatialDiscretization& disc, const SpaceTimeFunction& f, double t);

/// Nodal interpolant (FEM) or sine amplitude (Spectral) of u(., t).
GridFunction interpolate(const SpatialDiscretization& disc, const SpaceTimeFunction& u, double t);

/// sqrt(v^T M v) for FEM, |a| sqrt(pi/2) for Spectral.
double l2_norm(const SpatialDiscretization& disc, const GridFunction& v);

/// Solves (sigma M + stiffness_scale A) u = rhs. Per-step systems use stiffness_scale = 1/2.
GridFunction solve_shifted(const SpatialDiscretization& disc, double sigma, const GridFunction& rhs,
                           double stiffness_scale = 0.5);

}  // namespace fracstep
