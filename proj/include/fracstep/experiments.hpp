#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracstep/timestepper.hpp"

namespace fracstep {

// Problem registry. All problems live on (0, pi) with T = 1 and sin x data.
//   Table1  u0 = sin x, f = 0,                            u = E_a(-t^a) sin x
//   Ex1     u0 = 0,     f = -sin x,                       u = (E_a(-t^a) - 1) sin x
//   Ex2     u0 = 0,     f = -t sin x,                     no closed form
//   Ex3     u0 = sin x, f = (6 t^{3-a}/Gamma(4-a) + t^3) sin x,  u = (E_a(-t^a) + t^3) sin x
enum class ExampleId { Table1, Ex1, Ex2, Ex3 };

std::string_view to_string(ExampleId id);
ExampleId parse_example(std::string_view name);

ProblemSpec make_problem(ExampleId example, double alpha);

/// Reference step count used when no closed-form solution exists.
inline constexpr std::size_t kDefaultReferenceSteps = 4096;

struct EvalMode {
  enum class Kind { Fixed, MaxOverTime };
  Kind kind = Kind::Fixed;
  double time = 0.5;

  static EvalMode fixed(double t) { return {Kind::Fixed, t}; }
  static EvalMode max_over_time() { return {Kind::MaxOverTime, 0.0}; }
  std::string label() const;
};

EvalMode parse_eval_mode(std::string_view text);

struct SpaceConfig {
  SpaceMode mode = SpaceMode::Spectral;
  double h = 0.0;  // FEM only
};

struct ExperimentConfig {
  ExampleId example = ExampleId::Table1;
  std::vector<double> alphas;
  std::vector<std::size_t> n_steps;  // tau = T / N, N powers of two
  SchemeFamily scheme = SchemeFamily::ACN;
  GeneratorKind generator = GeneratorKind::FBDF2;
  double a1 = -0.25;
  double a2 = 0.25;
  SpaceConfig space;
  EvalMode eval;
  std::size_t n_ref = kDefaultReferenceSteps;
  HistoryMode history = HistoryMode::Naive;
};

/// Throws std::invalid_argument on any rejected precondition.
void validate(const ExperimentConfig& config);

SchemeSpec make_scheme(const ExperimentConfig& config, double alpha);

SpatialDiscretization make_space(const SpaceConfig& space);

struct ConvergenceRow {
  double alpha = 0.0;
  double tau = 0.0;
  double error = 0.0;
  std::optional<double> order;

  bool operator==(const ConvergenceRow&) const = default;
};

struct ReportMetadata {
  std::string scheme;
  std::string generator;
  std::string space;
  std::string eval;
  std::string reference;  // "exact" or "numerical:N=<n_ref>"
  std::vector<double> non_monotone_alphas;

  bool operator==(const ReportMetadata&) const = default;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  ReportMetadata meta;
};

/// Consecutive orders log2(e[i-1] / e[i]); the first entry is empty.
std::vector<std::optional<double>> convergence_orders(const std::vector<double>& errors);

/// Order predicted by the theory for a configuration, as printed in tables.
double theoretical_order(const ExperimentConfig& config, double alpha);

/// Runs the same scheme at N_ref steps; the grid must nest with every compared N.
Trajectory reference_solution(const ProblemSpec& prob, const SpatialDiscretization& disc,
                              const SchemeSpec& scheme, std::size_t n_ref,
                              HistoryMode history = HistoryMode::Naive);

/// Errors ||U^n - u(t_n)|| for n = 0..N against the exact solution.
std::vector<double> error_history(const Trajectory& traj, const SpatialDiscretization& disc,
                                  const SpaceTimeFunction& exact);

/// Errors against a finer nested reference trajectory, sampled at coinciding times.
std::vector<double> error_history(const Trajectory& traj, const SpatialDiscretization& disc,
                                  const Trajectory& reference);

ConvergenceReport measure(const ExperimentConfig& config);

enum class ReportFormat { CSV, Markdown };

void write_csv(const ConvergenceReport& report, std::ostream& out);
void write_markdown(const ConvergenceReport& report, const ExperimentConfig& config, std::ostream& out);
void emit(const ConvergenceReport& report, const ExperimentConfig& config, ReportFormat format,
          const std::filesystem::path& path);

/// Parses the CSV produced by write_csv. Only the CSV-visible metadata is restored.
ConvergenceReport read_csv(std::istream& in);

}  // namespace fracstep
