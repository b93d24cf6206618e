#include "fracstep/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fracstep/special_functions.hpp"

namespace fracstep {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4E", x);
  return buf;
}

std::string format_fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string format_tau(double tau) {
  const double k = -std::log2(tau);
  if (std::abs(k - std::round(k)) < 1e-12 && k > 0) {
    return "1/2^" + std::to_string(static_cast<int>(std::round(k)));
  }
  return format_double(tau);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

// Index of time t on a grid with n steps over [0, T]; throws unless t is a grid point.
std::size_t grid_index(double t, double T, std::size_t n) {
  const double pos = t / T * static_cast<double>(n);
  const double idx = std::round(pos);
  if (std::abs(pos - idx) > 1e-9 || idx < 0 || idx > static_cast<double>(n)) {
    throw std::invalid_argument("evaluation time " + format_double(t) +
                                " is not a grid point for N = " + std::to_string(n));
  }
  return static_cast<std::size_t>(idx);
}

constexpr const char* kCsvHeader = "alpha,tau,error,order,scheme,generator,space,eval";

}  // namespace

std::string_view to_string(ExampleId id) {
  switch (id) {
    case ExampleId::Table1: return "table1";
    case ExampleId::Ex1: return "ex1";
    case ExampleId::Ex2: return "ex2";
    case ExampleId::Ex3: return "ex3";
  }
  return "unknown";
}

ExampleId parse_example(std::string_view name) {
  if (name == "table1") return ExampleId::Table1;
  if (name == "ex1") return ExampleId::Ex1;
  if (name == "ex2") return ExampleId::Ex2;
  if (name == "ex3") return ExampleId::Ex3;
  throw std::invalid_argument("unknown example '" + std::string(name) + "'");
}

ProblemSpec make_problem(ExampleId example, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("make_problem: alpha must lie in (0, 1)");
  }
  // E_a(-t^a), the relaxation profile shared by all closed-form solutions.
  auto relax = [alpha](double t) { return mittag_leffler(alpha, -std::pow(t, alpha)); };
  auto sine_field = [](auto amp) {
    return SpaceTimeFunction{[amp](double x, double t) { return amp(t) * std::sin(x); },
                             std::function<double(double)>(amp)};
  };
  const InitialDatum sine0{[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); },
                           1.0};
  const InitialDatum zero0{[](double) { return 0.0; }, [](double) { return 0.0; }, 0.0};

  ProblemSpec p;
  p.T = 1.0;
  switch (example) {
    case ExampleId::Table1:
      p.u0 = sine0;
      p.f = sine_field([](double) { return 0.0; });
      p.exact = sine_field(relax);
      p.label = "table1";
      break;
    case ExampleId::Ex1:
      p.u0 = zero0;
      p.f = sine_field([](double) { return -1.0; });
      p.exact = sine_field([relax](double t) { return relax(t) - 1.0; });
      p.label = "ex1";
      break;
    case ExampleId::Ex2:
      p.u0 = zero0;
      p.f = sine_field([](double t) { return -t; });
      p.label = "ex2";
      break;
    case ExampleId::Ex3: {
      const double c = 6.0 / std::tgamma(4.0 - alpha);
      p.u0 = sine0;
      p.f = sine_field([alpha, c](double t) { return c * std::pow(t, 3.0 - alpha) + t * t * t; });
      p.exact = sine_field([relax](double t) { return relax(t) + t * t * t; });
      p.label = "ex3";
      break;
    }
  }
  return p;
}

std::string EvalMode::label() const {
  return kind == Kind::Fixed ? "fixed:" + format_double(time) : "max";
}

EvalMode parse_eval_mode(std::string_view text) {
  if (text == "max") return EvalMode::max_over_time();
  if (text.starts_with("fixed:")) {
    const std::string num(text.substr(6));
    std::size_t used = 0;
    double t = 0.0;
    try {
      t = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == num.size() && used > 0) return EvalMode::fixed(t);
  }
  throw std::invalid_argument("bad evaluation mode '" + std::string(text) +
                              "' (expected fixed:<t> or max)");
}

void validate(const ExperimentConfig& config) {
  if (config.alphas.empty()) throw std::invalid_argument("no alpha values given");
  for (double a : config.alphas) {
    if (!(a > 0.0 && a < 1.0)) {
      throw std::invalid_argument("alpha = " + format_double(a) + " outside (0, 1)");
    }
  }
  if (config.n_steps.empty()) throw std::invalid_argument("no step counts given");
  for (std::size_t n : config.n_steps) {
    if (!is_power_of_two(n)) {
      throw std::invalid_argument("step count " + std::to_string(n) + " is not a power of two");
    }
    if (config.scheme == SchemeFamily::MACN && n < 4) {
      throw std::invalid_argument("MACN needs at least 4 steps");
    }
    if (config.eval.kind == EvalMode::Kind::Fixed) {
      if (!(config.eval.time > 0.0 && config.eval.time <= 1.0)) {
        throw std::invalid_argument("evaluation time must lie in (0, T]");
      }
      grid_index(config.eval.time, 1.0, n);
    }
  }
  if (config.scheme == SchemeFamily::MACN) {
    SchemeSpec::macn({config.generator, config.alphas.front()}, config.a1, config.a2);
  }
  if (config.example == ExampleId::Ex2) {
    const std::size_t largest = *std::max_element(config.n_steps.begin(), config.n_steps.end());
    if (!is_power_of_two(config.n_ref) || config.n_ref < 4 * largest) {
      throw std::invalid_argument("reference step count " + std::to_string(config.n_ref) +
                                  " must be a power of two and at least 4x the largest N");
    }
  }
  if (config.space.mode == SpaceMode::FEM) make_space(config.space);
}

SchemeSpec make_scheme(const ExperimentConfig& config, double alpha) {
  const Generator g{config.generator, alpha};
  switch (config.scheme) {
    case SchemeFamily::ACN: return SchemeSpec::acn(g);
    case SchemeFamily::MACN: return SchemeSpec::macn(g, config.a1, config.a2);
    case SchemeFamily::BDF2Plain: return SchemeSpec::bdf2_plain(g);
  }
  throw std::invalid_argument("unknown scheme family");
}

SpatialDiscretization make_space(const SpaceConfig& space) {
  return space.mode == SpaceMode::FEM ? SpatialDiscretization::fem(space.h)
                                      : SpatialDiscretization::spectral(1.0);
}

std::vector<std::optional<double>> convergence_orders(const std::vector<double>& errors) {
  std::vector<std::optional<double>> orders(errors.size());
  for (std::size_t i = 1; i < errors.size(); ++i) {
    orders[i] = std::log2(errors[i - 1] / errors[i]);
  }
  return orders;
}

double theoretical_order(const ExperimentConfig& config, double alpha) {
  switch (config.scheme) {
    case SchemeFamily::MACN: return 2.0;
    case SchemeFamily::BDF2Plain: return 1.0;
    case SchemeFamily::ACN: break;
  }
  // ACN: data vector f(0) + Delta u0 vanishes only for Ex2.
  if (config.example == ExampleId::Ex2) {
    return config.eval.kind == EvalMode::Kind::Fixed ? 2.0 : 1.0 + alpha;
  }
  return alpha;
}

Trajectory reference_solution(const ProblemSpec& prob, const SpatialDiscretization& disc,
                              const SchemeSpec& scheme, std::size_t n_ref, HistoryMode history) {
  if (prob.exact) {
    throw std::logic_error("reference_solution: problem '" + prob.label + "' has a closed form");
  }
  if (!is_power_of_two(n_ref)) {
    throw std::invalid_argument("reference step count must be a power of two");
  }
  return run(scheme, disc, prob, n_ref, history);
}

std::vector<double> error_history(const Trajectory& traj, const SpatialDiscretization& disc,
                                  const SpaceTimeFunction& exact) {
  std::vector<double> errors(traj.states.size());
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const GridFunction u = interpolate(disc, exact, static_cast<double>(n) * traj.tau);
    GridFunction diff{traj.states[n].values};
    for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= u.values[i];
    errors[n] = l2_norm(disc, diff);
  }
  return errors;
}

std::vector<double> error_history(const Trajectory& traj, const SpatialDiscretization& disc,
                                  const Trajectory& reference) {
  const std::size_t n = traj.states.size() - 1;
  const std::size_t n_ref = reference.states.size() - 1;
  if (n == 0 || n_ref % n != 0) {
    throw std::invalid_argument("reference grid with " + std::to_string(n_ref) +
                                " steps does not nest with " + std::to_string(n) + " steps");
  }
  const std::size_t stride = n_ref / n;
  if (std::abs(reference.tau * static_cast<double>(stride) - traj.tau) > 1e-12 * traj.tau) {
    throw std::invalid_argument("reference trajectory covers a different time interval");
  }
  std::vector<double> errors(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    GridFunction diff{traj.states[k].values};
    const auto& ref = reference.states[k * stride].values;
    if (ref.size() != diff.values.size()) {
      throw std::invalid_argument("reference trajectory uses a different discretization");
    }
    for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= ref[i];
    errors[k] = l2_norm(disc, diff);
  }
  return errors;
}

ConvergenceReport measure(const ExperimentConfig& config) {
  validate(config);
  const SpatialDiscretization disc = make_space(config.space);

  ConvergenceReport report;
  report.meta.scheme = std::string(to_string(config.scheme));
  report.meta.generator = std::string(to_string(config.generator));
  report.meta.space = std::string(to_string(config.space.mode));
  report.meta.eval = config.eval.label();

  for (double alpha : config.alphas) {
    const SchemeSpec scheme = make_scheme(config, alpha);
    const ProblemSpec prob = make_problem(config.example, alpha);

    std::optional<Trajectory> reference;
    if (!prob.exact) {
      reference = reference_solution(prob, disc, scheme, config.n_ref, config.history);
      report.meta.reference = "numerical:N=" + std::to_string(config.n_ref);
    } else {
      report.meta.reference = "exact";
    }

    std::vector<double> errors;
    for (std::size_t n : config.n_steps) {
      const Trajectory traj = run(scheme, disc, prob, n, config.history);
      const std::vector<double> hist =
          reference ? error_history(traj, disc, *reference) : error_history(traj, disc, *prob.exact);
      if (config.eval.kind == EvalMode::Kind::Fixed) {
        errors.push_back(hist[grid_index(config.eval.time, prob.T, n)]);
      } else {
        errors.push_back(*std::max_element(hist.begin() + 1, hist.end()));
      }
    }

    const auto orders = convergence_orders(errors);
    bool monotone = true;
    for (std::size_t i = 0; i < errors.size(); ++i) {
      if (i > 0 && errors[i] > errors[i - 1]) monotone = false;
      report.rows.push_back(
          {alpha, prob.T / static_cast<double>(config.n_steps[i]), errors[i], orders[i]});
    }
    if (!monotone) report.meta.non_monotone_alphas.push_back(alpha);
  }
  return report;
}

void write_csv(const ConvergenceReport& report, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& row : report.rows) {
    out << format_double(row.alpha) << ',' << format_double(row.tau) << ','
        << format_double(row.error) << ',' << (row.order ? format_double(*row.order) : "") << ','
        << report.meta.scheme << ',' << report.meta.generator << ',' << report.meta.space << ','
        << report.meta.eval << '\n';
  }
}

void write_markdown(const ConvergenceReport& report, const ExperimentConfig& config,
                    std::ostream& out) {
  out << "### " << to_string(config.example) << ": " << report.meta.scheme << "("
      << report.meta.generator << "), " << report.meta.space << ", eval " << report.meta.eval
      << ", reference " << report.meta.reference << "\n\n";
  out << "| alpha | tau | L2 error | Order |\n";
  out << "|---|---|---|---|\n";
  double current_alpha = std::nan("");
  for (const auto& row : report.rows) {
    const bool first = row.alpha != current_alpha;
    current_alpha = row.alpha;
    const std::string order = first ? "(" + format_fixed2(theoretical_order(config, row.alpha)) + ")"
                                    : (row.order ? format_fixed2(*row.order) : "--");
    out << "| " << (first ? format_double(row.alpha) : "") << " | " << format_tau(row.tau) << " | "
        << format_sci(row.error) << " | " << order << " |\n";
  }
  if (!report.meta.non_monotone_alphas.empty()) {
    out << "\nNon-monotone error sequence for alpha =";
    for (double a : report.meta.non_monotone_alphas) out << ' ' << format_double(a);
    out << '\n';
  }
}

void emit(const ConvergenceReport& report, const ExperimentConfig& config, ReportFormat format,
          const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  if (format == ReportFormat::CSV) {
    write_csv(report, out);
  } else {
    write_markdown(report, config, out);
  }
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

ConvergenceReport read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("read_csv: missing or unexpected header");
  }
  ConvergenceReport report;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) {
      throw std::runtime_error("read_csv: line " + std::to_string(line_no) + " has " +
                               std::to_string(f.size()) + " fields");
    }
    ConvergenceRow row;
    row.alpha = std::stod(f[0]);
    row.tau = std::stod(f[1]);
    row.error = std::stod(f[2]);
    if (!f[3].empty()) row.order = std::stod(f[3]);
    report.rows.push_back(row);
    report.meta.scheme = f[4];
    report.meta.generator = f[5];
    report.meta.space = f[6];
    report.meta.eval = f[7];
  }
  return report;
}

}  // namespace fracstep
