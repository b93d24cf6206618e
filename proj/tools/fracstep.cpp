// fracstep: convergence studies for time-fractional subdiffusion schemes.
//
//   fracstep run --example table1 --scheme acn --generator fbdf2 \
//       --alpha 0.1,0.5,0.9 --nsteps 128,256,512 --space spectral --out table1.csv
//   fracstep verify

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "fracstep/experiments.hpp"
#include "fracstep/properties.hpp"

namespace {

// Accepts a plain number or "pi/<cells>".
double parse_mesh_width(const std::string& text) {
  if (text.rfind("pi/", 0) == 0) return std::numbers::pi / std::stod(text.substr(3));
  return std::stod(text);
}

int run_command(const fracstep::ExperimentConfig& config, const std::string& out,
                fracstep::ReportFormat format) {
  const auto report = fracstep::measure(config);
  fracstep::emit(report, config, format, out);
  for (double a : report.meta.non_monotone_alphas) {
    std::cerr << "warning: non-monotone error sequence for alpha = " << a << '\n';
  }
  std::cout << "wrote " << report.rows.size() << " rows to " << out << '\n';
  return 0;
}

int verify_command() {
  int failures = 0;
  for (const auto& r : fracstep::run_property_suite()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << '\n';
    if (!r.passed) ++failures;
  }
  std::cout << (failures == 0 ? "all properties hold" : std::to_string(failures) + " failed") << '\n';
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convolution-quadrature time stepping for 1-D subdiffusion"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");

  auto* run = app.add_subcommand("run", "Run a convergence sweep and write a report");
  std::string example = "table1", scheme = "acn", generator = "fbdf2", space = "spectral";
  std::string eval = "fixed:0.5", out, format = "csv";
  std::vector<double> alphas;
  std::vector<std::size_t> nsteps;
  std::string h_text;
  double a1 = -0.25, a2 = 0.25;
  std::size_t nref = fracstep::kDefaultReferenceSteps;
  bool fast = false;

  run->add_option("--example", example, "table1|ex1|ex2|ex3")
      ->check(CLI::IsMember({"table1", "ex1", "ex2", "ex3"}));
  run->add_option("--scheme", scheme, "acn|macn|bdf2")->check(CLI::IsMember({"acn", "macn", "bdf2"}));
  run->add_option("--generator", generator, "fbdf2|gng2")->check(CLI::IsMember({"fbdf2", "gng2"}));
  run->add_option("--alpha", alphas, "Fractional orders (comma separated)")
      ->required()
      ->delimiter(',');
  run->add_option("--nsteps", nsteps, "Step counts, powers of two (comma separated)")
      ->required()
      ->delimiter(',');
  run->add_option("--space", space, "spectral|fem")->check(CLI::IsMember({"spectral", "fem"}));
  run->add_option("--h", h_text, "FEM mesh width dividing pi, e.g. 0.0122718 or pi/256");
  run->add_option("--eval", eval, "fixed:<t> or max");
  run->add_option("--nref", nref, "Reference step count for problems without closed form");
  run->add_option("--a1", a1, "MACN correction at step 1");
  run->add_option("--a2", a2, "MACN correction at step 2");
  run->add_flag("--fast-history", fast, "Use the blocked FFT history convolution");
  run->add_option("--out", out, "Output path")->required();
  run->add_option("--format", format, "csv|md")->check(CLI::IsMember({"csv", "md"}));

  auto* verify = app.add_subcommand("verify", "Run the property suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return verify_command();

    fracstep::ExperimentConfig config;
    config.example = fracstep::parse_example(example);
    config.scheme = fracstep::parse_scheme_family(scheme);
    config.generator = fracstep::parse_generator_kind(generator);
    config.alphas = alphas;
    config.n_steps = nsteps;
    config.a1 = a1;
    config.a2 = a2;
    config.eval = fracstep::parse_eval_mode(eval);
    config.n_ref = nref;
    config.history = fast ? fracstep::HistoryMode::Fast : fracstep::HistoryMode::Naive;
    if (space == "fem") {
      if (h_text.empty()) throw std::invalid_argument("--space fem requires --h");
      config.space = {fracstep::SpaceMode::FEM, parse_mesh_width(h_text)};
    }
    return run_command(config, out,
                       format == "md" ? fracstep::ReportFormat::Markdown : fracstep::ReportFormat::CSV);
  } catch (const std::exception& e) {
    std::cerr << "fracstep: error: " << e.what() << '\n';
    return 2;
  }
}
