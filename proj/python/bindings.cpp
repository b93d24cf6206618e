#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "fracstep/cq_kernel.hpp"
#include "fracstep/experiments.hpp"
#include "fracstep/properties.hpp"
#include "fracstep/special_functions.hpp"
#include "fracstep/timestepper.hpp"

namespace py = pybind11;
using namespace fracstep;

namespace {

SpaceConfig space_config(const std::string& space, std::optional<double> h) {
  if (space == "spectral") return {};
  if (space == "fem") {
    if (!h) throw std::invalid_argument("space='fem' requires h");
    return {SpaceMode::FEM, *h};
  }
  throw std::invalid_argument("unknown space '" + space + "'");
}

ExperimentConfig make_config(const std::string& example, const std::string& scheme,
                             const std::string& generator, std::vector<double> alphas,
                             std::vector<std::size_t> nsteps, const std::string& space,
                             std::optional<double> h, const std::string& eval, std::size_t nref,
                             double a1, double a2, bool fast_history) {
  ExperimentConfig c;
  c.example = parse_example(example);
  c.scheme = parse_scheme_family(scheme);
  c.generator = parse_generator_kind(generator);
  c.alphas = std::move(alphas);
  c.n_steps = std::move(nsteps);
  c.space = space_config(space, h);
  c.eval = parse_eval_mode(eval);
  c.n_ref = nref;
  c.a1 = a1;
  c.a2 = a2;
  c.history = fast_history ? HistoryMode::Fast : HistoryMode::Naive;
  return c;
}

py::dict report_to_dict(const ConvergenceReport& r) {
  py::list rows;
  for (const auto& row : r.rows) {
    py::dict d;
    d["alpha"] = row.alpha;
    d["tau"] = row.tau;
    d["error"] = row.error;
    d["order"] = row.order ? py::cast(*row.order) : py::none();
    rows.append(d);
  }
  py::dict out;
  out["rows"] = rows;
  out["scheme"] = r.meta.scheme;
  out["generator"] = r.meta.generator;
  out["space"] = r.meta.space;
  out["eval"] = r.meta.eval;
  out["reference"] = r.meta.reference;
  out["non_monotone_alphas"] = r.meta.non_monotone_alphas;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Convolution-quadrature time stepping for 1-D subdiffusion";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const std::domain_error& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("mittag_leffler", [](double alpha, double z, double z_max) {
    return mittag_leffler(MLQuery{alpha, z, z_max});
  }, py::arg("alpha"), py::arg("z"), py::arg("z_max") = 10.0);

  m.def("base_weights", [](const std::string& generator, double alpha, std::size_t n_terms) {
    const auto w = base_weights({parse_generator_kind(generator), alpha}, n_terms);
    return std::vector<double>(w.values().begin(), w.values().end());
  }, py::arg("generator"), py::arg("alpha"), py::arg("n_terms"));

  m.def("averaged_weights", [](const std::string& generator, double alpha, std::size_t n_terms) {
    const auto base = base_weights({parse_generator_kind(generator), alpha}, n_terms);
    const auto w = averaged_weights(base);
    return std::vector<double>(w.values().begin(), w.values().end());
  }, py::arg("generator"), py::arg("alpha"), py::arg("n_terms"));

  m.def("symbol", [](const std::string& generator, double alpha, std::complex<double> zeta) {
    return symbol({parse_generator_kind(generator), alpha}, zeta);
  }, py::arg("generator"), py::arg("alpha"), py::arg("zeta"));

  m.def("consistency_residual", [](const std::string& generator, double alpha, double tau) {
    return consistency_residual({parse_generator_kind(generator), alpha}, tau);
  }, py::arg("generator"), py::arg("alpha"), py::arg("tau"));

  m.def("solve", [](const std::string& example, const std::string& scheme,
                    const std::string& generator, double alpha, std::size_t nsteps,
                    const std::string& space, std::optional<double> h, double a1, double a2) {
    ExperimentConfig c = make_config(example, scheme, generator, {alpha}, {nsteps}, space, h,
                                     "max", kDefaultReferenceSteps, a1, a2, false);
    const auto disc = make_space(c.space);
    const auto prob = make_problem(c.example, alpha);
    const auto traj = run(make_scheme(c, alpha), disc, prob, nsteps);
    py::dict out;
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
      times.push_back(static_cast<double>(n) * traj.tau);
      states.push_back(traj.states[n].values);
    }
    out["tau"] = traj.tau;
    out["times"] = times;
    out["states"] = states;
    out["errors"] = prob.exact ? py::cast(error_history(traj, disc, *prob.exact)) : py::none();
    return out;
  }, py::arg("example"), py::arg("scheme") = "acn", py::arg("generator") = "fbdf2",
     py::arg("alpha") = 0.5, py::arg("nsteps") = 128, py::arg("space") = "spectral",
     py::arg("h") = py::none(), py::arg("a1") = -0.25, py::arg("a2") = 0.25);

  m.def("residue_term", [](const std::string& example, const std::string& generator, double alpha,
                           double tau, std::size_t n, const std::string& space,
                           std::optional<double> h) {
    const auto disc = make_space(space_config(space, h));
    const auto prob = make_problem(parse_example(example), alpha);
    return residue_term(SchemeSpec::acn({parse_generator_kind(generator), alpha}), disc, prob, tau, n)
        .values;
  }, py::arg("example"), py::arg("generator"), py::arg("alpha"), py::arg("tau"), py::arg("n"),
     py::arg("space") = "spectral", py::arg("h") = py::none());

  m.def("measure", [](const std::string& example, const std::string& scheme,
                      const std::string& generator, std::vector<double> alphas,
                      std::vector<std::size_t> nsteps, const std::string& space,
                      std::optional<double> h, const std::string& eval, std::size_t nref, double a1,
                      double a2, bool fast_history) {
    return report_to_dict(measure(make_config(example, scheme, generator, std::move(alphas),
                                              std::move(nsteps), space, h, eval, nref, a1, a2,
                                              fast_history)));
  }, py::arg("example"), py::arg("scheme") = "acn", py::arg("generator") = "fbdf2",
     py::arg("alphas"), py::arg("nsteps"), py::arg("space") = "spectral", py::arg("h") = py::none(),
     py::arg("eval") = "fixed:0.5", py::arg("nref") = kDefaultReferenceSteps,
     py::arg("a1") = -0.25, py::arg("a2") = 0.25, py::arg("fast_history") = false);

  m.def("verify", [] {
    py::list out;
    for (const auto& r : run_property_suite()) out.append(py::make_tuple(r.name, r.passed, r.detail));
    return out;
  });
}
