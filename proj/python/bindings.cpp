#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "tcl2/commands.hpp"
#include "tcl2/config.hpp"
#include "tcl2/dynamics.hpp"
#include "tcl2/errors.hpp"
#include "tcl2/stationary.hpp"

namespace py = pybind11;
using namespace tcl2;

namespace {

ApproximationMode mode_of(const std::string& name) { return ApproximationMode::parse(name); }

py::array_t<std::complex<double>> stack(const std::vector<CMatrix>& states) {
  const auto dim = static_cast<py::ssize_t>(states.empty() ? 0 : states.front().rows());
  py::array_t<std::complex<double>> out({static_cast<py::ssize_t>(states.size()), dim, dim});
  auto view = out.mutable_unchecked<3>();
  for (py::ssize_t k = 0; k < view.shape(0); ++k) {
    for (py::ssize_t r = 0; r < dim; ++r) {
      for (py::ssize_t c = 0; c < dim; ++c) view(k, r, c) = states[k](r, c);
    }
  }
  return out;
}

CommandResult run_command(const std::string& command, const std::string& config_json, const std::string& out_dir,
                          unsigned jobs) {
  const RunConfig config = parse_config(config_json);
  const CommandOptions options{out_dir, jobs};
  if (command == "evolve") return cmd_evolve(config, options);
  if (command == "steady") return cmd_steady(config, options);
  if (command == "sweep") return cmd_sweep(config, options);
  if (command == "positivity-scan") return cmd_positivity_scan(config, options);
  if (command == "compare-modes") return cmd_compare_modes(config, options);
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "TCL2 master-equation simulator for a dimer coupled to a sink through an Ohmic bath.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IntegrationFailure>(m, "IntegrationFailure", PyExc_RuntimeError);
  py::register_exception<MultiplicityError>(m, "MultiplicityError", PyExc_RuntimeError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);

  m.attr("MODES") = std::vector<std::string>{"NM_BS", "NM_SA", "M_BS", "M_SA", "LA_NM_BS", "LA_NM_SA", "LA_M_BS", "LA_M_SA"};

  py::class_<OhmicBath>(m, "OhmicBath")
      .def(py::init<double, double, double>(), py::arg("s") = 0.01, py::arg("omega_c") = 1.0, py::arg("beta") = 2.0)
      .def_property_readonly("s", &OhmicBath::s)
      .def_property_readonly("omega_c", &OhmicBath::omega_c)
      .def_property_readonly("beta", &OhmicBath::beta)
      .def("spectral_density", &OhmicBath::spectral_density, py::arg("nu"))
      .def("noise_kernel", &OhmicBath::noise_kernel, py::arg("tau"))
      .def("dissipation_kernel", &OhmicBath::dissipation_kernel, py::arg("tau"))
      .def("phi", &OhmicBath::phi, py::arg("mu"), py::arg("t") = kMarkov, "Phi(mu, t); t = inf gives the Markov limit")
      .def("__repr__", [](const OhmicBath& b) {
        return "OhmicBath(s=" + format_number(b.s()) + ", omega_c=" + format_number(b.omega_c()) +
               ", beta=" + format_number(b.beta()) + ")";
      });

  py::class_<SiteSystem>(m, "SiteSystem")
      .def(py::init<>())
      .def_static("dimer", &SiteSystem::dimer, py::arg("omega1") = 0.5, py::arg("omega2") = 1.0,
                  py::arg("omega3") = 0.0, py::arg("v12") = 0.3)
      .def_readwrite("omegas", &SiteSystem::omegas)
      .def("coupling", &SiteSystem::coupling, py::arg("i"), py::arg("j"), "0-based transfer-site indices")
      .def("set_coupling", &SiteSystem::set_coupling, py::arg("i"), py::arg("j"), py::arg("value"))
      .def("hamiltonian", [](const SiteSystem& s) { return build_hamiltonian(s); });

  py::class_<Model>(m, "Model")
      .def(py::init([](const SiteSystem& sys, const OhmicBath& bath) { return Model{sys, bath}; }),
           py::arg("system") = SiteSystem{}, py::arg("bath") = OhmicBath{})
      .def_readwrite("system", &Model::system)
      .def_readwrite("bath", &Model::bath);

  m.def(
      "evolve",
      [](const Model& model, const std::vector<double>& times, const std::string& mode, int initial_site,
         double rel_tol, double abs_tol) {
        EvolveOptions opt;
        opt.rel_tol = rel_tol;
        opt.abs_tol = abs_tol;
        Trajectory tr;
        {
          py::gil_scoped_release release;
          tr = evolve(model, site_state(model.system.dim(), initial_site - 1), mode_of(mode), times, opt);
        }
        return py::make_tuple(py::array_t<double>(static_cast<py::ssize_t>(tr.times.size()), tr.times.data()),
                              stack(tr.states));
      },
      py::arg("model"), py::arg("times"), py::arg("mode") = "NM_BS", py::arg("initial_site") = 1,
      py::arg("rel_tol") = EvolveOptions{}.rel_tol, py::arg("abs_tol") = EvolveOptions{}.abs_tol,
      "Returns (times, states) with states of shape (len(times), dim, dim) in the site basis.");

  m.def(
      "stationary_state",
      [](const Model& model, const std::string& mode) {
        const auto st = stationary_state(model, mode_of(mode));
        return py::make_tuple(st.rho, st.residual);
      },
      py::arg("model"), py::arg("mode") = "M_BS", "Returns (rho, residual).");

  m.def("la_analytic_stationary", &la_analytic_stationary, py::arg("beta"), py::arg("omega2") = 1.0,
        py::arg("omega3") = 0.0);
  m.def("gibbs_state", [](const SiteSystem& s, double beta) { return gibbs_state(build_hamiltonian(s), beta); },
        py::arg("system"), py::arg("beta"));
  m.def("trace_distance", &trace_distance, py::arg("rho"), py::arg("sigma"));
  m.def("min_eigenvalue", &min_eigenvalue, py::arg("rho"));

  m.def("parse_config", [](const std::string& text) { return serialize_config(parse_config(text)); },
        py::arg("text"), "Validates a JSON config and returns it with every default filled in.");

  m.def(
      "run_command",
      [](const std::string& command, const std::string& config_json, const std::string& out_dir, unsigned jobs) {
        CommandResult r;
        {
          py::gil_scoped_release release;
          r = run_command(command, config_json, out_dir, jobs);
        }
        return py::make_tuple(r.exit_code, r.outputs, r.message);
      },
      py::arg("command"), py::arg("config_json") = "", py::arg("out_dir") = ".", py::arg("jobs") = 0,
      "Runs a command-line subcommand; returns (exit_code, output_files, message).");
}
