#include "tcl2/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "tcl2/dynamics.hpp"
#include "tcl2/errors.hpp"
#include "tcl2/parallel.hpp"
#include "tcl2/stationary.hpp"

#ifndef TCL2_VERSION
#define TCL2_VERSION "unknown"
#endif

namespace tcl2 {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ojson tolerances() {
  const EvolveOptions ev;
  return {{"ode_rel_tol", ev.rel_tol},      {"ode_abs_tol", ev.abs_tol},
          {"phi_rel_tol", kPhiRelTol},      {"phi_abs_tol", kPhiAbsTol},
          {"principal_value_rel_tol", kPvRelTol}, {"degeneracy_tol", kDegeneracyTol},
          {"null_space_rel_tol", kNullRelTol}};
}

ojson number_or_null(std::optional<double> v) { return v ? ojson(*v) : ojson(nullptr); }

/// Collects the files of one command run and writes the manifest last.
class Run {
 public:
  Run(std::string command, const RunConfig& config, const CommandOptions& options)
      : command_(std::move(command)), config_(config), options_(options), started_(utc_now()), t0_(Clock::now()) {
    fs::create_directories(options_.out_dir);
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(options_.out_dir / name, std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("cannot write " + (options_.out_dir / name).string());
    result_.outputs.push_back(name);
  }

  ojson& extra() { return extra_; }

  CommandResult finish(int exit_code, std::string message = {}) {
    result_.exit_code = exit_code;
    result_.message = std::move(message);
    const double wall = std::chrono::duration<double>(Clock::now() - t0_).count();
    std::vector<std::string> outputs = result_.outputs;
    outputs.push_back("manifest.json");
    ojson m;
    m["command"] = command_;
    m["tool_version"] = TCL2_VERSION;
    m["config"] = ojson::parse(serialize_config(config_));
    m["tolerances"] = tolerances();
    m["jobs"] = resolve_jobs(options_.jobs);
    m["started_at"] = started_;
    m["wall_clock_seconds"] = wall;
    m["exit_code"] = exit_code;
    m["status"] = exit_code == kExitOk ? "ok" : exit_code == kExitPartial ? "partial" : "failed";
    m["message"] = result_.message;
    m["outputs"] = outputs;
    for (auto& [k, v] : extra_.items()) m[k] = v;
    std::ofstream f(options_.out_dir / "manifest.json", std::ios::binary);
    f << m.dump(2) << "\n";
    result_.outputs = outputs;
    return result_;
  }

 private:
  std::string command_;
  const RunConfig& config_;
  CommandOptions options_;
  std::string started_;
  Clock::time_point t0_;
  CommandResult result_;
  ojson extra_ = ojson::object();
};

template <class Body>
CommandResult guarded(const std::string& command, const RunConfig& config, const CommandOptions& options, Body&& body) {
  std::optional<Run> run;
  try {
    run.emplace(command, config, options);
    config.validate();
    return body(*run);
  } catch (const ConfigError& e) {
    if (run) return run->finish(kExitConfig, e.what());
    return {kExitConfig, {}, e.what()};
  } catch (const IntegrationFailure& e) {
    if (run) run->extra()["last_good_time"] = e.last_good_time();
    if (run) return run->finish(kExitNumerical, e.what());
    return {kExitNumerical, {}, e.what()};
  } catch (const MultiplicityError& e) {
    if (run) return run->finish(kExitNumerical, e.what());
    return {kExitNumerical, {}, e.what()};
  } catch (const NumericalFailure& e) {
    if (run) return run->finish(kExitNumerical, e.what());
    return {kExitNumerical, {}, e.what()};
  } catch (const std::exception& e) {
    if (run) return run->finish(1, e.what());
    return {1, {}, e.what()};
  }
}

ojson matrix_json(const CMatrix& m) {
  ojson re = ojson::array();
  ojson im = ojson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ojson rr = ojson::array();
    ojson ri = ojson::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"real", re}, {"imag", im}};
}

std::string trajectory_csv(const Trajectory& tr) {
  std::string out = "t,rho11,rho22,rho33,re_rho12,im_rho12,min_eig,trace\n";
  for (const auto& o : tr.observables()) {
    for (double v : {o.t, o.rho11, o.rho22, o.rho33, o.re_rho12, o.im_rho12, o.min_eig}) {
      out += format_number(v);
      out += ',';
    }
    out += format_number(o.trace);
    out += '\n';
  }
  return out;
}

double oscillation_period(const SiteSystem& sys) {
  const double dw = sys.omegas[0] - sys.omegas[1];
  const double dm = std::hypot(dw, 2.0 * sys.coupling(0, 1));
  return dm > 0.0 ? 2.0 * std::numbers::pi / dm : 0.0;
}

struct PointValues {
  std::vector<double> values;
  std::vector<std::string> status;
  std::string error;
};

PointValues sweep_point(const RunConfig& cfg, const std::vector<std::string>& observables, double probe_time) {
  PointValues out{std::vector<double>(observables.size(), std::nan("")),
                  std::vector<std::string>(observables.size(), "failed"), {}};
  auto note = [&](const std::exception& e) {
    if (!out.error.empty()) out.error += "; ";
    out.error += e.what();
  };
  const Model model = cfg.model();
  std::optional<CMatrix> rho;
  bool stationary_tried = false;
  for (std::size_t k = 0; k < observables.size(); ++k) {
    const std::string& name = observables[k];
    try {
      double v = 0.0;
      if (name == "rho33_probe") {
        const std::vector<double> grid{probe_time};
        v = evolve(model, cfg.initial_state(), cfg.mode, grid).states.back()(2, 2).real();
      } else {
        if (!stationary_tried) {
          stationary_tried = true;
          try {
            rho = stationary_state(model, cfg.mode).rho;
          } catch (const std::exception& e) {
            note(e);
          }
        }
        if (!rho) continue;
        const CMatrix& r = *rho;
        if (name == "rho11_s") v = r(0, 0).real();
        if (name == "rho22_s") v = r(1, 1).real();
        if (name == "rho33_s") v = r(2, 2).real();
        if (name == "re_rho12_s") v = r(0, 1).real();
        if (name == "im_rho12_s") v = r(0, 1).imag();
        if (name == "min_eig_s") v = min_eigenvalue(r);
        if (name == "trace_distance_gibbs") {
          v = trace_distance(r, gibbs_state(build_hamiltonian(model.system), model.bath.beta()));
        }
      }
      out.values[k] = v;
      out.status[k] = "ok";
    } catch (const std::exception& e) {
      note(e);
    }
  }
  return out;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CommandResult cmd_evolve(const RunConfig& config, const CommandOptions& options) {
  return guarded("evolve", config, options, [&](Run& run) {
    const auto grid = config.grid();
    std::optional<IntegrationFailure> failure;
    const Trajectory tr = evolve_partial(config.model(), config.initial_state(), config.mode, grid, failure);
    run.write("trajectory.csv", trajectory_csv(tr));
    run.extra()["mode"] = config.mode.name();
    run.extra()["engine"] = tr.engine == Engine::Sector ? "sector" : "full_matrix";
    run.extra()["rows"] = tr.times.size();
    run.extra()["partial"] = failure.has_value();
    run.extra()["max_trace_drift"] = tr.states.empty() ? 0.0 : tr.max_trace_drift();
    run.extra()["max_hermiticity_drift"] = tr.states.empty() ? 0.0 : tr.max_hermiticity_drift();
    if (failure) {
      run.extra()["last_good_time"] = failure->last_good_time();
      return run.finish(kExitNumerical, failure->what());
    }
    return run.finish(kExitOk);
  });
}

CommandResult cmd_steady(const RunConfig& config, const CommandOptions& options) {
  return guarded("steady", config, options, [&](Run& run) {
    const Model model = config.model();
    const auto st = stationary_state(model, config.mode);
    const auto z = stationary_state_z_extrapolation(model, config.mode, config.initial_state());
    const CMatrix gibbs = gibbs_state(build_hamiltonian(model.system), model.bath.beta());

    ojson doc;
    doc["mode"] = config.mode.name();
    doc["method"] = to_string(st.method);
    doc["rho"] = matrix_json(st.rho);
    doc["residual"] = st.residual;
    doc["min_eigenvalue"] = min_eigenvalue(st.rho);
    doc["trace_distance_gibbs"] = trace_distance(st.rho, gibbs);
    doc["z_extrapolation_max_abs_difference"] = (st.rho - z.rho).cwiseAbs().maxCoeff();
    doc["gibbs"] = matrix_json(gibbs);
    if (config.mode.approach == Approach::Local) {
      const CMatrix la = la_analytic_stationary(model.bath.beta(), model.system.omegas[1], model.system.omegas[2]);
      doc["local_closed_form"] = matrix_json(la);
      doc["local_closed_form_max_abs_difference"] = (st.rho - la).cwiseAbs().maxCoeff();
    }
    run.write("stationary.json", doc.dump(2) + "\n");

    std::string csv = "row,col,re,im\n";
    for (Eigen::Index r = 0; r < st.rho.rows(); ++r) {
      for (Eigen::Index c = 0; c < st.rho.cols(); ++c) {
        csv += std::to_string(r + 1) + "," + std::to_string(c + 1) + "," + format_number(st.rho(r, c).real()) + "," +
               format_number(st.rho(r, c).imag()) + "\n";
      }
    }
    run.write("stationary.csv", csv);
    return run.finish(kExitOk);
  });
}

CommandResult cmd_sweep(const RunConfig& config, const CommandOptions& options) {
  return guarded("sweep", config, options, [&](Run& run) {
    if (!config.sweep) throw ConfigError("sweep: the config has no sweep section");
    const SweepSpec& spec = *config.sweep;
    std::vector<std::vector<double>> axis_values;
    for (const auto& a : spec.axes) axis_values.push_back(a.values());
    const std::size_t inner = axis_values.size() == 2 ? axis_values[1].size() : 1;
    const std::size_t points = axis_values[0].size() * inner;

    auto point_config = [&](std::size_t p) {
      RunConfig c = with_parameter(config, spec.axes[0].param, axis_values[0][p / inner]);
      if (axis_values.size() == 2) c = with_parameter(c, spec.axes[1].param, axis_values[1][p % inner]);
      return c;
    };

    std::vector<PointValues> results(points);
    parallel_for(points, options.jobs, [&](std::size_t p) {
      try {
        const RunConfig c = point_config(p);
        c.validate();
        results[p] = sweep_point(c, spec.observables, spec.probe_time);
      } catch (const std::exception& e) {
        results[p] = {std::vector<double>(spec.observables.size(), std::nan("")),
                      std::vector<std::string>(spec.observables.size(), "failed"), e.what()};
      }
    });

    std::string csv;
    for (const auto& a : spec.axes) csv += a.param + ",";
    csv += "observable,value,status\n";
    ojson failures = ojson::array();
    std::size_t failed_rows = 0;
    for (std::size_t p = 0; p < points; ++p) {
      std::string prefix = format_number(axis_values[0][p / inner]) + ",";
      if (axis_values.size() == 2) prefix += format_number(axis_values[1][p % inner]) + ",";
      const auto& r = results[p];
      for (std::size_t k = 0; k < spec.observables.size(); ++k) {
        csv += prefix + spec.observables[k] + "," + format_number(r.values[k]) + "," + r.status[k] + "\n";
        if (r.status[k] != "ok") ++failed_rows;
      }
      if (!r.error.empty()) {
        ojson f = {{"point", p}, {"error", r.error}};
        for (std::size_t a = 0; a < spec.axes.size(); ++a) {
          f[spec.axes[a].param] = a == 0 ? axis_values[0][p / inner] : axis_values[1][p % inner];
        }
        failures.push_back(f);
      }
    }
    run.write("sweep.csv", csv);
    run.extra()["mode"] = config.mode.name();
    run.extra()["points"] = points;
    run.extra()["rows"] = points * spec.observables.size();
    run.extra()["failed_rows"] = failed_rows;
    run.extra()["failures"] = failures;
    const std::size_t total = points * spec.observables.size();
    if (failed_rows == 0) return run.finish(kExitOk);
    if (failed_rows == total) return run.finish(kExitNumerical, "every sweep point failed");
    return run.finish(kExitPartial, std::to_string(failed_rows) + " of " + std::to_string(total) + " rows failed");
  });
}

CommandResult cmd_positivity_scan(const RunConfig& config, const CommandOptions& options) {
  return guarded("positivity-scan", config, options, [&](Run& run) {
    std::vector<double> betas = SweepAxis{"beta", 0.5, 4.0, 21}.values();
    std::vector<double> v12s = SweepAxis{"v12", 0.05, 0.5, 21}.values();
    if (config.sweep) {
      const auto& axes = config.sweep->axes;
      if (axes.size() != 2 || axes[0].param != "beta" || axes[1].param != "v12") {
        throw ConfigError("positivity-scan: sweep axes must be [beta, v12]");
      }
      betas = axes[0].values();
      v12s = axes[1].values();
    }
    const Model base = config.model();
    if (!base.is_dimer()) throw ConfigError("positivity-scan needs two transfer sites");
    const PositivityScan scan = positivity_scan(base, betas, v12s, options.jobs);

    std::string csv = "beta,v12,min_eig,status\n";
    std::size_t failed = 0;
    std::optional<double> lowest;
    for (std::size_t i = 0; i < betas.size(); ++i) {
      for (std::size_t j = 0; j < v12s.size(); ++j) {
        const auto v = scan.at(i, j);
        if (!v) ++failed;
        if (v && (!lowest || *v < *lowest)) lowest = v;
        csv += format_number(betas[i]) + "," + format_number(v12s[j]) + "," + format_number(v ? *v : std::nan("")) +
               "," + (v ? "ok" : "failed") + "\n";
      }
    }
    run.write("positivity.csv", csv);

    ojson boundary = ojson::array();
    for (std::size_t j = 0; j < v12s.size(); ++j) {
      boundary.push_back({{"v12", v12s[j]}, {"beta", number_or_null(scan.boundary_beta[j])}});
    }
    ojson errors = ojson::array();
    for (std::size_t k = 0; k < scan.errors.size(); ++k) {
      if (scan.errors[k].empty()) continue;
      errors.push_back({{"beta", betas[k / v12s.size()]}, {"v12", v12s[k % v12s.size()]}, {"error", scan.errors[k]}});
    }
    ojson summary = {{"omega1", scan.omega1},
                     {"mode", "M_BS"},
                     {"min_eigenvalue", number_or_null(lowest)},
                     {"failed_points", failed},
                     {"boundary", boundary},
                     {"errors", errors}};
    run.write("positivity_summary.json", summary.dump(2) + "\n");
    if (failed == 0) return run.finish(kExitOk);
    if (failed == betas.size() * v12s.size()) return run.finish(kExitNumerical, "every scan point failed");
    return run.finish(kExitPartial, std::to_string(failed) + " scan points failed");
  });
}

CommandResult cmd_compare_modes(const RunConfig& config, const CommandOptions& options) {
  return guarded("compare-modes", config, options, [&](Run& run) {
    const auto& modes = config.compare_modes;
    if (modes.size() < 2) throw ConfigError("compare-modes needs at least two modes");
    const auto grid = config.grid();
    const Model model = config.model();
    std::vector<Trajectory> runs(modes.size());
    parallel_for(modes.size(), options.jobs,
                 [&](std::size_t k) { runs[k] = evolve(model, config.initial_state(), modes[k], grid); });

    std::vector<std::vector<double>> rho33;
    for (const auto& tr : runs) rho33.push_back(tr.element(2, 2));
    std::string csv = "t";
    for (const auto& m : modes) csv += "," + m.name();
    csv += "\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      csv += format_number(grid[i]);
      for (const auto& col : rho33) csv += "," + format_number(col[i]);
      csv += "\n";
    }
    run.write("compare.csv", csv);

    const double period = oscillation_period(model.system);
    const double window = std::min(20.0, config.t_end);
    ojson per_mode = ojson::array();
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const auto& col = rho33[k];
      ojson entry = {{"mode", modes[k].name()},
                     {"first_sign_change", number_or_null(first_sign_change(grid, col))},
                     {"min_rho33", *std::min_element(col.begin(), col.end())},
                     {"final_rho33", col.back()}};
      if (period > 0.0 && window > period) {
        entry["detrended_amplitude"] = detrended_amplitude(grid, col, 0.0, window, period);
      } else {
        entry["detrended_amplitude"] = nullptr;
      }
      per_mode.push_back(entry);
    }
    ojson summary = {{"observable", "rho33"},
                     {"amplitude_window", {0.0, window}},
                     {"amplitude_period", period},
                     {"modes", per_mode}};
    run.write("compare_summary.json", summary.dump(2) + "\n");
    return run.finish(kExitOk);
  });
}

}  // namespace tcl2
