#include "tcl2/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "json.hpp"

#include "tcl2/dynamics.hpp"
#include "tcl2/errors.hpp"

namespace tcl2 {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Walks a JSON document, recording every problem instead of stopping at
/// the first one.
class Reader {
 public:
  std::vector<std::string> errors;

  void error(const std::string& path, const std::string& what) { errors.push_back(path + ": " + what); }

  // Reports keys of `obj` not in `known`.  Returns false if obj is not an object.
  bool object(const ojson& obj, const std::string& path, std::initializer_list<std::string_view> known) {
    if (!obj.is_object()) {
      error(path, "expected an object");
      return false;
    }
    for (const auto& [key, value] : obj.items()) {
      bool ok = false;
      for (auto k : known) ok = ok || key == k;
      if (!ok) error(join(path, key), "unknown key");
    }
    return true;
  }

  std::optional<double> number(const ojson& obj, const std::string& path, const char* key, bool allow_inf = false) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (v.is_number()) return v.get<double>();
    if (allow_inf && v.is_string() && v.get<std::string>() == "inf") return kInf;
    error(join(path, key), allow_inf ? "expected a number or \"inf\"" : "expected a number");
    return std::nullopt;
  }

  std::optional<long long> integer(const ojson& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (v.is_number_integer()) return v.get<long long>();
    error(join(path, key), "expected an integer");
    return std::nullopt;
  }

  std::optional<std::string> string(const ojson& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (v.is_string()) return v.get<std::string>();
    error(join(path, key), "expected a string");
    return std::nullopt;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
};

std::optional<int> site_index(std::string_view param) {
  if (param.size() < 6 || param.substr(0, 5) != "omega" || param == "omega_c") return std::nullopt;
  int k = 0;
  for (char c : param.substr(5)) {
    if (c < '0' || c > '9') return std::nullopt;
    k = 10 * k + (c - '0');
  }
  return k;
}

void parse_system(Reader& rd, const ojson& doc, RunConfig& cfg) {
  const ojson& sys = doc.at("system");
  if (!rd.object(sys, "system", {"omega", "couplings"})) return;
  if (sys.contains("omega")) {
    const auto& w = sys.at("omega");
    if (!w.is_array()) {
      rd.error("system.omega", "expected an array of numbers");
    } else {
      cfg.system.omegas.clear();
      for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k].is_number()) {
          cfg.system.omegas.push_back(w[k].get<double>());
        } else {
          rd.error("system.omega[" + std::to_string(k) + "]", "expected a number");
        }
      }
    }
  }
  if (sys.contains("couplings")) {
    const auto& cs = sys.at("couplings");
    if (!cs.is_array()) {
      rd.error("system.couplings", "expected an array");
      return;
    }
    cfg.system.couplings.clear();
    for (std::size_t k = 0; k < cs.size(); ++k) {
      const std::string path = "system.couplings[" + std::to_string(k) + "]";
      if (!rd.object(cs[k], path, {"sites", "value"})) continue;
      SiteCoupling c;
      const auto& sites = cs[k].contains("sites") ? cs[k].at("sites") : ojson();
      if (!sites.is_array() || sites.size() != 2 || !sites[0].is_number_integer() || !sites[1].is_number_integer()) {
        rd.error(path + ".sites", "expected two 1-based site indices");
        continue;
      }
      c.i = sites[0].get<int>() - 1;
      c.j = sites[1].get<int>() - 1;
      if (c.i > c.j) std::swap(c.i, c.j);
      if (auto v = rd.number(cs[k], path, "value")) {
        c.value = *v;
      } else if (!cs[k].contains("value")) {
        rd.error(path + ".value", "missing");
      }
      cfg.system.couplings.push_back(c);
    }
  }
}

void parse_sweep(Reader& rd, const ojson& doc, RunConfig& cfg) {
  const ojson& sw = doc.at("sweep");
  if (sw.is_null()) return;
  if (!rd.object(sw, "sweep", {"axes", "observables", "probe_time"})) return;
  SweepSpec spec;
  if (!sw.contains("axes") || !sw.at("axes").is_array()) {
    rd.error("sweep.axes", "expected an array of axis objects");
  } else {
    const auto& axes = sw.at("axes");
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const std::string path = "sweep.axes[" + std::to_string(k) + "]";
      if (!rd.object(axes[k], path, {"param", "min", "max", "count"})) continue;
      SweepAxis axis;
      if (auto p = rd.string(axes[k], path, "param")) axis.param = *p;
      if (auto v = rd.number(axes[k], path, "min")) axis.min = *v;
      if (auto v = rd.number(axes[k], path, "max")) axis.max = *v;
      if (auto v = rd.integer(axes[k], path, "count")) {
        if (*v < 1) {
          rd.error(path + ".count", "must be >= 1");
        } else {
          axis.count = static_cast<std::size_t>(*v);
        }
      }
      for (const char* key : {"param", "min", "max", "count"}) {
        if (!axes[k].contains(key)) rd.error(path + "." + key, "missing");
      }
      spec.axes.push_back(axis);
    }
  }
  if (sw.contains("observables")) {
    const auto& obs = sw.at("observables");
    if (!obs.is_array()) {
      rd.error("sweep.observables", "expected an array of names");
    } else {
      spec.observables.clear();
      for (std::size_t k = 0; k < obs.size(); ++k) {
        if (obs[k].is_string()) {
          spec.observables.push_back(obs[k].get<std::string>());
        } else {
          rd.error("sweep.observables[" + std::to_string(k) + "]", "expected a string");
        }
      }
    }
  }
  if (auto v = rd.number(sw, "sweep", "probe_time")) spec.probe_time = *v;
  cfg.sweep = spec;
}

ojson to_json(const RunConfig& cfg) {
  ojson doc;
  ojson couplings = ojson::array();
  for (const auto& c : cfg.system.couplings) {
    couplings.push_back({{"sites", {c.i + 1, c.j + 1}}, {"value", c.value}});
  }
  doc["system"] = {{"omega", cfg.system.omegas}, {"couplings", couplings}};
  ojson bath = {{"s", cfg.s}, {"omega_c", cfg.omega_c}};
  if (std::isinf(cfg.beta)) {
    bath["beta"] = "inf";
  } else {
    bath["beta"] = cfg.beta;
  }
  doc["bath"] = bath;
  doc["mode"] = cfg.mode.name();
  doc["initial"] = {{"site", cfg.initial_site}};
  doc["grid"] = {{"t_end", cfg.t_end}, {"samples", cfg.samples}};
  ojson modes = ojson::array();
  for (const auto& m : cfg.compare_modes) modes.push_back(m.name());
  doc["compare_modes"] = modes;
  if (cfg.sweep) {
    ojson axes = ojson::array();
    for (const auto& a : cfg.sweep->axes) {
      axes.push_back({{"param", a.param}, {"min", a.min}, {"max", a.max}, {"count", a.count}});
    }
    doc["sweep"] = {{"axes", axes}, {"observables", cfg.sweep->observables}, {"probe_time", cfg.sweep->probe_time}};
  } else {
    doc["sweep"] = nullptr;
  }
  return doc;
}

}  // namespace

std::vector<double> SweepAxis::values() const {
  if (count == 1) return {min};
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = min + (max - min) * static_cast<double>(k) / static_cast<double>(count - 1);
  }
  out.back() = max;
  return out;
}

std::vector<ApproximationMode> RunConfig::default_compare_modes() {
  return {ApproximationMode::parse("NM_BS"), ApproximationMode::parse("NM_SA"), ApproximationMode::parse("M_BS"),
          ApproximationMode::parse("M_SA")};
}

Model RunConfig::model() const { return Model{system, OhmicBath(s, omega_c, beta)}; }

CMatrix RunConfig::initial_state() const { return site_state(system.dim(), initial_site - 1); }

std::vector<double> RunConfig::grid() const { return uniform_grid(t_end, samples); }

bool is_sweep_parameter(std::string_view param, std::size_t dim) {
  if (param == "beta" || param == "s" || param == "omega_c" || param == "v12") return true;
  const auto k = site_index(param);
  return k && *k >= 1 && static_cast<std::size_t>(*k) <= dim;
}

void RunConfig::validate() const {
  std::vector<std::string> errors;
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };
  if (system.omegas.size() < 3) errors.push_back("system.omega: need at least two transfer sites and the sink");
  for (std::size_t k = 0; k < system.omegas.size(); ++k) {
    check(std::isfinite(system.omegas[k]), "system.omega[" + std::to_string(k) + "]: must be finite");
  }
  const int n = static_cast<int>(system.n_sites());
  for (std::size_t k = 0; k < system.couplings.size(); ++k) {
    const auto& c = system.couplings[k];
    const std::string path = "system.couplings[" + std::to_string(k) + "]";
    check(c.i != c.j && c.i >= 0 && c.j < n, path + ".sites: must be two distinct transfer sites in 1.." + std::to_string(n));
    check(std::isfinite(c.value), path + ".value: must be finite");
  }
  check(std::isfinite(s) && s >= 0.0, "bath.s: must be finite and >= 0");
  check(std::isfinite(omega_c) && omega_c > 0.0, "bath.omega_c: must be finite and > 0");
  check(beta > 0.0, "bath.beta: must be > 0");
  check(initial_site >= 1 && static_cast<std::size_t>(initial_site) <= system.dim(),
        "initial.site: must be in 1.." + std::to_string(system.dim()));
  check(std::isfinite(t_end) && t_end > 0.0, "grid.t_end: must be finite and > 0");
  check(samples >= 2, "grid.samples: must be >= 2");
  check(!compare_modes.empty(), "compare_modes: must not be empty");
  if (sweep) {
    check(!sweep->axes.empty() && sweep->axes.size() <= 2, "sweep.axes: need one or two axes");
    for (std::size_t k = 0; k < sweep->axes.size(); ++k) {
      const auto& a = sweep->axes[k];
      const std::string path = "sweep.axes[" + std::to_string(k) + "]";
      check(is_sweep_parameter(a.param, system.dim()),
            path + ".param: '" + a.param + "' is not one of beta, s, omega_c, v12, omega1..omega" +
                std::to_string(system.dim()));
      check(std::isfinite(a.min) && std::isfinite(a.max) && a.min <= a.max, path + ": need finite min <= max");
      check(a.count >= 1, path + ".count: must be >= 1");
      check(a.count > 1 || a.min == a.max, path + ": count 1 needs min == max");
      if (a.param == "beta" || a.param == "omega_c") check(a.min > 0.0, path + ".min: " + a.param + " must be > 0");
      if (a.param == "s") check(a.min >= 0.0, path + ".min: s must be >= 0");
      if (k == 1) check(a.param != sweep->axes[0].param, path + ".param: axes must differ");
    }
    check(!sweep->observables.empty(), "sweep.observables: must not be empty");
    const auto& known = sweep_observable_names();
    std::set<std::string> seen;
    for (const auto& o : sweep->observables) {
      check(std::find(known.begin(), known.end(), o) != known.end(), "sweep.observables: unknown observable '" + o + "'");
      check(seen.insert(o).second, "sweep.observables: duplicate '" + o + "'");
    }
    check(std::isfinite(sweep->probe_time) && sweep->probe_time > 0.0, "sweep.probe_time: must be finite and > 0");
  }
  if (errors.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& e : errors) msg += "\n  " + e;
  throw ConfigError(msg);
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  if (a.system.omegas != b.system.omegas || a.system.couplings.size() != b.system.couplings.size()) return false;
  for (std::size_t k = 0; k < a.system.couplings.size(); ++k) {
    const auto& x = a.system.couplings[k];
    const auto& y = b.system.couplings[k];
    if (x.i != y.i || x.j != y.j || x.value != y.value) return false;
  }
  return a.s == b.s && a.omega_c == b.omega_c && a.beta == b.beta && a.mode == b.mode &&
         a.initial_site == b.initial_site && a.t_end == b.t_end && a.samples == b.samples &&
         a.compare_modes == b.compare_modes && a.sweep == b.sweep;
}

RunConfig parse_config(std::string_view text) {
  ojson doc;
  bool blank = true;
  for (char c : text) blank = blank && std::isspace(static_cast<unsigned char>(c));
  if (blank) {
    doc = ojson::object();
  } else {
    try {
      doc = ojson::parse(text);
    } catch (const ojson::parse_error& e) {
      throw ConfigError(std::string("invalid configuration: not valid JSON: ") + e.what());
    }
  }

  Reader rd;
  RunConfig cfg;
  if (!rd.object(doc, "(document)", {"system", "bath", "mode", "initial", "grid", "compare_modes", "sweep"})) {
    throw ConfigError("invalid configuration:\n  (document): expected an object");
  }
  if (doc.contains("system")) parse_system(rd, doc, cfg);
  if (doc.contains("bath") && rd.object(doc.at("bath"), "bath", {"s", "omega_c", "beta"})) {
    const auto& b = doc.at("bath");
    if (auto v = rd.number(b, "bath", "s")) cfg.s = *v;
    if (auto v = rd.number(b, "bath", "omega_c")) cfg.omega_c = *v;
    if (auto v = rd.number(b, "bath", "beta", true)) cfg.beta = *v;
  }
  if (auto m = rd.string(doc, "", "mode")) {
    try {
      cfg.mode = ApproximationMode::parse(*m);
    } catch (const ConfigError& e) {
      rd.error("mode", e.what());
    }
  }
  if (doc.contains("initial") && rd.object(doc.at("initial"), "initial", {"site"})) {
    if (auto v = rd.integer(doc.at("initial"), "initial", "site")) cfg.initial_site = static_cast<int>(*v);
  }
  if (doc.contains("grid") && rd.object(doc.at("grid"), "grid", {"t_end", "samples"})) {
    const auto& g = doc.at("grid");
    if (auto v = rd.number(g, "grid", "t_end")) cfg.t_end = *v;
    if (auto v = rd.integer(g, "grid", "samples")) {
      if (*v < 0) {
        rd.error("grid.samples", "must be >= 2");
      } else {
        cfg.samples = static_cast<std::size_t>(*v);
      }
    }
  }
  if (doc.contains("compare_modes")) {
    const auto& ms = doc.at("compare_modes");
    if (!ms.is_array()) {
      rd.error("compare_modes", "expected an array of mode names");
    } else {
      cfg.compare_modes.clear();
      for (std::size_t k = 0; k < ms.size(); ++k) {
        const std::string path = "compare_modes[" + std::to_string(k) + "]";
        if (!ms[k].is_string()) {
          rd.error(path, "expected a string");
          continue;
        }
        try {
          cfg.compare_modes.push_back(ApproximationMode::parse(ms[k].get<std::string>()));
        } catch (const ConfigError& e) {
          rd.error(path, e.what());
        }
      }
    }
  }
  if (doc.contains("sweep")) parse_sweep(rd, doc, cfg);

  std::vector<std::string> errors = std::move(rd.errors);
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    // validate() reports one violation per line after the heading
    std::string_view rest(e.what());
    for (auto pos = rest.find("\n  "); pos != std::string_view::npos; pos = rest.find("\n  ")) {
      rest.remove_prefix(pos + 3);
      const auto end = rest.find('\n');
      errors.emplace_back(rest.substr(0, end));
    }
  }
  if (errors.empty()) return cfg;
  std::string msg = "invalid configuration:";
  for (const auto& e : errors) msg += "\n  " + e;
  throw ConfigError(msg);
}

std::string serialize_config(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

RunConfig with_parameter(const RunConfig& config, std::string_view param, double value) {
  RunConfig out = config;
  if (param == "beta") {
    out.beta = value;
  } else if (param == "s") {
    out.s = value;
  } else if (param == "omega_c") {
    out.omega_c = value;
  } else if (param == "v12") {
    out.system.set_coupling(0, 1, value);
  } else if (auto k = site_index(param); k && *k >= 1 && static_cast<std::size_t>(*k) <= out.system.dim()) {
    out.system.omegas[static_cast<std::size_t>(*k - 1)] = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + std::string(param) + "'");
  }
  return out;
}

}  // namespace tcl2
