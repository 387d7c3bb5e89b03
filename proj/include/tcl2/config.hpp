#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcl2/generator.hpp"

namespace tcl2 {

/// One swept parameter.  `param` is one of beta, s, omega_c, v12 or omegaK
/// (K = 1-based site index, the sink being the last site).
struct SweepAxis {
  std::string param;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;

  std::vector<double> values() const;
  friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

/// Observables a sweep can report per grid point.
inline const std::vector<std::string>& sweep_observable_names() {
  static const std::vector<std::string> names{"rho11_s",  "rho22_s",  "rho33_s",     "re_rho12_s",
                                              "im_rho12_s", "trace_distance_gibbs", "rho33_probe", "min_eig_s"};
  return names;
}

struct SweepSpec {
  std::vector<SweepAxis> axes;
  std::vector<std::string> observables = sweep_observable_names();
  double probe_time = 0.1;  // rho33_probe is rho33 at this time

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

/// Everything a command needs.  Defaults:
///   system.omega = [0.5, 1, 0], system.couplings = [{sites [1, 2], value 0.3}]
///   bath = {s 0.01, omega_c 1, beta 2}, mode = NM_BS, initial.site = 1
///   grid = {t_end 200, samples 2001}, compare_modes = [NM_BS, NM_SA, M_BS, M_SA]
///   sweep absent.
struct RunConfig {
  SiteSystem system;
  double s = 0.01;
  double omega_c = 1.0;
  double beta = 2.0;  // +inf allowed, written as "inf"
  ApproximationMode mode;
  int initial_site = 1;  // 1-based
  double t_end = 200.0;
  std::size_t samples = 2001;
  std::vector<ApproximationMode> compare_modes = default_compare_modes();
  std::optional<SweepSpec> sweep;

  static std::vector<ApproximationMode> default_compare_modes();

  Model model() const;
  CMatrix initial_state() const;
  std::vector<double> grid() const;

  /// Throws ConfigError listing every violated constraint.
  void validate() const;

  friend bool operator==(const RunConfig& a, const RunConfig& b);
};

/// Parses a JSON document.  Missing keys take defaults; unknown keys,
/// wrong types and out-of-range values are all reported in one ConfigError.
RunConfig parse_config(std::string_view text);

/// Canonical JSON with every field spelled out; parse_config inverts it.
std::string serialize_config(const RunConfig& config);

/// Applies a swept parameter value to a copy of `config`.
RunConfig with_parameter(const RunConfig& config, std::string_view param, double value);

bool is_sweep_parameter(std::string_view param, std::size_t dim);

}  // namespace tcl2
