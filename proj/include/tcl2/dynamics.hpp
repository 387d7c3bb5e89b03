#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tcl2/errors.hpp"
#include "tcl2/generator.hpp"

namespace tcl2 {

enum class Engine {
  Auto,         // sector engine when it applies, full matrix otherwise
  Sector,       // {rho11, rho22, rho33, rho12, rho21} with the coefficient blocks
  FullMatrix,   // every density-matrix element with the eigenbasis dissipator
};

struct EvolveOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double initial_dt = 1e-3;
  std::size_t max_steps = 1'000'000;  // per output interval
  Engine engine = Engine::Auto;
};

struct Observables {
  double t = 0.0;
  double rho11 = 0.0;
  double rho22 = 0.0;
  double rho33 = 0.0;
  double re_rho12 = 0.0;
  double im_rho12 = 0.0;
  double min_eig = 0.0;
  double trace = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<CMatrix> states;  // site basis, not symmetrized
  std::vector<PhiValues> phi;   // Phi the generator used at each sample (co-integrated for non-Markov modes)
  Engine engine = Engine::Auto;
  std::size_t rhs_evaluations = 0;

  std::vector<Observables> observables() const;
  std::vector<double> element(int row, int col) const;  // real part along the trajectory
  double max_trace_drift() const;
  double max_hermiticity_drift() const;
};

CMatrix site_state(std::size_t dim, int site);

/// Integrates d rho / dt = -i[H, rho] + D_t(rho) from t = 0.  Non-Markov
/// modes carry Phi(eps, t) as extra ODE components; Born-Markov modes use
/// Phi(eps, inf) from t = 0.  Throws IntegrationFailure.
Trajectory evolve(const Model& model, const CMatrix& initial, const ApproximationMode& mode,
                  std::span<const double> output_grid, const EvolveOptions& options = {});

/// Same as evolve, but an IntegrationFailure is reported through `failure`
/// and the samples taken before it are returned.
Trajectory evolve_partial(const Model& model, const CMatrix& initial, const ApproximationMode& mode,
                          std::span<const double> output_grid, std::optional<IntegrationFailure>& failure,
                          const EvolveOptions& options = {});

std::vector<double> uniform_grid(double t_end, std::size_t samples);

double min_eigenvalue(const CMatrix& state);

/// First time the series changes sign, linearly interpolated between the two
/// bracketing samples.  Exact zeros do not count as a sign.
std::optional<double> first_sign_change(std::span<const double> times, std::span<const double> values);

/// Peak-to-peak size of `values - moving_average_period(values)` over the part
/// of [t_lo, t_hi] where the centered window of length `period` fits.
double detrended_amplitude(std::span<const double> times, std::span<const double> values, double t_lo,
                           double t_hi, double period);

}  // namespace tcl2
