#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tcl2/generator.hpp"

namespace tcl2 {

enum class StationaryMethod { NullSpace, ZExtrapolation, AnalyticLocal };

std::string to_string(StationaryMethod m);

/// Singular values below this fraction of the largest count as null.
inline constexpr double kNullRelTol = 1e-9;

struct StationaryResult {
  CMatrix rho;  // 3x3 site basis
  StationaryMethod method = StationaryMethod::NullSpace;
  double residual = 0.0;  // max |L_inf(rho)| with the full Born-Markov generator
};

/// Stationary state from the final-value theorem at z -> 0: the right null
/// vector of G_P + G_PC (-G_C)^{-1} G_CP, normalized to unit population, with
/// coherences (-G_C)^{-1} G_CP rho_P.  Non-Markov modes use their t -> inf
/// blocks.  Throws MultiplicityError when the null space is not
/// one-dimensional and NumericalFailure when G_C is singular.
StationaryResult stationary_state(const Model& model, const ApproximationMode& mode);

/// Independent route: z rho_P[z] from the Laplace-domain solution at
/// z = 1e-5, 1e-6, 1e-7, polynomially extrapolated to z = 0.
StationaryResult stationary_state_z_extrapolation(const Model& model, const ApproximationMode& mode,
                                                  const CMatrix& initial);

/// max |(-i[H, .] + D_inf)(rho)| for the mode's Born-Markov generator.
double stationary_residual(const Model& model, const ApproximationMode& mode, const CMatrix& rho);

/// Local-approach closed form: rho11 = rho22 = e^{-beta w2}/Z, rho33 = e^{-beta w3}/Z.
CMatrix la_analytic_stationary(double beta, double omega2, double omega3);

double trace_distance(const CMatrix& rho, const CMatrix& sigma);

struct PositivityScan {
  double omega1 = 0.0;
  std::vector<double> betas;
  std::vector<double> v12s;
  // row-major: index = i_beta * v12s.size() + i_v12
  std::vector<std::optional<double>> min_eigenvalues;
  std::vector<std::string> errors;  // same layout, empty where the point succeeded
  // per V12 column: first beta where the minimum eigenvalue turns negative
  std::vector<std::optional<double>> boundary_beta;

  std::optional<double> at(std::size_t i_beta, std::size_t i_v12) const {
    return min_eigenvalues[i_beta * v12s.size() + i_v12];
  }
};

/// Smallest eigenvalue of the global, non-secular, Born-Markov stationary
/// state over a (beta, V12) grid.  Per-point failures are recorded, not thrown.
PositivityScan positivity_scan(const Model& base, std::span<const double> betas, std::span<const double> v12s,
                               unsigned jobs = 0);

}  // namespace tcl2
