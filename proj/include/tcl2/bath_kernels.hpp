#pragma once

#include <complex>
#include <limits>

namespace tcl2 {

/// Time argument meaning "t -> infinity", i.e. the Born-Markov limit.
inline constexpr double kMarkov = std::numeric_limits<double>::infinity();

// Quadrature targets for Phi at finite t and for the principal-value part.
inline constexpr double kPhiRelTol = 1e-12;
inline constexpr double kPhiAbsTol = 1e-15;
inline constexpr double kPvRelTol = 1e-10;

inline bool is_markov(double t) { return t == kMarkov; }

/// Trigamma function psi'(z) for complex z.
///
/// Shifts z upward with psi'(z) = psi'(z+1) + 1/z^2 until Re z >= 10 and then
/// sums the asymptotic series 1/z + 1/(2z^2) + sum_k B_2k / z^(2k+1), k <= 6.
/// Throws std::domain_error at the poles z = 0, -1, -2, ...
std::complex<double> trigamma(std::complex<double> z);

/// Ohmic environment J(nu) = s nu exp(-nu / omega_c) at inverse temperature
/// beta.  All frequencies are in units of the scaling site frequency, hbar =
/// k_B = 1.  beta = +inf is accepted as the zero-temperature limit.
class OhmicBath {
 public:
  OhmicBath() = default;
  OhmicBath(double s, double omega_c, double beta);

  double s() const noexcept { return s_; }
  double omega_c() const noexcept { return omega_c_; }
  double beta() const noexcept { return beta_; }
  bool zero_temperature() const noexcept { return beta_ == std::numeric_limits<double>::infinity(); }

  double spectral_density(double nu) const;
  double bose_occupation(double nu) const;

  // Products that stay finite as nu -> 0.
  double absorption_weight(double nu) const;  // J(nu) n(nu)            -> s / beta
  double emission_weight(double nu) const;    // J(nu) (1 + n(nu))      -> s / beta
  double noise_weight(double nu) const;       // J(nu) (1 + 2 n(nu))    -> 2 s / beta

  /// D1(tau) = 2 int J(nu) (1 + 2n(nu)) cos(nu tau) dnu, closed form.
  double noise_kernel(double tau) const;
  /// D2(tau) = 2 int J(nu) sin(nu tau) dnu, closed form.
  double dissipation_kernel(double tau) const;
  /// Bath correlation function (D1(tau) - i D2(tau)) / 2.
  std::complex<double> correlation(double tau) const;

  /// Phi(mu, t) = int_0^t (D1 - i D2)/2 e^{i mu tau} dtau by adaptive
  /// quadrature.  t = kMarkov dispatches to phi_markov().
  std::complex<double> phi(double mu, double t) const;
  std::complex<double> phi_finite(double mu, double t) const;

  /// Born-Markov limit Phi(mu, inf): delta terms in closed form, the
  /// principal-value part by symmetric-window quadrature.
  std::complex<double> phi_markov(double mu) const;

  /// Phi_S(x, t) = conj(Phi(-x, t)).
  std::complex<double> phi_s(double x, double t) const { return std::conj(phi(-x, t)); }

 private:
  double s_ = 0.01;
  double omega_c_ = 1.0;
  double beta_ = 2.0;
};

}  // namespace tcl2
