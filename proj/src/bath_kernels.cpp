#include "tcl2/bath_kernels.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tcl2/errors.hpp"
#include "tcl2/quadrature.hpp"

namespace tcl2 {

namespace {

using cplx = std::complex<double>;

// B_2k for k = 1..6
constexpr std::array<double, 6> kBernoulli = {1.0 / 6.0,  -1.0 / 30.0, 1.0 / 42.0,
                                              -1.0 / 30.0, 5.0 / 66.0,  -691.0 / 2730.0};

constexpr double kTailCutoffs = 40.0;

// x / (e^{beta x} - 1), with the x -> 0 limit 1 / beta.
double x_over_expm1(double x, double beta) {
  const double bx = beta * x;
  if (bx == 0.0) return 1.0 / beta;
  if (bx > 700.0) return 0.0;
  return x / std::expm1(bx);
}

}  // namespace

cplx trigamma(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
    throw std::domain_error("trigamma: pole at z = " + std::to_string(z.real()));
  }
  cplx acc = 0.0;
  while (z.real() < 10.0) {
    acc += 1.0 / (z * z);
    z += 1.0;
  }
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx power = inv * inv2;  // z^-3
  for (double b : kBernoulli) {
    series += b * power;
    power *= inv2;
  }
  return acc + inv + 0.5 * inv2 + series;
}

OhmicBath::OhmicBath(double s, double omega_c, double beta) : s_(s), omega_c_(omega_c), beta_(beta) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("bath.s must be finite and >= 0");
  if (!(omega_c > 0.0) || !std::isfinite(omega_c)) throw ConfigError("bath.omega_c must be finite and > 0");
  if (!(beta > 0.0)) throw ConfigError("bath.beta must be > 0");
}

double OhmicBath::spectral_density(double nu) const {
  if (nu < 0.0) throw std::domain_error("spectral_density: negative frequency");
  return s_ * nu * std::exp(-nu / omega_c_);
}

double OhmicBath::bose_occupation(double nu) const {
  if (!(nu > 0.0)) throw std::domain_error("bose_occupation: frequency must be > 0");
  if (zero_temperature()) return 0.0;
  return 1.0 / std::expm1(beta_ * nu);
}

double OhmicBath::absorption_weight(double nu) const {
  if (nu < 0.0) throw std::domain_error("absorption_weight: negative frequency");
  if (zero_temperature()) return 0.0;
  return s_ * std::exp(-nu / omega_c_) * x_over_expm1(nu, beta_);
}

double OhmicBath::emission_weight(double nu) const {
  return spectral_density(nu) + absorption_weight(nu);
}

double OhmicBath::noise_weight(double nu) const {
  return spectral_density(nu) + 2.0 * absorption_weight(nu);
}

double OhmicBath::noise_kernel(double tau) const {
  if (tau < 0.0) throw std::domain_error("noise_kernel: negative time");
  const double x = omega_c_ * tau;
  const double den = 1.0 + x * x;
  double value = -omega_c_ * omega_c_ * (x * x - 1.0) / (den * den);
  if (!zero_temperature()) {
    const double bw = beta_ * omega_c_;
    const cplx arg{(bw + 1.0) / bw, tau / beta_};
    value += 2.0 / (beta_ * beta_) * trigamma(arg).real();
  }
  return 2.0 * s_ * value;
}

double OhmicBath::dissipation_kernel(double tau) const {
  if (tau < 0.0) throw std::domain_error("dissipation_kernel: negative time");
  const double x = omega_c_ * tau;
  const double den = 1.0 + x * x;
  return 4.0 * s_ * tau * omega_c_ * omega_c_ * omega_c_ / (den * den);
}

cplx OhmicBath::correlation(double tau) const {
  return {0.5 * noise_kernel(tau), -0.5 * dissipation_kernel(tau)};
}

cplx OhmicBath::phi(double mu, double t) const {
  return is_markov(t) ? phi_markov(mu) : phi_finite(mu, t);
}

cplx OhmicBath::phi_finite(double mu, double t) const {
  if (t < 0.0) throw std::domain_error("phi_finite: negative time");
  if (t == 0.0 || s_ == 0.0) return 0.0;
  const auto integrand = [&](double tau) { return correlation(tau) * std::polar(1.0, mu * tau); };
  return quad::integrate_complex(integrand, 0.0, t, 1.0, kPhiRelTol, kPhiAbsTol * t);
}

cplx OhmicBath::phi_markov(double mu) const {
  using std::numbers::pi;
  if (s_ == 0.0) return 0.0;

  double re = 0.0;
  if (mu > 0.0) {
    re = pi * emission_weight(mu);
  } else if (mu < 0.0) {
    re = pi * absorption_weight(-mu);
  } else {
    // both delta functions sit on the edge nu = 0 and take half weight each
    re = zero_temperature() ? 0.0 : pi * s_ / beta_;
  }

  // Im Phi = P int_0^inf [J n / (nu + mu) - J (1 + n) / (nu - mu)] dnu
  const double nu_max_tail = std::abs(mu) + kTailCutoffs * omega_c_;
  if (mu == 0.0) {
    // the two poles cancel: J n / nu - J (1 + n) / nu = -J / nu
    return {re, -s_ * omega_c_};
  }

  const double pole = std::abs(mu);
  // singular numerator h(nu) / (nu - pole) and the regular remainder
  const auto h = [&](double nu) { return mu > 0.0 ? -emission_weight(nu) : absorption_weight(nu); };
  const auto regular = [&](double nu) {
    return mu > 0.0 ? absorption_weight(nu) / (nu + mu) : -emission_weight(nu) / (nu - mu);
  };

  // nu = pole +/- u on [0, 2 pole]; the 1/u parts cancel pairwise
  const auto window = [&](double u) {
    if (u == 0.0) return 2.0 * regular(pole);
    return (h(pole + u) - h(pole - u)) / u + regular(pole + u) + regular(pole - u);
  };
  const auto tail = [&](double nu) { return h(nu) / (nu - pole) + regular(nu); };

  const double scale = s_ * omega_c_;
  const auto w = quad::integrate_pieces(window, 0.0, pole, omega_c_, kPvRelTol, 1e-14 * scale);
  const double tail_end =
      2.0 * pole < nu_max_tail ? nu_max_tail : 2.0 * pole + kTailCutoffs * omega_c_;
  const auto t = quad::integrate_pieces(tail, 2.0 * pole, tail_end, omega_c_, kPvRelTol, 1e-14 * scale);
  return {re, w.value + t.value};
}

}  // namespace tcl2
