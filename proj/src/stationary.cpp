#include "tcl2/stationary.hpp"

#include <array>
#include <cmath>
#include <numeric>

#include "tcl2/dynamics.hpp"
#include "tcl2/errors.hpp"
#include "tcl2/parallel.hpp"

namespace tcl2 {

namespace {

using cplx = std::complex<double>;

constexpr double kSingularRelTol = 1e-13;
constexpr std::array<double, 3> kZPoints{1e-5, 1e-6, 1e-7};

ApproximationMode markov_of(ApproximationMode mode) {
  mode.memory = Memory::BornMarkov;
  return mode;
}

struct Blocks {
  Eigen::Matrix3cd p;
  Eigen::Matrix<cplx, 3, 2> pc;
  Eigen::Matrix<cplx, 2, 3> cp;
  Eigen::Matrix2cd c;
};

Blocks markov_blocks(const Model& model, const ApproximationMode& mode) {
  if (!model.is_dimer()) throw ConfigError("stationary solver supports two transfer sites plus the sink");
  const auto g = assemble_snapshot(model, markov_of(mode), kMarkov);
  return {g.gamma_p.cast<cplx>(), g.gamma_pc, g.gamma_cp, g.gamma_c};
}

CMatrix assemble(const Eigen::Vector3cd& pops, const Eigen::Vector2cd& coh) {
  CMatrix rho = CMatrix::Zero(3, 3);
  for (int k = 0; k < 3; ++k) rho(k, k) = pops[k];
  rho(0, 1) = coh[0];
  rho(1, 0) = coh[1];
  return rho;
}

template <class Vec>
Vec extrapolate_to_zero(const std::array<double, 3>& z, const std::array<Vec, 3>& y) {
  Vec out = Vec::Zero();
  for (std::size_t k = 0; k < 3; ++k) {
    double w = 1.0;
    for (std::size_t j = 0; j < 3; ++j) {
      if (j != k) w *= -z[j] / (z[k] - z[j]);
    }
    out += w * y[k];
  }
  return out;
}

}  // namespace

std::string to_string(StationaryMethod m) {
  switch (m) {
    case StationaryMethod::NullSpace:
      return "null-space";
    case StationaryMethod::ZExtrapolation:
      return "z-extrapolation";
    case StationaryMethod::AnalyticLocal:
      return "analytic-LA";
  }
  return "unknown";
}

StationaryResult stationary_state(const Model& model, const ApproximationMode& mode) {
  const Blocks b = markov_blocks(model, mode);

  Eigen::JacobiSVD<Eigen::Matrix2cd> csvd(b.c);
  const auto& cs = csvd.singularValues();
  if (cs[1] <= kSingularRelTol * std::max(1.0, cs[0])) {
    throw NumericalFailure("coherence block is singular; no stationary solution from the z -> 0 limit", cs[1]);
  }
  const Eigen::Matrix2cd neg_c_inv = (-b.c).inverse();
  const Eigen::Matrix3cd m0 = b.p + b.pc * neg_c_inv * b.cp;

  Eigen::JacobiSVD<Eigen::Matrix3cd> svd(m0, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(sv[0], std::numeric_limits<double>::min());
  std::size_t null_dim = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv[k] <= kNullRelTol * scale) ++null_dim;
  }
  if (null_dim > 1) throw MultiplicityError(null_dim);

  // smallest singular value's right vector
  Eigen::Vector3cd v = svd.matrixV().col(2);
  v /= v.sum();
  const Eigen::Vector2cd coh = neg_c_inv * b.cp * v;

  StationaryResult out;
  out.rho = assemble(v, coh);
  out.method = StationaryMethod::NullSpace;
  out.residual = stationary_residual(model, mode, out.rho);
  return out;
}

StationaryResult stationary_state_z_extrapolation(const Model& model, const ApproximationMode& mode,
                                                  const CMatrix& initial) {
  const Blocks b = markov_blocks(model, mode);
  const Eigen::Vector3cd p0{initial(0, 0), initial(1, 1), initial(2, 2)};
  const Eigen::Vector2cd c0{initial(0, 1), initial(1, 0)};

  std::array<Eigen::Vector3cd, 3> fp;
  std::array<Eigen::Vector2cd, 3> fc;
  for (std::size_t k = 0; k < kZPoints.size(); ++k) {
    const double z = kZPoints[k];
    const Eigen::Matrix2cd resolvent = (z * Eigen::Matrix2cd::Identity() - b.c).inverse();
    const Eigen::Matrix3cd kernel = z * Eigen::Matrix3cd::Identity() - b.p - b.pc * resolvent * b.cp;
    const Eigen::Vector3cd pz = kernel.fullPivLu().solve(p0 + b.pc * resolvent * c0);
    const Eigen::Vector2cd cz = resolvent * (b.cp * pz + c0);
    fp[k] = z * pz;
    fc[k] = z * cz;
  }

  StationaryResult out;
  out.rho = assemble(extrapolate_to_zero(kZPoints, fp), extrapolate_to_zero(kZPoints, fc));
  out.method = StationaryMethod::ZExtrapolation;
  out.residual = stationary_residual(model, mode, out.rho);
  return out;
}

double stationary_residual(const Model& model, const ApproximationMode& mode, const CMatrix& rho) {
  const Generator gen(model, markov_of(mode));
  return gen.apply(rho, gen.phi_values(kMarkov)).cwiseAbs().maxCoeff();
}

CMatrix la_analytic_stationary(double beta, double omega2, double omega3) {
  if (!(beta >= 0.0)) throw ConfigError("beta must be >= 0");
  // shift by the smaller energy so the exponentials stay bounded
  const double e0 = std::min(omega2, omega3);
  const double w2 = std::exp(-beta * (omega2 - e0));
  const double w3 = std::exp(-beta * (omega3 - e0));
  const double z = 2.0 * w2 + w3;
  CMatrix rho = CMatrix::Zero(3, 3);
  rho(0, 0) = w2 / z;
  rho(1, 1) = w2 / z;
  rho(2, 2) = w3 / z;
  return rho;
}

double trace_distance(const CMatrix& rho, const CMatrix& sigma) {
  const CMatrix diff = rho - sigma;
  const CMatrix herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

PositivityScan positivity_scan(const Model& base, std::span<const double> betas, std::span<const double> v12s,
                               unsigned jobs) {
  PositivityScan scan;
  scan.omega1 = base.system.omegas.at(0);
  scan.betas.assign(betas.begin(), betas.end());
  scan.v12s.assign(v12s.begin(), v12s.end());
  const std::size_t n = betas.size() * v12s.size();
  scan.min_eigenvalues.assign(n, std::nullopt);
  scan.errors.assign(n, {});

  const ApproximationMode mode{Approach::Global, false, Memory::BornMarkov};
  parallel_for(n, jobs, [&](std::size_t idx) {
    try {
      Model m = base;
      m.bath = OhmicBath(base.bath.s(), base.bath.omega_c(), betas[idx / v12s.size()]);
      m.system.set_coupling(0, 1, v12s[idx % v12s.size()]);
      scan.min_eigenvalues[idx] = min_eigenvalue(stationary_state(m, mode).rho);
    } catch (const std::exception& e) {
      scan.errors[idx] = e.what();
    }
  });

  scan.boundary_beta.assign(v12s.size(), std::nullopt);
  for (std::size_t j = 0; j < v12s.size(); ++j) {
    for (std::size_t i = 0; i + 1 < betas.size(); ++i) {
      const auto a = scan.at(i, j);
      const auto b = scan.at(i + 1, j);
      if (a && b && *a >= 0.0 && *b < 0.0) {
        scan.boundary_beta[j] = betas[i] + (betas[i + 1] - betas[i]) * *a / (*a - *b);
        break;
      }
    }
  }
  return scan;
}

}  // namespace tcl2
