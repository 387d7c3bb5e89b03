#include "tcl2/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tcl2/errors.hpp"

namespace tcl2 {

SiteSystem SiteSystem::dimer(double omega1, double omega2, double omega3, double v12) {
  SiteSystem sys;
  sys.omegas = {omega1, omega2, omega3};
  sys.couplings = {{0, 1, v12}};
  return sys;
}

double SiteSystem::coupling(int i, int j) const {
  if (i > j) std::swap(i, j);
  for (const auto& c : couplings) {
    if (c.i == i && c.j == j) return c.value;
  }
  return 0.0;
}

void SiteSystem::set_coupling(int i, int j, double value) {
  if (i > j) std::swap(i, j);
  for (auto& c : couplings) {
    if (c.i == i && c.j == j) {
      c.value = value;
      return;
    }
  }
  couplings.push_back({i, j, value});
}

SiteSystem SiteSystem::without_couplings() const {
  SiteSystem out = *this;
  out.couplings.clear();
  return out;
}

void SiteSystem::validate() const {
  if (omegas.size() < 2) throw ConfigError("system.omegas needs at least one transfer site and the sink");
  for (double w : omegas) {
    if (!std::isfinite(w)) throw ConfigError("system.omegas must be finite");
  }
  const int n = static_cast<int>(n_sites());
  for (const auto& c : couplings) {
    if (c.i == c.j || c.i < 0 || c.j < 0 || c.i >= n || c.j >= n) {
      throw ConfigError("system.couplings: sites " + std::to_string(c.i + 1) + "," +
                        std::to_string(c.j + 1) + " must be distinct transfer sites (the sink has no coupling)");
    }
    if (!std::isfinite(c.value)) throw ConfigError("system.couplings values must be finite");
  }
}

RMatrix build_hamiltonian(const SiteSystem& sys) {
  const auto d = static_cast<Eigen::Index>(sys.dim());
  RMatrix h = RMatrix::Zero(d, d);
  for (Eigen::Index n = 0; n < d; ++n) h(n, n) = sys.omegas[n];
  for (const auto& c : sys.couplings) {
    h(c.i, c.j) += c.value;
    h(c.j, c.i) += c.value;
  }
  return h;
}

RMatrix coupling_operator(const SiteSystem& sys) {
  const auto d = static_cast<Eigen::Index>(sys.dim());
  RMatrix a = RMatrix::Zero(d, d);
  a(d - 2, d - 1) = 1.0;
  a(d - 1, d - 2) = 1.0;
  return a;
}

namespace {

bool has_dimer_structure(const RMatrix& h) {
  return h.rows() == 3 && h.cols() == 3 && h(0, 2) == 0.0 && h(1, 2) == 0.0 && h(2, 0) == 0.0 &&
         h(2, 1) == 0.0;
}

}  // namespace

EigenSystem diagonalize_generic(const RMatrix& h) {
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(h);
  EigenSystem out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  for (Eigen::Index k = 1; k < out.eigenvalues.size(); ++k) {
    if (std::abs(out.eigenvalues[k] - out.eigenvalues[k - 1]) < kDegeneracyTol) out.degenerate = true;
  }
  return out;
}

EigenSystem diagonalize(const RMatrix& h) {
  if (!has_dimer_structure(h)) return diagonalize_generic(h);

  const double w1 = h(0, 0);
  const double w2 = h(1, 1);
  const double w3 = h(2, 2);
  const double v = h(0, 1);

  DimerMixing mix;
  mix.d_m = std::sqrt((w1 - w2) * (w1 - w2) + 4.0 * v * v);
  EigenSystem out;
  double c2 = 0.0;
  double s2 = 1.0;
  if (mix.d_m == 0.0) {
    out.degenerate = true;  // any basis works; pick the symmetric one
  } else {
    c2 = (w1 - w2) / mix.d_m;
    s2 = 2.0 * v / mix.d_m;
  }
  mix.theta = 0.5 * std::atan2(s2, c2);
  // Half-angle form for the larger of |cos theta|, |sin theta| and
  // sin 2theta / (2 x) for the smaller one: accurate near c2 = +-1 and
  // exactly zero at V12 = 0.  cos theta >= 0, sin theta carries the sign of V12.
  const double sign = s2 < 0.0 ? -1.0 : 1.0;
  if (c2 >= 0.0) {
    mix.cos_theta = std::sqrt(0.5 * (1.0 + c2));
    mix.sin_theta = 0.5 * s2 / mix.cos_theta;
  } else {
    mix.sin_theta = sign * std::sqrt(0.5 * (1.0 - c2));
    mix.cos_theta = 0.5 * std::abs(s2) / std::abs(mix.sin_theta);
  }
  mix.cos2 = mix.cos_theta * mix.cos_theta;
  mix.sin2 = mix.sin_theta * mix.sin_theta;

  const double l1 = 0.5 * ((w1 + w2) + mix.d_m);
  const double l2 = 0.5 * ((w1 + w2) - mix.d_m);
  mix.lambda13 = l1 - w3;
  mix.lambda23 = l2 - w3;

  out.eigenvalues = Eigen::Vector3d{l1, l2, w3};
  out.eigenvectors = RMatrix::Zero(3, 3);
  out.eigenvectors.col(0) << mix.cos_theta, mix.sin_theta, 0.0;
  out.eigenvectors.col(1) << -mix.sin_theta, mix.cos_theta, 0.0;
  out.eigenvectors(2, 2) = 1.0;
  if (std::abs(l1 - w3) < kDegeneracyTol || std::abs(l2 - w3) < kDegeneracyTol ||
      std::abs(l1 - l2) < kDegeneracyTol) {
    out.degenerate = true;
  }
  out.dimer = mix;
  return out;
}

CMatrix JumpDecomposition::sum() const {
  if (components.empty()) return {};
  CMatrix total = CMatrix::Zero(components.front().op.rows(), components.front().op.cols());
  for (const auto& c : components) total += c.op;
  return total;
}

JumpDecomposition decompose_coupling(const RMatrix& a_site, const EigenSystem& eig, double tol) {
  const RMatrix& v = eig.eigenvectors;
  const RMatrix a_eig = v.transpose() * a_site * v;
  const auto d = a_eig.rows();
  const double zero = 1e-14 * std::max(1.0, a_eig.cwiseAbs().maxCoeff());

  JumpDecomposition out;
  for (Eigen::Index n = 0; n < d; ++n) {
    for (Eigen::Index m = 0; m < d; ++m) {
      if (std::abs(a_eig(n, m)) <= zero) continue;
      const double eps = eig.eigenvalues[m] - eig.eigenvalues[n];
      auto it = std::find_if(out.components.begin(), out.components.end(),
                             [&](const JumpComponent& c) { return std::abs(c.epsilon - eps) <= tol; });
      if (it == out.components.end()) {
        out.components.push_back({eps, CMatrix::Zero(d, d)});
        it = std::prev(out.components.end());
      }
      it->op(n, m) = a_eig(n, m);
    }
  }
  return out;
}

CMatrix gibbs_state(const RMatrix& h, double beta) {
  if (beta < 0.0) throw ConfigError("gibbs_state: beta must be >= 0");
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(h);
  const Eigen::VectorXd& e = solver.eigenvalues();
  const double e0 = e.minCoeff();
  Eigen::VectorXd w(e.size());
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    const double gap = e[k] - e0;
    // beta = inf keeps the ground space only
    w[k] = std::isinf(beta) ? (gap < kDegeneracyTol ? 1.0 : 0.0) : std::exp(-beta * gap);
  }
  w /= w.sum();
  const RMatrix& u = solver.eigenvectors();
  const RMatrix rho = u * w.asDiagonal() * u.transpose();
  return rho.cast<std::complex<double>>();
}

}  // namespace tcl2
