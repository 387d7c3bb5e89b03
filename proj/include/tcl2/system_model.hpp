#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <vector>

namespace tcl2 {

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

/// Eigenvalues closer than this are one Bohr-frequency class.
inline constexpr double kDegeneracyTol = 1e-10;

struct SiteCoupling {
  int i = 0;  // 0-based transfer-site indices, i < j
  int j = 1;
  double value = 0.0;
};

/// Chain of N transfer sites plus a sink.  `omegas` holds N + 1 site
/// frequencies, the last one being the sink; the sink has no direct coupling
/// and talks to site N only through the environment.
struct SiteSystem {
  std::vector<double> omegas{0.5, 1.0, 0.0};
  std::vector<SiteCoupling> couplings{{0, 1, 0.3}};

  static SiteSystem dimer(double omega1, double omega2, double omega3, double v12);

  std::size_t n_sites() const { return omegas.size() - 1; }
  std::size_t dim() const { return omegas.size(); }
  double coupling(int i, int j) const;
  void set_coupling(int i, int j, double value);
  SiteSystem without_couplings() const;
  void validate() const;
};

RMatrix build_hamiltonian(const SiteSystem& sys);

/// A = |N><N+1| + |N+1><N| in the site basis.
RMatrix coupling_operator(const SiteSystem& sys);

/// Two-site mixing data in the angle convention
/// (cos 2theta, sin 2theta) = ((w1 - w2) / D_m, 2 V12 / D_m).
struct DimerMixing {
  double theta = 0.0;
  double d_m = 0.0;
  double cos_theta = 1.0;
  double sin_theta = 0.0;
  double sin2 = 0.0;  // sin^2 theta
  double cos2 = 1.0;  // cos^2 theta
  double lambda13 = 0.0;
  double lambda23 = 0.0;
};

struct EigenSystem {
  Eigen::VectorXd eigenvalues;
  RMatrix eigenvectors;  // columns, site basis
  std::optional<DimerMixing> dimer;
  bool degenerate = false;
};

/// Diagonalizes a real symmetric Hamiltonian.  A 3x3 matrix with the
/// (dimer + decoupled sink) block structure takes the closed form with
/// eigenvalues {(w1+w2+D_m)/2, (w1+w2-D_m)/2, w3}; anything else goes to the
/// generic symmetric solver (ascending eigenvalues).
EigenSystem diagonalize(const RMatrix& h);
EigenSystem diagonalize_generic(const RMatrix& h);

struct JumpComponent {
  double epsilon = 0.0;  // lambda_m - lambda_n for |e_n><e_m|
  CMatrix op;            // eigenbasis
};

struct JumpDecomposition {
  std::vector<JumpComponent> components;

  std::size_t size() const { return components.size(); }
  CMatrix sum() const;
};

/// Splits `a_site` into eigen-frequency components A(eps); entries whose
/// frequencies are within `tol` share a component, exact zeros are dropped.
JumpDecomposition decompose_coupling(const RMatrix& a_site, const EigenSystem& eig,
                                     double tol = kDegeneracyTol);

CMatrix gibbs_state(const RMatrix& h, double beta);

}  // namespace tcl2
