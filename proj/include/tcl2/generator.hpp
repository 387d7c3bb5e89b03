#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tcl2/bath_kernels.hpp"
#include "tcl2/system_model.hpp"

namespace tcl2 {

enum class Approach { Global, Local };
enum class Memory { NonMarkov, BornMarkov };

struct ApproximationMode {
  Approach approach = Approach::Global;
  bool secular = false;
  Memory memory = Memory::NonMarkov;

  /// NM_BS, NM_SA, M_BS, M_SA for the global approach; LA_ prefix for local.
  std::string name() const;
  static ApproximationMode parse(std::string_view name);
  static std::array<ApproximationMode, 8> all();

  bool markov() const { return memory == Memory::BornMarkov; }
  friend bool operator==(const ApproximationMode&, const ApproximationMode&) = default;
};

struct Model {
  SiteSystem system;
  OhmicBath bath;

  bool is_dimer() const { return system.n_sites() == 2; }
};

/// Phi(eps, t) at a fixed, deduplicated set of Bohr frequencies.
class PhiValues {
 public:
  PhiValues() = default;
  explicit PhiValues(std::vector<double> frequencies);

  static PhiValues evaluate(const OhmicBath& bath, std::vector<double> frequencies, double t);

  const std::vector<double>& frequencies() const { return frequencies_; }
  std::vector<std::complex<double>>& values() { return values_; }
  const std::vector<std::complex<double>>& values() const { return values_; }

  std::size_t index_of(double eps) const;
  std::complex<double> operator()(double eps) const { return values_[index_of(eps)]; }

 private:
  std::vector<double> frequencies_;
  std::vector<std::complex<double>> values_;
};

/// Scalar coefficients of the two-site blocks.
struct CoefficientElements {
  double eta_plus = 0.0;
  double eta_minus = 0.0;
  std::complex<double> gamma1;
  std::complex<double> gamma2;
  std::complex<double> gamma3;
};

/// Coefficient blocks acting on rho_P = {rho11, rho22, rho33} and
/// rho_C = {rho12, rho21} (site basis):
///   d rho_P / dt = G_P rho_P + G_PC rho_C,   d rho_C / dt = G_CP rho_P + G_C rho_C.
struct GeneratorSnapshot {
  Eigen::Matrix3d gamma_p = Eigen::Matrix3d::Zero();
  Eigen::Matrix<std::complex<double>, 3, 2> gamma_pc = Eigen::Matrix<std::complex<double>, 3, 2>::Zero();
  Eigen::Matrix<std::complex<double>, 2, 3> gamma_cp = Eigen::Matrix<std::complex<double>, 2, 3>::Zero();
  Eigen::Matrix2cd gamma_c = Eigen::Matrix2cd::Zero();
  double t = 0.0;

  /// Largest absolute entry difference over all four blocks.
  double distance(const GeneratorSnapshot& other) const;
};

/// Index pairs (eps, eps') kept in the double sum of the dissipator.
using ComponentPairs = std::vector<std::pair<std::size_t, std::size_t>>;

ComponentPairs all_pairs(const JumpDecomposition& decomp);
ComponentPairs secular_filter(const JumpDecomposition& decomp, double tol = kDegeneracyTol);

/// Precomputed structure of the TCL2 generator for one model and mode.
class Generator {
 public:
  Generator(Model model, ApproximationMode mode);

  const Model& model() const { return model_; }
  const ApproximationMode& mode() const { return mode_; }
  const EigenSystem& eigensystem() const { return eig_; }
  const JumpDecomposition& decomposition() const { return decomp_; }
  const ComponentPairs& pairs() const { return pairs_; }
  const RMatrix& hamiltonian() const { return h_; }

  /// Frequencies whose Phi values the generator reads.
  const std::vector<double>& frequencies() const { return frequencies_; }
  PhiValues phi_values(double t) const;

  bool has_closed_form() const { return model_.is_dimer(); }
  CoefficientElements elements(const PhiValues& phi) const;

  /// Dissipator only, site basis.  Linear in rho; no Hermiticity is assumed.
  CMatrix dissipator(const CMatrix& rho, const PhiValues& phi) const;
  /// Full right-hand side  -i[H, rho] + D(rho).
  CMatrix apply(const CMatrix& rho, const PhiValues& phi) const;

  GeneratorSnapshot closed_form_snapshot(const PhiValues& phi, double t) const;
  GeneratorSnapshot generic_snapshot(const PhiValues& phi, double t) const;
  /// Closed form when available and the mode is non-secular, generic otherwise.
  GeneratorSnapshot snapshot(const PhiValues& phi, double t) const;

 private:
  Model model_;
  ApproximationMode mode_;
  RMatrix h_;
  EigenSystem eig_;
  JumpDecomposition decomp_;
  ComponentPairs pairs_;
  std::vector<double> frequencies_;
  std::vector<std::size_t> component_phi_index_;
  CMatrix basis_;
};

CoefficientElements coefficient_elements(const Model& model, const ApproximationMode& mode, double t);
GeneratorSnapshot assemble_snapshot(const Model& model, const ApproximationMode& mode, double t);
CMatrix generic_dissipator(const Model& model, const ApproximationMode& mode, double t, const CMatrix& rho);

/// Blocks of the two-site model from the scalar elements.
GeneratorSnapshot dimer_snapshot(double omega1, double omega2, double v12, const CoefficientElements& el,
                                 double t);

}  // namespace tcl2
