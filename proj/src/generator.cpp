#include "tcl2/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tcl2/errors.hpp"

namespace tcl2 {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

constexpr std::array<std::pair<int, int>, 3> kPopulationSlots{{{0, 0}, {1, 1}, {2, 2}}};
constexpr std::array<std::pair<int, int>, 2> kCoherenceSlots{{{0, 1}, {1, 0}}};

void add_unique(std::vector<double>& freqs, double eps) {
  const bool present = std::any_of(freqs.begin(), freqs.end(),
                                   [&](double f) { return std::abs(f - eps) <= kDegeneracyTol; });
  if (!present) freqs.push_back(eps);
}

}  // namespace

std::string ApproximationMode::name() const {
  std::string out = approach == Approach::Local ? "LA_" : "";
  out += markov() ? "M_" : "NM_";
  out += secular ? "SA" : "BS";
  return out;
}

ApproximationMode ApproximationMode::parse(std::string_view name) {
  for (const auto& m : all()) {
    if (m.name() == name) return m;
  }
  throw ConfigError("unknown mode '" + std::string(name) +
                    "' (expected NM_BS, NM_SA, M_BS, M_SA, optionally with an LA_ prefix)");
}

std::array<ApproximationMode, 8> ApproximationMode::all() {
  std::array<ApproximationMode, 8> out;
  std::size_t k = 0;
  for (auto approach : {Approach::Global, Approach::Local}) {
    for (auto memory : {Memory::NonMarkov, Memory::BornMarkov}) {
      for (bool secular : {false, true}) out[k++] = {approach, secular, memory};
    }
  }
  return out;
}

PhiValues::PhiValues(std::vector<double> frequencies)
    : frequencies_(std::move(frequencies)), values_(frequencies_.size(), cplx{}) {}

PhiValues PhiValues::evaluate(const OhmicBath& bath, std::vector<double> frequencies, double t) {
  PhiValues out(std::move(frequencies));
  for (std::size_t k = 0; k < out.frequencies_.size(); ++k) {
    out.values_[k] = bath.phi(out.frequencies_[k], t);
  }
  return out;
}

std::size_t PhiValues::index_of(double eps) const {
  for (std::size_t k = 0; k < frequencies_.size(); ++k) {
    if (std::abs(frequencies_[k] - eps) <= kDegeneracyTol) return k;
  }
  throw std::out_of_range("PhiValues: no value at frequency " + std::to_string(eps));
}

double GeneratorSnapshot::distance(const GeneratorSnapshot& o) const {
  return std::max({(gamma_p - o.gamma_p).cwiseAbs().maxCoeff(), (gamma_pc - o.gamma_pc).cwiseAbs().maxCoeff(),
                   (gamma_cp - o.gamma_cp).cwiseAbs().maxCoeff(), (gamma_c - o.gamma_c).cwiseAbs().maxCoeff()});
}

ComponentPairs all_pairs(const JumpDecomposition& decomp) {
  ComponentPairs out;
  for (std::size_t i = 0; i < decomp.size(); ++i) {
    for (std::size_t j = 0; j < decomp.size(); ++j) out.emplace_back(i, j);
  }
  return out;
}

ComponentPairs secular_filter(const JumpDecomposition& decomp, double tol) {
  ComponentPairs out;
  for (std::size_t i = 0; i < decomp.size(); ++i) {
    for (std::size_t j = 0; j < decomp.size(); ++j) {
      if (std::abs(decomp.components[i].epsilon - decomp.components[j].epsilon) <= tol) out.emplace_back(i, j);
    }
  }
  return out;
}

Generator::Generator(Model model, ApproximationMode mode) : model_(std::move(model)), mode_(mode) {
  model_.system.validate();
  h_ = build_hamiltonian(model_.system);
  eig_ = mode_.approach == Approach::Global ? diagonalize(h_)
                                            : diagonalize(build_hamiltonian(model_.system.without_couplings()));
  decomp_ = decompose_coupling(coupling_operator(model_.system), eig_);
  pairs_ = mode_.secular ? secular_filter(decomp_) : all_pairs(decomp_);

  if (has_closed_form()) {
    if (mode_.approach == Approach::Global) {
      const auto& mix = *eig_.dimer;
      for (double f : {mix.lambda13, -mix.lambda13, mix.lambda23, -mix.lambda23}) add_unique(frequencies_, f);
    } else {
      const double l23 = model_.system.omegas[1] - model_.system.omegas[2];
      add_unique(frequencies_, l23);
      add_unique(frequencies_, -l23);
    }
  }
  for (const auto& c : decomp_.components) add_unique(frequencies_, c.epsilon);

  const PhiValues lookup(frequencies_);
  for (const auto& c : decomp_.components) component_phi_index_.push_back(lookup.index_of(c.epsilon));
  basis_ = eig_.eigenvectors.cast<cplx>();
}

PhiValues Generator::phi_values(double t) const { return PhiValues::evaluate(model_.bath, frequencies_, t); }

CoefficientElements Generator::elements(const PhiValues& phi) const {
  if (!has_closed_form()) throw std::logic_error("closed-form coefficients exist only for two transfer sites");
  CoefficientElements el;
  if (mode_.approach == Approach::Local) {
    const double l23 = model_.system.omegas[1] - model_.system.omegas[2];
    el.eta_plus = -2.0 * phi(l23).real();
    el.eta_minus = 2.0 * phi(-l23).real();
    el.gamma2 = std::conj(phi(l23));  // Phi_S(-l23, t)
    return el;
  }
  const auto& mix = *eig_.dimer;
  const double l13 = mix.lambda13;
  const double l23 = mix.lambda23;
  const double v = model_.system.coupling(0, 1);
  const double ratio = mix.d_m == 0.0 ? 0.0 : v / mix.d_m;
  el.eta_plus = -2.0 * (mix.sin2 * phi(l13).real() + mix.cos2 * phi(l23).real());
  el.eta_minus = 2.0 * (mix.sin2 * phi(-l13).real() + mix.cos2 * phi(-l23).real());
  el.gamma1 = ratio * (phi(l13) - phi(l23));
  el.gamma2 = mix.sin2 * std::conj(phi(l13)) + mix.cos2 * std::conj(phi(l23));
  el.gamma3 = ratio * (phi(-l13) - phi(-l23));
  return el;
}

CMatrix Generator::dissipator(const CMatrix& rho, const PhiValues& phi) const {
  const CMatrix r = basis_.adjoint() * rho * basis_;
  CMatrix out = CMatrix::Zero(r.rows(), r.cols());
  for (const auto& [i, j] : pairs_) {
    const CMatrix& ai = decomp_.components[i].op;
    const CMatrix& aj = decomp_.components[j].op;
    const cplx f = phi.values()[component_phi_index_[i]];
    const CMatrix aj_dag = aj.adjoint();
    const CMatrix ai_dag = ai.adjoint();
    // Phi (A_i r A_j^+ - A_j^+ A_i r) plus its Hermitian-conjugate partner
    out += f * (ai * r * aj_dag - aj_dag * ai * r);
    out += std::conj(f) * (aj * r * ai_dag - r * ai_dag * aj);
  }
  return basis_ * out * basis_.adjoint();
}

CMatrix Generator::apply(const CMatrix& rho, const PhiValues& phi) const {
  const CMatrix h = h_.cast<cplx>();
  return -kI * (h * rho - rho * h) + dissipator(rho, phi);
}

GeneratorSnapshot dimer_snapshot(double omega1, double omega2, double v12, const CoefficientElements& el,
                                 double t) {
  GeneratorSnapshot g;
  g.t = t;
  g.gamma_p << 0.0, 0.0, 0.0, 0.0, el.eta_plus, el.eta_minus, 0.0, -el.eta_plus, -el.eta_minus;

  const cplx iv = kI * v12;
  const cplx g1 = el.gamma1;
  const cplx g2 = el.gamma2;
  const cplx g3 = el.gamma3;
  g.gamma_pc << iv, -iv, -iv - g1, iv - std::conj(g1), g1, std::conj(g1);
  const cplx dw = kI * (omega1 - omega2);
  g.gamma_c << -dw - g2, 0.0, 0.0, dw - std::conj(g2);
  g.gamma_cp << iv - std::conj(g1), -iv, g3, -iv - g1, iv, std::conj(g3);
  return g;
}

GeneratorSnapshot Generator::closed_form_snapshot(const PhiValues& phi, double t) const {
  const auto& w = model_.system.omegas;
  return dimer_snapshot(w[0], w[1], model_.system.coupling(0, 1), elements(phi), t);
}

GeneratorSnapshot Generator::generic_snapshot(const PhiValues& phi, double t) const {
  if (model_.system.dim() != 3) throw std::logic_error("coefficient blocks are defined for two transfer sites");
  GeneratorSnapshot g;
  g.t = t;
  const auto column = [&](int r, int c) {
    CMatrix e = CMatrix::Zero(3, 3);
    e(r, c) = 1.0;
    return apply(e, phi);
  };
  for (int k = 0; k < 3; ++k) {
    const auto [r, c] = kPopulationSlots[k];
    const CMatrix out = column(r, c);
    for (int p = 0; p < 3; ++p) g.gamma_p(p, k) = out(kPopulationSlots[p].first, kPopulationSlots[p].second).real();
    for (int q = 0; q < 2; ++q) g.gamma_cp(q, k) = out(kCoherenceSlots[q].first, kCoherenceSlots[q].second);
  }
  for (int k = 0; k < 2; ++k) {
    const auto [r, c] = kCoherenceSlots[k];
    const CMatrix out = column(r, c);
    for (int p = 0; p < 3; ++p) g.gamma_pc(p, k) = out(kPopulationSlots[p].first, kPopulationSlots[p].second);
    for (int q = 0; q < 2; ++q) g.gamma_c(q, k) = out(kCoherenceSlots[q].first, kCoherenceSlots[q].second);
  }
  return g;
}

GeneratorSnapshot Generator::snapshot(const PhiValues& phi, double t) const {
  if (has_closed_form() && !mode_.secular) return closed_form_snapshot(phi, t);
  return generic_snapshot(phi, t);
}

CoefficientElements coefficient_elements(const Model& model, const ApproximationMode& mode, double t) {
  const Generator gen(model, mode);
  return gen.elements(gen.phi_values(mode.markov() ? kMarkov : t));
}

GeneratorSnapshot assemble_snapshot(const Model& model, const ApproximationMode& mode, double t) {
  const Generator gen(model, mode);
  const double when = mode.markov() ? kMarkov : t;
  return gen.snapshot(gen.phi_values(when), when);
}

CMatrix generic_dissipator(const Model& model, const ApproximationMode& mode, double t, const CMatrix& rho) {
  const Generator gen(model, mode);
  return gen.dissipator(rho, gen.phi_values(mode.markov() ? kMarkov : t));
}

}  // namespace tcl2
