#include "tcl2/dynamics.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tcl2/errors.hpp"

namespace tcl2 {

namespace odeint = boost::numeric::odeint;

namespace {

using cplx = std::complex<double>;
using State = std::vector<double>;

cplx load(const State& x, std::size_t k) { return {x[2 * k], x[2 * k + 1]}; }
void store(State& x, std::size_t k, cplx v) {
  x[2 * k] = v.real();
  x[2 * k + 1] = v.imag();
}

bool in_sector(const CMatrix& rho) {
  return rho.rows() == 3 && rho(0, 2) == 0.0 && rho(2, 0) == 0.0 && rho(1, 2) == 0.0 && rho(2, 1) == 0.0;
}

// Phi auxiliaries: d Phi(eps)/dt = C(t) e^{i eps t}.
class PhiAux {
 public:
  PhiAux(const Generator& gen, std::size_t offset)
      : gen_(gen), offset_(offset), active_(!gen.mode().markov()) {
    phi_ = active_ ? PhiValues(gen.frequencies()) : gen.phi_values(kMarkov);
  }

  std::size_t size() const { return active_ ? gen_.frequencies().size() : 0; }

  const PhiValues& read(const State& x) {
    if (active_) {
      for (std::size_t k = 0; k < size(); ++k) phi_.values()[k] = load(x, offset_ + k);
    }
    return phi_;
  }

  void derivative(double t, State& dx) const {
    if (!active_) return;
    const cplx c = gen_.model().bath.correlation(t);
    const auto& freqs = gen_.frequencies();
    for (std::size_t k = 0; k < freqs.size(); ++k) store(dx, offset_ + k, c * std::polar(1.0, freqs[k] * t));
  }

 private:
  const Generator& gen_;
  std::size_t offset_;
  bool active_;
  PhiValues phi_;
};

struct SectorSystem {
  const Generator& gen;
  PhiAux aux;
  std::size_t* calls;

  SectorSystem(const Generator& g, std::size_t* c) : gen(g), aux(g, 5), calls(c) {}

  std::size_t size() const { return 2 * (5 + aux.size()); }

  void operator()(const State& x, State& dx, double t) {
    ++*calls;
    const GeneratorSnapshot g = gen.closed_form_snapshot(aux.read(x), t);
    Eigen::Vector3cd p{load(x, 0), load(x, 1), load(x, 2)};
    Eigen::Vector2cd c{load(x, 3), load(x, 4)};
    const Eigen::Vector3cd dp = g.gamma_p.cast<cplx>() * p + g.gamma_pc * c;
    const Eigen::Vector2cd dc = g.gamma_cp * p + g.gamma_c * c;
    for (int k = 0; k < 3; ++k) store(dx, k, dp[k]);
    for (int k = 0; k < 2; ++k) store(dx, 3 + k, dc[k]);
    aux.derivative(t, dx);
  }

  State pack(const CMatrix& rho) const {
    State x(size(), 0.0);
    store(x, 0, rho(0, 0));
    store(x, 1, rho(1, 1));
    store(x, 2, rho(2, 2));
    store(x, 3, rho(0, 1));
    store(x, 4, rho(1, 0));
    return x;
  }

  CMatrix unpack(const State& x) const {
    CMatrix rho = CMatrix::Zero(3, 3);
    rho(0, 0) = load(x, 0);
    rho(1, 1) = load(x, 1);
    rho(2, 2) = load(x, 2);
    rho(0, 1) = load(x, 3);
    rho(1, 0) = load(x, 4);
    return rho;
  }
};

struct FullSystem {
  const Generator& gen;
  Eigen::Index dim;
  PhiAux aux;
  std::size_t* calls;

  FullSystem(const Generator& g, std::size_t* c)
      : gen(g), dim(static_cast<Eigen::Index>(g.model().system.dim())), aux(g, dim * dim), calls(c) {}

  std::size_t size() const { return 2 * (static_cast<std::size_t>(dim * dim) + aux.size()); }

  void operator()(const State& x, State& dx, double t) {
    ++*calls;
    const CMatrix out = gen.apply(unpack(x), aux.read(x));
    for (Eigen::Index k = 0; k < dim * dim; ++k) store(dx, k, out(k % dim, k / dim));
    aux.derivative(t, dx);
  }

  State pack(const CMatrix& rho) const {
    State x(size(), 0.0);
    for (Eigen::Index k = 0; k < dim * dim; ++k) store(x, k, rho(k % dim, k / dim));
    return x;
  }

  CMatrix unpack(const State& x) const {
    CMatrix rho(dim, dim);
    for (Eigen::Index k = 0; k < dim * dim; ++k) rho(k % dim, k / dim) = load(x, k);
    return rho;
  }
};

template <class System>
void integrate(System& sys, const CMatrix& initial, std::span<const double> grid, const EvolveOptions& opt,
               Trajectory& out) {
  State x = sys.pack(initial);
  std::vector<double> times;
  if (grid.front() > 0.0) times.push_back(0.0);
  times.insert(times.end(), grid.begin(), grid.end());

  double last_good = 0.0;
  auto observer = [&](const State& s, double t) {
    last_good = t;
    if (t < grid.front()) return;
    out.times.push_back(t);
    out.states.push_back(sys.unpack(s));
    out.phi.push_back(sys.aux.read(s));
  };
  auto stepper = odeint::make_dense_output(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<State>());
  try {
    odeint::integrate_times(stepper, std::ref(sys), x, times.begin(), times.end(), opt.initial_dt, observer,
                            odeint::max_step_checker(static_cast<int>(opt.max_steps)));
  } catch (const std::runtime_error& e) {
    throw IntegrationFailure(std::string("integration failed: ") + e.what(), last_good);
  }
  const CMatrix& last = out.states.back();
  const bool finite = std::all_of(last.data(), last.data() + last.size(),
                                  [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
  if (!finite) throw IntegrationFailure("integration produced non-finite values", last_good);
}

}  // namespace

CMatrix site_state(std::size_t dim, int site) {
  CMatrix rho = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  rho(site, site) = 1.0;
  return rho;
}

namespace {

void run(const Model& model, const CMatrix& initial, const ApproximationMode& mode, std::span<const double> grid,
         const EvolveOptions& options, Trajectory& out) {
  const auto dim = static_cast<Eigen::Index>(model.system.dim());
  if (initial.rows() != dim || initial.cols() != dim) throw ConfigError("initial state has the wrong dimension");
  if ((initial - initial.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw ConfigError("initial state is not Hermitian");
  if (std::abs(initial.trace() - cplx{1.0}) > 1e-10) throw ConfigError("initial state must have unit trace");
  if (grid.empty()) throw ConfigError("output grid is empty");
  if (grid.front() < 0.0) throw ConfigError("output grid must start at t >= 0");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw ConfigError("output grid must be strictly increasing");
  }

  const Generator gen(model, mode);
  Engine engine = options.engine;
  const bool sector_ok = gen.has_closed_form() && !mode.secular && in_sector(initial);
  if (engine == Engine::Auto) engine = sector_ok ? Engine::Sector : Engine::FullMatrix;
  if (engine == Engine::Sector && !sector_ok) {
    throw ConfigError("sector engine needs two transfer sites, a non-secular mode and rho13 = rho23 = 0");
  }

  out.engine = engine;
  if (engine == Engine::Sector) {
    SectorSystem sys(gen, &out.rhs_evaluations);
    integrate(sys, initial, grid, options, out);
  } else {
    FullSystem sys(gen, &out.rhs_evaluations);
    integrate(sys, initial, grid, options, out);
  }
}

bool finite_state(const CMatrix& r) {
  return std::all_of(r.data(), r.data() + r.size(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

}  // namespace

Trajectory evolve(const Model& model, const CMatrix& initial, const ApproximationMode& mode,
                  std::span<const double> grid, const EvolveOptions& options) {
  Trajectory out;
  run(model, initial, mode, grid, options, out);
  return out;
}

Trajectory evolve_partial(const Model& model, const CMatrix& initial, const ApproximationMode& mode,
                          std::span<const double> grid, std::optional<IntegrationFailure>& failure,
                          const EvolveOptions& options) {
  Trajectory out;
  failure.reset();
  try {
    run(model, initial, mode, grid, options, out);
  } catch (const IntegrationFailure& e) {
    failure.emplace(e);
    while (!out.states.empty() && !finite_state(out.states.back())) {
      out.states.pop_back();
      out.times.pop_back();
      out.phi.pop_back();
    }
  }
  return out;
}



std::vector<double> uniform_grid(double t_end, std::size_t samples) {
  if (!(t_end > 0.0)) throw ConfigError("t_end must be > 0");
  if (samples < 2) throw ConfigError("need at least two samples");
  std::vector<double> grid(samples);
  for (std::size_t k = 0; k < samples; ++k) grid[k] = t_end * static_cast<double>(k) / static_cast<double>(samples - 1);
  grid.back() = t_end;
  return grid;
}

double min_eigenvalue(const CMatrix& state) {
  const CMatrix herm = 0.5 * (state + state.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

std::vector<Observables> Trajectory::observables() const {
  std::vector<Observables> out;
  out.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const CMatrix& r = states[k];
    out.push_back({times[k], r(0, 0).real(), r(1, 1).real(), r(2, 2).real(), r(0, 1).real(), r(0, 1).imag(),
                   min_eigenvalue(r), r.trace().real()});
  }
  return out;
}

std::vector<double> Trajectory::element(int row, int col) const {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& r : states) out.push_back(r(row, col).real());
  return out;
}

double Trajectory::max_trace_drift() const {
  double worst = 0.0;
  for (const auto& r : states) worst = std::max(worst, std::abs(r.trace() - cplx{1.0}));
  return worst;
}

double Trajectory::max_hermiticity_drift() const {
  double worst = 0.0;
  for (const auto& r : states) worst = std::max(worst, (r - r.adjoint()).cwiseAbs().maxCoeff());
  return worst;
}

std::optional<double> first_sign_change(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw std::invalid_argument("first_sign_change: size mismatch");
  std::optional<std::size_t> last;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] == 0.0) continue;
    if (last && std::signbit(values[*last]) != std::signbit(values[k])) {
      const double ta = times[*last];
      const double va = values[*last];
      return ta + (times[k] - ta) * va / (va - values[k]);
    }
    last = k;
  }
  return std::nullopt;
}

double detrended_amplitude(std::span<const double> times, std::span<const double> values, double t_lo, double t_hi,
                           double period) {
  if (times.size() != values.size() || times.size() < 2) throw std::invalid_argument("detrended_amplitude: bad series");
  if (!(period > 0.0) || t_hi - t_lo <= period) throw std::invalid_argument("detrended_amplitude: window too short");

  // cumulative trapezoid of the piecewise-linear interpolant
  std::vector<double> cumulative(times.size(), 0.0);
  for (std::size_t k = 1; k < times.size(); ++k) {
    cumulative[k] = cumulative[k - 1] + 0.5 * (times[k] - times[k - 1]) * (values[k] + values[k - 1]);
  }
  const auto integral_to = [&](double x) {
    auto it = std::upper_bound(times.begin(), times.end(), x);
    std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
    k = std::min(k, times.size() - 2);
    const double h = times[k + 1] - times[k];
    const double vx = values[k] + (values[k + 1] - values[k]) * (x - times[k]) / h;
    return cumulative[k] + 0.5 * (x - times[k]) * (values[k] + vx);
  };

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    if (t < t_lo + 0.5 * period || t > t_hi - 0.5 * period) continue;
    const double mean = (integral_to(t + 0.5 * period) - integral_to(t - 0.5 * period)) / period;
    const double r = values[k] - mean;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (!(hi >= lo)) throw std::invalid_argument("detrended_amplitude: no samples inside the window");
  return hi - lo;
}

}  // namespace tcl2
