#include "doctest.h"

#include <cmath>
#include <limits>

#include "tcl2/dynamics.hpp"
#include "tcl2/errors.hpp"
#include "tcl2/stationary.hpp"

using namespace tcl2;

namespace {

Model default_model() { return Model{SiteSystem{}, OhmicBath(0.01, 1.0, 2.0)}; }

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("trace distance") {
  const CMatrix a = site_state(3, 0);
  const CMatrix b = site_state(3, 2);
  CHECK(trace_distance(a, a) == 0.0);
  CHECK(trace_distance(a, b) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(trace_distance(a, 0.5 * (a + b)) == doctest::Approx(0.5).epsilon(1e-15));
  const CMatrix g = gibbs_state(build_hamiltonian(SiteSystem{}), 2.0);
  CHECK(trace_distance(a, g) == doctest::Approx(trace_distance(g, a)).epsilon(1e-15));
}

TEST_CASE("local approach matches its closed form") {
  // tests/oracles/reference_values.py
  const double pop = 0.106506978919200750510546100072;
  const double sink = 0.786986042161598498978907799856;
  const CMatrix la = la_analytic_stationary(2.0, 1.0, 0.0);
  CHECK(std::abs(la(0, 0).real() - pop) < 1e-15);
  CHECK(std::abs(la(2, 2).real() - sink) < 1e-15);

  for (const char* name : {"LA_M_BS", "LA_NM_BS", "LA_M_SA"}) {
    const auto st = stationary_state(default_model(), ApproximationMode::parse(name));
    CAPTURE(name);
    CHECK(max_abs(st.rho - la) < 1e-8);
    CHECK(st.residual < 1e-12);
  }
  for (double beta : {0.5, 1.0, 4.0}) {
    const Model m{SiteSystem::dimer(0.7, 1.0, 0.0, 0.2), OhmicBath(0.01, 1.0, beta)};
    const auto st = stationary_state(m, ApproximationMode::parse("LA_M_BS"));
    CHECK(max_abs(st.rho - la_analytic_stationary(beta, 1.0, 0.0)) < 1e-8);
  }
  CHECK_THROWS_AS(la_analytic_stationary(-1.0, 1.0, 0.0), ConfigError);
}

TEST_CASE("global approach lands near the Gibbs state") {
  const auto st = stationary_state(default_model(), ApproximationMode::parse("M_BS"));
  const CMatrix g = gibbs_state(build_hamiltonian(SiteSystem{}), 2.0);
  CHECK(trace_distance(st.rho, g) <= 0.05);
  CHECK(trace_distance(st.rho, g) > 0.0);
  CHECK(st.residual < 1e-12);
  CHECK(std::abs(st.rho.trace() - 1.0) < 1e-14);
  CHECK(max_abs(st.rho - st.rho.adjoint()) < 1e-15);
  CHECK(st.rho(0, 2) == 0.0);
  CHECK(std::abs(st.rho(0, 1).real()) > 1e-2);
  // the non-Markov mode relaxes to the same t -> inf generator
  const auto nm = stationary_state(default_model(), ApproximationMode::parse("NM_BS"));
  CHECK(max_abs(nm.rho - st.rho) < 1e-14);
}

TEST_CASE("secular stationary state is the Gibbs state") {
  for (double beta : {0.5, 2.0, 4.0}) {
    for (double v : {0.05, 0.3, 0.5}) {
      const Model m{SiteSystem::dimer(0.5, 1.0, 0.0, v), OhmicBath(0.01, 1.0, beta)};
      const auto st = stationary_state(m, ApproximationMode::parse("M_SA"));
      CHECK(max_abs(st.rho - gibbs_state(build_hamiltonian(m.system), beta)) < 1e-10);
    }
  }
}

TEST_CASE("null-space and z-extrapolation solvers agree") {
  for (double beta : {0.5, 1.375, 2.25, 3.125, 4.0}) {
    for (double v : {0.05, 0.1625, 0.275, 0.3875, 0.5}) {
      const Model m{SiteSystem::dimer(0.5, 1.0, 0.0, v), OhmicBath(0.01, 1.0, beta)};
      for (const char* name : {"M_BS", "LA_M_BS", "M_SA"}) {
        const auto mode = ApproximationMode::parse(name);
        const auto a = stationary_state(m, mode);
        const auto b = stationary_state_z_extrapolation(m, mode, site_state(3, 0));
        CAPTURE(beta);
        CAPTURE(v);
        CAPTURE(name);
        CHECK(max_abs(a.rho - b.rho) < 1e-6);
        CHECK(b.method == StationaryMethod::ZExtrapolation);
      }
    }
  }
}

TEST_CASE("z-extrapolation does not depend on the initial state") {
  const auto mode = ApproximationMode::parse("M_BS");
  const auto a = stationary_state_z_extrapolation(default_model(), mode, site_state(3, 0));
  const auto b = stationary_state_z_extrapolation(default_model(), mode, site_state(3, 2));
  CHECK(max_abs(a.rho - b.rho) < 1e-6);
}

TEST_CASE("degenerate stationary problems are rejected") {
  const Model free{SiteSystem{}, OhmicBath(0.0, 1.0, 2.0)};
  CHECK_THROWS_AS(stationary_state(free, ApproximationMode::parse("M_BS")), MultiplicityError);
  SiteSystem chain;
  chain.omegas = {0.2, 0.5, 1.0, 0.0};
  chain.couplings = {{0, 1, 0.1}, {1, 2, 0.1}};
  CHECK_THROWS_AS(stationary_state(Model{chain, OhmicBath(0.01, 1.0, 2.0)}, ApproximationMode::parse("M_BS")),
                  ConfigError);
}

TEST_CASE("positivity scan") {
  const Model base{SiteSystem::dimer(1.25, 1.0, 0.0, 0.3), OhmicBath(0.01, 1.0, 2.0)};
  const std::vector<double> betas{0.5, 1.0, 2.5, 4.0};
  const std::vector<double> v12s{0.05, 0.3, 0.5};
  const PositivityScan scan = positivity_scan(base, betas, v12s, 2);
  CHECK(scan.omega1 == 1.25);
  REQUIRE(scan.min_eigenvalues.size() == 12);
  for (const auto& e : scan.errors) CHECK(e.empty());
  for (std::size_t j = 0; j < v12s.size(); ++j) {
    CHECK(*scan.at(0, j) > 0.0);
    CHECK(*scan.at(1, j) > 0.0);
  }
  CHECK(*scan.at(3, 2) < 0.0);
  CHECK(std::abs(*scan.at(3, 2)) < 1e-2);
  REQUIRE(scan.boundary_beta[2]);
  CHECK(*scan.boundary_beta[2] > 2.5);
  CHECK(*scan.boundary_beta[2] < 4.0);
  CHECK(!scan.boundary_beta[0]);

  // single worker gives the identical table
  const PositivityScan serial = positivity_scan(base, betas, v12s, 1);
  for (std::size_t k = 0; k < scan.min_eigenvalues.size(); ++k) {
    CHECK(*serial.min_eigenvalues[k] == *scan.min_eigenvalues[k]);
  }
}

TEST_CASE("positivity scan records per-point failures") {
  const Model base{SiteSystem::dimer(1.25, 1.0, 0.0, 0.3), OhmicBath(0.01, 1.0, 2.0)};
  const std::vector<double> betas{1.0, -1.0};
  const std::vector<double> v12s{0.3};
  const PositivityScan scan = positivity_scan(base, betas, v12s, 1);
  CHECK(scan.at(0, 0).has_value());
  CHECK(!scan.at(1, 0).has_value());
  CHECK(scan.errors[0].empty());
  CHECK(scan.errors[1].find("beta") != std::string::npos);
}
