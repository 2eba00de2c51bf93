#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "superrad/collective.hpp"
#include "superrad/errors.hpp"
#include "superrad/full_engine.hpp"
#include "support.hpp"

using namespace superrad;
using namespace superrad::full;
using superrad::model::DirectRates;
using superrad::model::Geometry;
using superrad::model::SystemConfig;
using spinops::Pauli;
using testing_support::max_abs;

namespace {

ComplexMatrix vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

// Spin-lattice dissipator written out site by site, cross terms weighted by α_c.
ComplexMatrix spin_lattice_oracle(const ComplexMatrix& rho, int n, double p_plus, double p_minus,
                                  double alpha_c) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = i == j ? 1.0 : alpha_c;
      const ComplexMatrix mi = spinops::site_operator(spinops::pauli(Pauli::Minus), i, n);
      const ComplexMatrix pj = spinops::site_operator(spinops::pauli(Pauli::Plus), j, n);
      const ComplexMatrix pi = spinops::site_operator(spinops::pauli(Pauli::Plus), i, n);
      const ComplexMatrix mj = spinops::site_operator(spinops::pauli(Pauli::Minus), j, n);
      out += w * p_minus * (2.0 * mi * rho * pj - pj * mi * rho - rho * pj * mi);
      out += w * p_plus * (2.0 * pi * rho * mj - mj * pi * rho - rho * mj * pi);
    }
  }
  return out;
}

SystemConfig relaxing_spin(double p_plus, double p_minus) {
  SystemConfig c = testing_support::collective_config(1);
  c.bath = DirectRates{p_plus, p_minus};
  return c;
}

}  // namespace

TEST_CASE("single spin: generator is the spin-lattice dissipator") {
  const SystemConfig c = relaxing_spin(0.3, 0.7);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix rho = testing_support::random_density(rng, 2);
    CHECK(max_abs(rhs(rho, c) - spin_lattice_oracle(rho, 1, 0.3, 0.7, 0.0)) < 1e-14);
  }
  // all-up population decays at 2 p_−
  const ComplexMatrix d = rhs(all_up_state(1), c);
  CHECK(d(0, 0).real() == doctest::Approx(-2.0 * 0.7));
  CHECK(build_hamiltonian_secular(c).isZero());
}

TEST_CASE("spin-lattice part matches the site-by-site oracle") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    SystemConfig c = testing_support::random_config(rng, 1, 4);
    const double pp = testing_support::uniform(rng, 0.0, 0.5);
    const double pm = testing_support::uniform(rng, 0.0, 0.5);
    c.bath = DirectRates{pp, pm};
    SystemConfig bare = c;
    bare.bath = DirectRates{0.0, 0.0};
    const ComplexMatrix rho = testing_support::random_density(rng, Eigen::Index{1} << c.n_spins);
    const ComplexMatrix diff = rhs(rho, c) - rhs(rho, bare);
    CHECK(max_abs(diff - spin_lattice_oracle(rho, c.n_spins, pp, pm, c.alpha_c)) < 1e-12);
  }
}

TEST_CASE("generator agrees with the independently assembled Liouvillian") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const SystemConfig c = testing_support::random_config(rng, 1, 4);
    const ComplexMatrix rho = testing_support::random_density(rng, Eigen::Index{1} << c.n_spins);
    const ComplexMatrix l = liouvillian_matrix(c);
    const ComplexMatrix lhs = l * vec(rho);
    const double scale = std::max(1.0, max_abs(l));
    CHECK(max_abs(lhs - vec(rhs(rho, c))) < 1e-12 * scale);
  }
  CHECK_THROWS_AS(liouvillian_matrix(testing_support::collective_config(5)), std::invalid_argument);
}

TEST_CASE("generator preserves trace and Hermiticity") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const SystemConfig c = testing_support::random_config(rng, 1, 4);
    const ComplexMatrix rho = testing_support::random_density(rng, Eigen::Index{1} << c.n_spins);
    const ComplexMatrix d = rhs(rho, c);
    CHECK(std::abs(d.trace()) < 1e-12);
    CHECK(spinops::hermiticity_error(d) < 1e-12);
  }
}

TEST_CASE("maximally mixed state is stationary when p_+ = p_-") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    SystemConfig c = testing_support::random_config(rng, 1, 4);
    const double p = testing_support::uniform(rng, 0.0, 0.3);
    c.bath = DirectRates{p, p};
    const Eigen::Index dim = Eigen::Index{1} << c.n_spins;
    const ComplexMatrix mixed = ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
    CHECK(max_abs(rhs(mixed, c)) < 1e-14);
  }
}

TEST_CASE("circular coupling of three spins equals all-to-all") {
  SystemConfig a = testing_support::collective_config(3);
  a.bath = DirectRates{0.01, 0.02};
  SystemConfig b = a;
  b.geometry = Geometry::Circular;
  std::mt19937_64 rng(6);
  const ComplexMatrix rho = testing_support::random_density(rng, 8);
  CHECK(max_abs(rhs(rho, a) - rhs(rho, b)) < 1e-15);
}

TEST_CASE("cross-correlation weight enters linearly") {
  SystemConfig c = testing_support::collective_config(3);
  c.bath = DirectRates{0.2, 0.5};
  std::mt19937_64 rng(7);
  const ComplexMatrix rho = testing_support::random_density(rng, 8);
  auto at = [&](double a) {
    SystemConfig x = c;
    x.alpha_c = a;
    return ComplexMatrix(rhs(rho, x));
  };
  const ComplexMatrix d0 = at(0.0);
  CHECK(max_abs((at(0.5) - d0) - 2.0 * (at(0.25) - d0)) < 1e-13);
  CHECK(max_abs(at(0.5) - d0) > 1e-3);
}

TEST_CASE("observables of product states") {
  for (int n = 1; n <= 4; ++n) {
    const auto up = observables(all_up_state(n), n);
    CHECK(up.intensity == doctest::Approx(n));
    CHECK(up.jz == doctest::Approx(0.5 * n));
    CHECK(up.dc == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(up.j_squared == doctest::Approx(0.5 * n * (0.5 * n + 1.0)));

    const Eigen::Index dim = Eigen::Index{1} << n;
    ComplexVector down = ComplexVector::Zero(dim);
    down(dim - 1) = 1.0;
    const auto dn = observables(pure_state(down), n);
    CHECK(std::abs(dn.intensity) < 1e-14);
    CHECK(dn.jz == doctest::Approx(-0.5 * n));
  }
  // |J, J−1> of four spins: (J+M)(J−M+1) = 3·2
  const auto basis = spinops::dicke_basis(4);
  const auto o = observables(pure_state(basis.vectors.col(1)), 4);
  CHECK(o.intensity == doctest::Approx(3.0 * 2.0));
  CHECK(o.jz == doctest::Approx(1.0));
}

TEST_CASE("single-spin relaxation follows the analytic exponential") {
  const double pp = 0.02, pm = 0.05;
  const SystemConfig c = relaxing_spin(pp, pm);
  for (auto method : {EvolveMethod::Spectral, EvolveMethod::RungeKutta}) {
    EvolveOptions opts;
    opts.method = method;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-12;
    const auto traj = evolve(all_up_state(1), c, 40.0, opts);
    REQUIRE(traj.times.size() == 201);
    const double eq = pp / (pp + pm);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      const double p_up = eq + (1.0 - eq) * std::exp(-2.0 * (pp + pm) * traj.times[k]);
      worst = std::max(worst, std::abs(traj.observables[k].jz + 0.5 - p_up));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("spectral and Runge-Kutta paths agree") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 6; ++trial) {
    const SystemConfig c = testing_support::random_config(rng, 2, 3);
    const ComplexMatrix rho0 = testing_support::random_density(rng, Eigen::Index{1} << c.n_spins);
    EvolveOptions opts;
    opts.sample_times = {0.0, 0.5, 2.0, 5.0};
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-12;
    opts.store_states = true;
    opts.method = EvolveMethod::Spectral;
    const auto s = evolve(rho0, c, 5.0, opts);
    opts.method = EvolveMethod::RungeKutta;
    const auto r = evolve(rho0, c, 5.0, opts);
    CHECK(s.method == "spectral");
    CHECK(r.method == "runge_kutta");
    for (std::size_t k = 0; k < s.states.size(); ++k) {
      CHECK(max_abs(s.states[k] - r.states[k]) < 1e-8);
    }
  }
}

TEST_CASE("trajectories stay physical") {
  SystemConfig c = testing_support::collective_config(3);
  c.omega0 = 5.0;
  c.omega_d = 2.0;
  c.tau_c = 0.2;
  c.bath = DirectRates{0.01, 0.03};
  EvolveOptions opts;
  opts.method = EvolveMethod::RungeKutta;
  const auto t = evolve(all_up_state(3), c, 50.0, opts);
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    CHECK(t.trace_error[k] < 1e-8);
    CHECK(t.hermiticity_error[k] < 1e-10);
    CHECK(t.min_eigenvalue[k] > -1e-8);
  }
  CHECK(t.steps > 0);
  CHECK(t.intensity().size() == t.times.size());
}

TEST_CASE("asymptotic decay rate") {
  SUBCASE("single spin: coherences decay at p_+ + p_-, populations twice as fast") {
    CHECK(adr_full(relaxing_spin(0.02, 0.05)) == doctest::Approx(0.02 + 0.05).epsilon(1e-8));
  }
  SUBCASE("no channel at all") { CHECK_THROWS_AS(adr_full(relaxing_spin(0.0, 0.0)), NoDecayError); }
  SUBCASE("positive and scale covariant") {
    SystemConfig c = testing_support::collective_config(2);
    c.omega0 = 3.0;
    c.omega_d = 1.0;
    c.tau_c = 0.3;
    const double base = adr_full(c);
    CHECK(base > 0.0);
    c.omega_d = 2.0;
    CHECK(adr_full(c) == doctest::Approx(4.0 * base).epsilon(1e-7));
  }
}

TEST_CASE("evolve input validation") {
  const SystemConfig c = relaxing_spin(0.1, 0.1);
  const ComplexMatrix up = all_up_state(1);
  CHECK_THROWS_AS(evolve(all_up_state(2), c, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(evolve(up, c, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(evolve(2.0 * up, c, 1.0), std::invalid_argument);

  ComplexMatrix bad = up;
  bad(0, 1) = 0.3;
  CHECK_THROWS_AS(evolve(bad, c, 1.0), std::invalid_argument);

  EvolveOptions opts;
  opts.sample_times = {0.0, 2.0};
  CHECK_THROWS_AS(evolve(up, c, 1.0, opts), std::invalid_argument);
  opts.sample_times = {0.5, 0.5};
  CHECK_THROWS_AS(evolve(up, c, 1.0, opts), std::invalid_argument);

  CHECK_THROWS_AS(rhs(all_up_state(2), c), std::invalid_argument);
  CHECK_THROWS_AS(observables(up, 2), std::invalid_argument);
}

TEST_CASE("step budget exhaustion is reported as a numerical failure") {
  SystemConfig c = testing_support::collective_config(2);
  c.bath = DirectRates{0.1, 0.2};
  EvolveOptions opts;
  opts.method = EvolveMethod::RungeKutta;
  opts.max_steps = 1;
  CHECK_THROWS_AS(evolve(all_up_state(2), c, 100.0, opts), NumericalFailure);
}
