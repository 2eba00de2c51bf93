#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "superrad/errors.hpp"
#include "superrad/model.hpp"
#include "support.hpp"

using namespace superrad;
using namespace superrad::model;
using testing_support::kPi;

TEST_CASE("spherical harmonics: closed-form values") {
  CHECK(spherical_harmonic_y2(0, kPi / 4, 0).real() ==
        doctest::Approx(std::sqrt(5.0 / (16.0 * kPi)) * 0.5).epsilon(1e-14));
  CHECK(spherical_harmonic_y2(0, kPi / 4, 0).real() == doctest::Approx(0.15769).epsilon(1e-4));
  CHECK(spherical_harmonic_y2(2, kPi / 2, 0).real() == doctest::Approx(std::sqrt(15.0 / (32.0 * kPi))));
  CHECK(spherical_harmonic_y2(2, kPi / 2, 0).real() == doctest::Approx(0.38627).epsilon(1e-4));
  const double magic = std::acos(1.0 / std::sqrt(3.0));
  CHECK(std::abs(spherical_harmonic_y2(0, magic, 0.3)) < 1e-15);
  CHECK_THROWS_AS(spherical_harmonic_y2(3, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("spherical harmonics: orthonormality by quadrature") {
  // Midpoint rule in cos θ and φ; the integrands are low-order trigonometric
  // polynomials, so the error is far below the tolerance.
  const int nt = 200, np = 64;
  for (int m1 = -2; m1 <= 2; ++m1) {
    for (int m2 = -2; m2 <= 2; ++m2) {
      std::complex<double> acc = 0.0;
      for (int a = 0; a < nt; ++a) {
        const double u = -1.0 + (a + 0.5) * 2.0 / nt;
        const double th = std::acos(u);
        for (int b = 0; b < np; ++b) {
          const double ph = (b + 0.5) * 2.0 * kPi / np;
          acc += std::conj(spherical_harmonic_y2(m1, th, ph)) * spherical_harmonic_y2(m2, th, ph);
        }
      }
      acc *= (2.0 / nt) * (2.0 * kPi / np);
      CHECK(std::abs(acc - (m1 == m2 ? 1.0 : 0.0)) < 5e-4);
    }
  }
}

TEST_CASE("dipolar amplitude") {
  SystemConfig c = testing_support::collective_config(2);
  c.omega_d = 1.0;
  // ω_{d_1} = ω_d Y_2^{−1}, positive at θ = π/4
  const auto a1 = dipolar_amplitude(1, c);
  CHECK(std::abs(std::abs(a1) - std::sqrt(15.0 / (8.0 * kPi)) * 0.5) < 1e-14);
  CHECK(a1.real() == doctest::Approx(0.386274).epsilon(1e-6));

  c.theta = std::acos(1.0 / std::sqrt(3.0));
  CHECK(std::abs(dipolar_amplitude(0, c)) < 1e-15);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    c.theta = testing_support::uniform(rng, 0.0, kPi);
    c.phi = testing_support::uniform(rng, 0.0, 2.0 * kPi);
    for (int m = 1; m <= 2; ++m) {
      CHECK(std::abs(dipolar_amplitude(m, c)) == doctest::Approx(std::abs(dipolar_amplitude(-m, c))));
    }
  }
}

TEST_CASE("gamma(m)") {
  SystemConfig c = testing_support::collective_config(2);

  SUBCASE("m = 0 has no Lorentzian suppression") {
    CHECK(gamma(0, c) == doctest::Approx(std::norm(dipolar_amplitude(0, c)) * c.tau_c));
  }
  SUBCASE("independent closed form for the collective parameter set") {
    // |Y_2^1|² = 15/(8π) sin²θ cos²θ = 15/(32π) at θ = π/4; |Y_2^2|² = 15/(32π) sin⁴θ = 15/(128π)
    const double x = c.omega0 * c.tau_c;
    const double g1 = 0.25 * 15.0 / (32.0 * kPi) * c.tau_c / (1.0 + x * x);
    const double g2 = 0.25 * 15.0 / (128.0 * kPi) * c.tau_c / (1.0 + 4.0 * x * x);
    CHECK(gamma(1, c) == doctest::Approx(g1).epsilon(1e-13));
    CHECK(gamma(2, c) == doctest::Approx(g2).epsilon(1e-13));
    CHECK(gamma(1, c) == doctest::Approx(9.4463e-7).epsilon(1e-4));
    CHECK(gamma(2, c) == doctest::Approx(5.905e-8).epsilon(1e-3));
  }
  SUBCASE("ω0τ_c = 1 gives |ω_{d_1}|²/(2ω0)") {
    c.tau_c = 1.0 / c.omega0;
    CHECK(gamma(1, c) == doctest::Approx(std::norm(dipolar_amplitude(1, c)) / (2.0 * c.omega0)));
  }
  SUBCASE("large ω0τ_c limit") {
    c.tau_c = 1e4 / c.omega0;
    const double limit = std::norm(dipolar_amplitude(1, c)) / (c.omega0 * c.omega0 * c.tau_c);
    CHECK(gamma(1, c) == doctest::Approx(limit).epsilon(1e-7));
  }
  SUBCASE("maximum over τ_c sits at 1/(m ω0)") {
    for (int m = 1; m <= 2; ++m) {
      double best_x = 0.0, best = -1.0;
      for (int k = 0; k <= 4000; ++k) {
        const double x = std::pow(10.0, -2.0 + 4.0 * k / 4000.0);
        c.tau_c = x / c.omega0;
        const double g = gamma(m, c);
        if (g > best) best = g, best_x = x;
      }
      CHECK(best_x == doctest::Approx(1.0 / m).epsilon(3e-3));
    }
  }
  SUBCASE("nonnegative and φ-independent") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      c = testing_support::random_config(rng);
      const double base[3] = {gamma(0, c), gamma(1, c), gamma(2, c)};
      c.phi += 1.234;
      for (int m = 0; m < 3; ++m) {
        CHECK(base[m] >= 0.0);
        CHECK(gamma(m, c) == doctest::Approx(base[m]).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(gamma(3, c), std::invalid_argument);
  CHECK_THROWS_AS(gamma(-1, c), std::invalid_argument);
}

TEST_CASE("spin-lattice transition rates") {
  SystemConfig c = testing_support::collective_config(2);
  c.bath = ThermalBath{0.3, 0.0, 0.0};
  auto p = transition_rates(c);
  CHECK(p.p_plus == 0.0);
  CHECK(p.p_minus == doctest::Approx(0.09 * c.tau_c));

  c.bath = ThermalBath{0.3, 0.0, 1.5};
  p = transition_rates(c);
  CHECK(p.p_minus == doctest::Approx(0.09 * 2.5 * c.tau_c));
  CHECK(*equilibrium_magnetization(p) == doctest::Approx(-1.0 / (2.0 * 1.5 + 1.0)));

  c.bath = ThermalBath{0.3, 7.0, 1.5};
  const auto detuned = transition_rates(c);
  CHECK(detuned.p_minus == doctest::Approx(p.p_minus / (1.0 + 49.0 * c.tau_c * c.tau_c)));
  CHECK(detuned.p_minus >= detuned.p_plus);

  c.bath = DirectRates{6e-8, 4e-8};
  p = transition_rates(c);
  CHECK(p.p_plus == 6e-8);
  CHECK(p.p_minus == 4e-8);
  CHECK(*equilibrium_magnetization(p) == doctest::Approx(0.2));
  CHECK_FALSE(equilibrium_magnetization({0.0, 0.0}).has_value());

  const auto rs = rate_set(c);
  CHECK(rs.gamma[1] == gamma(1, c));
  CHECK(rs.mz_eq.has_value());
}

TEST_CASE("pair lists") {
  CHECK(pair_list(Geometry::AllToAll, 4).size() == 6);
  CHECK(pair_list(Geometry::Circular, 4).size() == 4);
  CHECK(pair_list(Geometry::Linear, 4).size() == 3);
  CHECK(pair_list(Geometry::Circular, 2).size() == 1);
  CHECK(pair_list(Geometry::Linear, 2) == pair_list(Geometry::AllToAll, 2));

  const auto a3 = pair_list(Geometry::AllToAll, 3);
  const auto c3 = pair_list(Geometry::Circular, 3);
  CHECK(std::set(a3.begin(), a3.end()) == std::set(c3.begin(), c3.end()));

  for (int n = 2; n <= 12; ++n) {
    for (auto g : {Geometry::AllToAll, Geometry::Circular, Geometry::Linear}) {
      const auto pairs = pair_list(g, n);
      std::set<std::pair<int, int>> unique(pairs.begin(), pairs.end());
      CHECK(unique.size() == pairs.size());
      for (const auto& [i, j] : pairs) {
        CHECK(i > j);
        CHECK(j >= 0);
        CHECK(i < n);
      }
    }
    if (n >= 4) {
      CHECK(pair_list(Geometry::AllToAll, n).size() >= pair_list(Geometry::Circular, n).size());
      CHECK(pair_list(Geometry::Circular, n).size() >= pair_list(Geometry::Linear, n).size());
    }
  }
  CHECK_THROWS_AS(pair_list(Geometry::Linear, 1), std::invalid_argument);
}

TEST_CASE("geometry names") {
  for (auto g : {Geometry::AllToAll, Geometry::Circular, Geometry::Linear}) {
    CHECK(parse_geometry(to_string(g)) == g);
  }
  CHECK(parse_geometry("All-To-All") == Geometry::AllToAll);
  CHECK_THROWS_AS(parse_geometry("star"), ConfigError);
}

TEST_CASE("config validation") {
  SystemConfig c = testing_support::collective_config(3);
  CHECK_NOTHROW(c.validate());
  auto bad = c;
  bad.n_spins = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.tau_c = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.omega0 = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.alpha_c = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.bath = DirectRates{-1.0, 0.0};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.bath = ThermalBath{0.1, 0.0, -0.5};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
