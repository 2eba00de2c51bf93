#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "superrad/full_engine.hpp"
#include "superrad/model.hpp"
#include "superrad/spinops.hpp"

namespace testing_support {

using superrad::ComplexMatrix;
using superrad::cplx;
using superrad::model::SystemConfig;

inline constexpr double kPi = std::numbers::pi;

/// Collective-basis parameter set used throughout: ω0 = 2π·100 rad/µs,
/// ω_d = 0.5 rad/µs, τ_c = 0.1 µs, θ = π/4, no spin-lattice coupling.
inline SystemConfig collective_config(int n) {
  SystemConfig c;
  c.n_spins = n;
  c.omega0 = 2.0 * kPi * 100.0;
  c.omega_d = 0.5;
  c.theta = kPi / 4.0;
  c.tau_c = 0.1;
  c.bath = superrad::model::DirectRates{0.0, 0.0};
  return c;
}

inline double max_abs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = cplx{g(rng), g(rng)};
  return m;
}

/// Random full-rank density matrix G G† / Tr.
inline ComplexMatrix random_density(std::mt19937_64& rng, Eigen::Index dim) {
  const ComplexMatrix g = random_matrix(rng, dim);
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace();
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Valid configuration with moderate, comparable timescales so the integrator
/// stays cheap. Either bath form, any geometry, α_c in [0, 0.9).
inline SystemConfig random_config(std::mt19937_64& rng, int n_min = 1, int n_max = 4) {
  SystemConfig c;
  c.n_spins = uniform_int(rng, n_min, n_max);
  c.omega0 = uniform(rng, 1.0, 10.0);
  c.omega_d = uniform(rng, 0.2, 3.0);
  c.theta = uniform(rng, 0.1, kPi - 0.1);
  c.phi = uniform(rng, 0.0, 2.0 * kPi);
  c.tau_c = log_uniform(rng, 0.05, 2.0) / c.omega0;
  c.geometry = static_cast<superrad::model::Geometry>(uniform_int(rng, 0, 2));
  c.alpha_c = uniform(rng, 0.0, 0.9);
  if (uniform_int(rng, 0, 1) == 0) {
    c.bath = superrad::model::DirectRates{uniform(rng, 0.0, 0.05), uniform(rng, 0.0, 0.05)};
  } else {
    c.bath = superrad::model::ThermalBath{uniform(rng, 0.05, 0.5), uniform(rng, -2.0, 2.0),
                                          uniform(rng, 0.0, 2.0)};
  }
  return c;
}

}  // namespace testing_support
