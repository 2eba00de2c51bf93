#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "superrad/model.hpp"
#include "superrad/spinops.hpp"

namespace superrad::full {

using DensityMatrix = ComplexMatrix;

struct Observables {
  double intensity = 0.0;  // <J_+ J_->
  double jz = 0.0;         // <Σ I_z>
  double dc = 0.0;         // (intensity − N/2 − jz) / 2
  double j_squared = 0.0;  // <J²>
};

/// One Lindblad channel c · (2 L ρ L† − {L†L, ρ}).
struct Jump {
  ComplexMatrix op;
  double rate = 0.0;
};

/// Precomputed generator of the N-spin master equation:
///   dρ/dt = −i[H_sec, ρ] + D_dipolar[ρ] + D_SL[ρ] + α_c D_SL^cross[ρ]
/// The dipolar double commutators are held as the equivalent Lindblad channels
/// A_m and A_m† with rate Γ(m) for m = 1, 2, and A_0 with rate Γ(0), where
/// A_m = Σ_pairs T_2^{+m}.
class Generator {
 public:
  explicit Generator(const model::SystemConfig& cfg);

  int n_spins() const { return n_spins_; }
  Eigen::Index dim() const { return h_.rows(); }

  const ComplexMatrix& hamiltonian() const { return h_; }
  const std::vector<Jump>& jumps() const { return jumps_; }

  DensityMatrix dissipator(const DensityMatrix& rho) const;
  DensityMatrix operator()(const DensityMatrix& rho) const;

  /// Crude bound on the generator's magnitude (1/µs), used to seed step sizes.
  double rate_scale() const;

 private:
  int n_spins_;
  ComplexMatrix h_;
  std::vector<Jump> jumps_;
  ComplexMatrix decay_;  // Σ c L†L
};

/// H_sec = ω_{d_0} Σ_pairs T_2^0. Zero for a single spin.
ComplexMatrix build_hamiltonian_secular(const model::SystemConfig& cfg);

/// Time derivative of ρ. Throws std::invalid_argument on a dimension mismatch.
DensityMatrix rhs(const DensityMatrix& rho, const model::SystemConfig& cfg);

Observables observables(const DensityMatrix& rho, int n_spins);

enum class EvolveMethod {
  Auto,        // Spectral for N <= kLiouvillianSpinCap, RungeKutta beyond
  RungeKutta,  // adaptive Dormand-Prince in the H_sec eigenframe
  Spectral,    // eigendecomposition of the dense Liouvillian
};

inline constexpr int kLiouvillianSpinCap = 4;

struct EvolveOptions {
  EvolveMethod method = EvolveMethod::Auto;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  /// Unlimited when empty.
  std::optional<double> max_step;
  /// Defaults to 201 uniform samples over [0, t_end].
  std::vector<double> sample_times;
  bool store_states = false;
  std::size_t max_steps = 20'000'000;
  double positivity_warn = 1e-6;
  double positivity_fail = 1e-3;
};

struct Trajectory {
  int n_spins = 0;
  std::vector<double> times;
  std::vector<Observables> observables;
  std::vector<double> trace_error;
  std::vector<double> hermiticity_error;
  std::vector<double> min_eigenvalue;
  std::vector<DensityMatrix> states;
  bool positivity_warning = false;
  std::size_t steps = 0;
  /// "spectral" or "runge_kutta"
  std::string method;
  /// Spectral propagation was requested but the eigenbasis was ill-conditioned.
  bool fell_back = false;

  std::vector<double> intensity() const;
};

/// Samples ρ(t) from ρ0. The Runge-Kutta path is adaptive Dormand–Prince 5(4)
/// with dense output; the secular Hamiltonian is removed analytically by
/// working in its eigenframe. The spectral path is exact up to roundoff and
/// falls back to the integrator when the Liouvillian eigenbasis cannot
/// reproduce ρ0.
///
/// Throws NumericalFailure on step-size underflow or when the minimum
/// eigenvalue drops below −positivity_fail.
Trajectory evolve(const DensityMatrix& rho0, const model::SystemConfig& cfg, double t_end,
                  const EvolveOptions& options = {});

/// Dense superoperator on column-stacked vec(ρ), assembled independently of
/// Generator from commutator superoperators. N ≤ 4.
ComplexMatrix liouvillian_matrix(const model::SystemConfig& cfg);

/// Smallest |Re λ| over Liouvillian eigenvalues with Re λ < −1e−9·ρ(L).
/// Throws NoDecayError when every eigenvalue is (numerically) stationary.
double adr_full(const model::SystemConfig& cfg);

DensityMatrix all_up_state(int n_spins);
DensityMatrix pure_state(const ComplexVector& psi);

}  // namespace superrad::full
