#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace superrad::model {

// Units: angular frequencies in rad/µs, times in µs, rates in 1/µs.

enum class Geometry { AllToAll, Circular, Linear };

std::string_view to_string(Geometry g);
/// Accepts "all_to_all", "circular", "linear" (case-insensitive, '-' or '_').
Geometry parse_geometry(std::string_view name);

/// Single-mode thermal bath: rates follow from the coupling, the bath detuning
/// ω_L − ω0 and the mean occupation.
struct ThermalBath {
  double omega_sl = 0.0;
  double detuning = 0.0;
  double nbar = 0.0;
};

/// Spin-lattice transition rates given directly.
struct DirectRates {
  double p_plus = 0.0;
  double p_minus = 0.0;
};

using Bath = std::variant<ThermalBath, DirectRates>;

struct SystemConfig {
  int n_spins = 1;
  double omega0 = 0.0;
  double omega_d = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double tau_c = 0.0;
  Bath bath = DirectRates{};
  Geometry geometry = Geometry::AllToAll;
  double alpha_c = 0.0;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

struct TransitionRates {
  double p_plus = 0.0;
  double p_minus = 0.0;
};

struct RateSet {
  std::array<double, 3> gamma{};  // Γ(0), Γ(1), Γ(2)
  double p_plus = 0.0;
  double p_minus = 0.0;
  /// Spin-lattice equilibrium magnetization; empty when p_+ = p_− = 0.
  std::optional<double> mz_eq;
};

/// Orthonormal spherical harmonic Y_2^m(θ, φ), m in [-2, 2].
std::complex<double> spherical_harmonic_y2(int m, double theta, double phi);

/// ω_{d_m} = ω_d · Y_2^{−m}(θ, φ)
std::complex<double> dipolar_amplitude(int m, const SystemConfig& cfg);

/// Γ(m) = |ω_{d_m}|² τ_c / (1 + (m ω0 τ_c)²), m in {0, 1, 2}.
double gamma(int m, const SystemConfig& cfg);

/// Thermal form: p_∓ = ω_SL² n_∓ τ_c / (1 + Δ² τ_c²) with n_− = n̄ + 1, n_+ = n̄.
/// Direct rates pass through unchanged.
TransitionRates transition_rates(const SystemConfig& cfg);

std::optional<double> equilibrium_magnetization(const TransitionRates& rates);

RateSet rate_set(const SystemConfig& cfg);

/// Coupled pairs (i, j) with i > j. Throws std::invalid_argument for n_spins < 2.
std::vector<std::pair<int, int>> pair_list(Geometry geometry, int n_spins);

}  // namespace superrad::model
