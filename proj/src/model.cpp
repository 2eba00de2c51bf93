#include "superrad/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "superrad/errors.hpp"

namespace superrad::model {

std::string_view to_string(Geometry g) {
  switch (g) {
    case Geometry::AllToAll:
      return "all_to_all";
    case Geometry::Circular:
      return "circular";
    case Geometry::Linear:
      return "linear";
  }
  return "unknown";
}

Geometry parse_geometry(std::string_view name) {
  std::string key;
  for (char c : name) key.push_back(c == '-' ? '_' : static_cast<char>(std::tolower(c)));
  if (key == "all_to_all" || key == "alltoall" || key == "all") return Geometry::AllToAll;
  if (key == "circular" || key == "ring") return Geometry::Circular;
  if (key == "linear" || key == "chain") return Geometry::Linear;
  throw ConfigError("unknown geometry '" + std::string(name) + "'");
}

void SystemConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid config: " + what); };
  auto finite = [](double v) { return std::isfinite(v); };

  if (n_spins < 1) fail("n_spins must be >= 1");
  if (!finite(omega0) || omega0 <= 0.0) fail("omega0 must be > 0");
  if (!finite(omega_d) || omega_d < 0.0) fail("omega_d must be >= 0");
  if (!finite(theta) || !finite(phi)) fail("theta and phi must be finite");
  if (!finite(tau_c) || tau_c <= 0.0) fail("tau_c must be > 0");
  if (!finite(alpha_c) || alpha_c < 0.0 || alpha_c >= 1.0) fail("alpha_c must lie in [0, 1)");

  if (const auto* thermal = std::get_if<ThermalBath>(&bath)) {
    if (!finite(thermal->omega_sl) || thermal->omega_sl < 0.0) fail("omega_sl must be >= 0");
    if (!finite(thermal->detuning)) fail("detuning must be finite");
    if (!finite(thermal->nbar) || thermal->nbar < 0.0) fail("nbar must be >= 0");
  } else {
    const auto& direct = std::get<DirectRates>(bath);
    if (!finite(direct.p_plus) || direct.p_plus < 0.0) fail("p_plus must be >= 0");
    if (!finite(direct.p_minus) || direct.p_minus < 0.0) fail("p_minus must be >= 0");
  }
}

std::complex<double> spherical_harmonic_y2(int m, double theta, double phi) {
  using std::numbers::pi;
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const auto phase = [phi](int k) { return std::polar(1.0, k * phi); };

  switch (m) {
    case 0:
      return std::sqrt(5.0 / (16.0 * pi)) * (3.0 * c * c - 1.0);
    case 1:
      return -std::sqrt(15.0 / (8.0 * pi)) * s * c * phase(1);
    case -1:
      return std::sqrt(15.0 / (8.0 * pi)) * s * c * phase(-1);
    case 2:
      return std::sqrt(15.0 / (32.0 * pi)) * s * s * phase(2);
    case -2:
      return std::sqrt(15.0 / (32.0 * pi)) * s * s * phase(-2);
    default:
      throw std::invalid_argument("Y_2^m requires m in [-2, 2]");
  }
}

std::complex<double> dipolar_amplitude(int m, const SystemConfig& cfg) {
  return cfg.omega_d * spherical_harmonic_y2(-m, cfg.theta, cfg.phi);
}

double gamma(int m, const SystemConfig& cfg) {
  if (m < 0 || m > 2) throw std::invalid_argument("gamma(m) requires m in {0, 1, 2}");
  const double amp2 = std::norm(dipolar_amplitude(m, cfg));
  const double x = m * cfg.omega0 * cfg.tau_c;
  return amp2 * cfg.tau_c / (1.0 + x * x);
}

TransitionRates transition_rates(const SystemConfig& cfg) {
  if (const auto* direct = std::get_if<DirectRates>(&cfg.bath)) {
    return {direct->p_plus, direct->p_minus};
  }
  const auto& bath = std::get<ThermalBath>(cfg.bath);
  const double x = bath.detuning * cfg.tau_c;
  const double weight = bath.omega_sl * bath.omega_sl * cfg.tau_c / (1.0 + x * x);
  return {weight * bath.nbar, weight * (bath.nbar + 1.0)};
}

std::optional<double> equilibrium_magnetization(const TransitionRates& rates) {
  const double total = rates.p_plus + rates.p_minus;
  if (total <= 0.0) return std::nullopt;
  return (rates.p_plus - rates.p_minus) / total;
}

RateSet rate_set(const SystemConfig& cfg) {
  RateSet out;
  for (int m = 0; m < 3; ++m) out.gamma[m] = gamma(m, cfg);
  const auto p = transition_rates(cfg);
  out.p_plus = p.p_plus;
  out.p_minus = p.p_minus;
  out.mz_eq = equilibrium_magnetization(p);
  return out;
}

std::vector<std::pair<int, int>> pair_list(Geometry geometry, int n_spins) {
  if (n_spins < 2) throw std::invalid_argument("pair_list requires at least two spins");

  std::vector<std::pair<int, int>> pairs;
  switch (geometry) {
    case Geometry::AllToAll:
      pairs.reserve(static_cast<std::size_t>(n_spins * (n_spins - 1) / 2));
      for (int i = 1; i < n_spins; ++i)
        for (int j = 0; j < i; ++j) pairs.emplace_back(i, j);
      break;
    case Geometry::Circular:
      if (n_spins == 2) {
        pairs.emplace_back(1, 0);
        break;
      }
      for (int k = 0; k < n_spins; ++k) {
        const int a = (k + 1) % n_spins;
        pairs.emplace_back(std::max(a, k), std::min(a, k));
      }
      break;
    case Geometry::Linear:
      for (int k = 0; k + 1 < n_spins; ++k) pairs.emplace_back(k + 1, k);
      break;
  }
  return pairs;
}

}  // namespace superrad::model
