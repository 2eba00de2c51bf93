#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "superrad/model.hpp"

namespace superrad::analysis {

struct PeakReport {
  double i_max = 0.0;
  double t_peak = 0.0;  // µs
  double i0 = 0.0;
  bool burst = false;   // i_max > i0 (1 + 1e−6)
  std::size_t index = 0;
};

/// Discrete maximum refined by a quadratic through the three bracketing samples
/// (nonuniform spacing allowed). Needs at least three samples.
PeakReport find_peak(const std::vector<double>& times, const std::vector<double>& intensity);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;  // log10 units
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;
};

/// Least squares on (log10 x, log10 y). Throws std::invalid_argument for fewer
/// than two points or a nonpositive coordinate.
ScalingFit loglog_fit(const std::vector<std::pair<double, double>>& points);

/// `count` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int count);
/// Log spacing with `per_decade` points per decade, endpoints included.
std::vector<double> log_grid_per_decade(double lo, double hi, int per_decade = 12);
/// Rounded log grid with duplicates removed.
std::vector<int> log_int_grid(int lo, int hi, int count);
/// t = 0 followed by `count` log-spaced times in [t_lo, t_hi].
std::vector<double> log_times_with_zero(double t_lo, double t_hi, int count);

enum class TauRDefinition {
  IntensityPeak,      // time of the intensity maximum
  CorrelationRise90,  // first time D_c reaches 90% of its maximum
};

struct TimescaleOptions {
  TauRDefinition tau_r = TauRDefinition::IntensityPeak;
  int samples = 600;
};

struct Timescales {
  double tau_r = 0.0;
  double tau_2 = 0.0;
  std::optional<double> tau_1;  // absent when p_+ = p_− = 0
  PeakReport peak;
};

/// τ_R and τ₂ from the collective engine; τ₁ = 1/(p_+ + p_−).
Timescales timescales(const model::SystemConfig& cfg, const TimescaleOptions& options = {});

/// Collective-engine sample grid: 0 then log-spaced over [1e−6, 10]·τ₂.
std::vector<double> collective_sample_times(double tau_2, int count);

/// Full-engine sample grid covering the early burst and the slow tail:
/// 0 then log-spaced over [1e−4, 1e3]·t_ref, t_ref = min(1/(p_+ + p_−), 1/Γ(1)).
std::vector<double> full_sample_times(const model::SystemConfig& cfg, int count);

struct NRow {
  int n_spins = 0;
  double i0 = 0.0;
  double i_max = 0.0;
  double t_peak = 0.0;
  double tau_2 = 0.0;
  bool burst = false;
};

struct NSweep {
  std::vector<NRow> rows;
  ScalingFit intensity_fit;  // I_max vs N
  ScalingFit lifetime_fit;   // τ₂ vs N
};

struct SweepOptions {
  int samples = 600;
};

/// Collective runs at the template's Γ(1), Γ(2); only N changes.
NSweep sweep_n(const model::SystemConfig& cfg_template, const std::vector<int>& n_values,
               const SweepOptions& options = {});

struct RatioRow {
  double ratio = 0.0;  // ω_d / ω_SL
  double omega_d = 0.0;
  double i0 = 0.0;
  double i_max = 0.0;
  double t_peak = 0.0;
  double relative_peak() const { return i_max / i0; }
};

/// Full-engine runs with ω_d = ratio·ω_SL. The template must carry a thermal
/// bath with ω_SL > 0.
std::vector<RatioRow> sweep_ratio(const model::SystemConfig& cfg_template,
                                  const std::vector<double>& ratios,
                                  const SweepOptions& options = {});

struct TaucRow {
  double omega0_tau_c = 0.0;
  double tau_c = 0.0;
  double tau_2 = 0.0;
  double i0 = 0.0;
  double i_max = 0.0;
  double t_peak = 0.0;
};

/// Collective runs over τ_c = x/ω0 for each x in omega0_tau_c.
std::vector<TaucRow> sweep_tauc(const model::SystemConfig& cfg_template,
                                const std::vector<double>& omega0_tau_c,
                                const SweepOptions& options = {});

struct GeometryRow {
  model::Geometry geometry = model::Geometry::AllToAll;
  std::size_t pairs = 0;
  double i0 = 0.0;
  double i_max = 0.0;
  double t_peak = 0.0;
};

/// Full-engine runs for all-to-all, circular and linear coupling (N ≥ 4).
std::vector<GeometryRow> sweep_geometry(const model::SystemConfig& cfg_template,
                                        const SweepOptions& options = {});

struct CrossEngineReport {
  int n_spins = 0;
  double tau_2 = 0.0;
  std::vector<double> times;
  std::vector<double> full_intensity;
  std::vector<double> collective_intensity;
  double max_rel_dev = 0.0;
  double tolerance = 1e-6;
  bool passed() const { return max_rel_dev < tolerance; }
};

/// Compares ⟨I(t)⟩ of both engines from the all-up state at t = 0 and 49
/// log-spaced times in [3e−3, 3]·τ₂. The configuration must be all-to-all
/// with p_± = 0 (ConfigError otherwise).
CrossEngineReport cross_engine_check(const model::SystemConfig& cfg, double tolerance = 1e-6);

}  // namespace superrad::analysis
