#include "superrad/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "superrad/collective.hpp"
#include "superrad/errors.hpp"
#include "superrad/full_engine.hpp"
#include "superrad/parallel.hpp"

namespace superrad::analysis {

namespace {

double total_lattice_rate(const model::SystemConfig& cfg) {
  const auto p = model::transition_rates(cfg);
  return p.p_plus + p.p_minus;
}

PeakReport run_full_peak(const model::SystemConfig& cfg, int samples) {
  full::EvolveOptions opts;
  opts.sample_times = full_sample_times(cfg, samples);
  const auto traj = full::evolve(full::all_up_state(cfg.n_spins), cfg, opts.sample_times.back(), opts);
  return find_peak(traj.times, traj.intensity());
}

struct CollectiveRun {
  double tau_2 = 0.0;
  PeakReport peak;
};

CollectiveRun run_collective_peak(const collective::RateMatrix& r, int samples) {
  CollectiveRun out;
  out.tau_2 = 1.0 / collective::adr(r);
  const collective::SpectralPropagator prop(r, collective::PopulationVector::all_up(r.n_spins));
  const auto times = collective_sample_times(out.tau_2, samples);
  std::vector<double> intensity;
  intensity.reserve(times.size());
  for (double t : times) intensity.push_back(prop.intensity(t));
  out.peak = find_peak(times, intensity);
  return out;
}

}  // namespace

PeakReport find_peak(const std::vector<double>& times, const std::vector<double>& intensity) {
  if (times.size() != intensity.size()) {
    throw std::invalid_argument("times and intensity must have equal length");
  }
  if (times.size() < 3) throw std::invalid_argument("find_peak needs at least three samples");

  const auto it = std::max_element(intensity.begin(), intensity.end());
  const std::size_t k = static_cast<std::size_t>(it - intensity.begin());

  PeakReport report;
  report.i0 = intensity.front();
  report.index = k;
  report.i_max = intensity[k];
  report.t_peak = times[k];

  if (k > 0 && k + 1 < times.size()) {
    // Newton form of the parabola through the bracketing samples.
    const double t0 = times[k - 1], t1 = times[k], t2 = times[k + 1];
    const double y0 = intensity[k - 1], y1 = intensity[k], y2 = intensity[k + 1];
    const double d01 = (y1 - y0) / (t1 - t0);
    const double d12 = (y2 - y1) / (t2 - t1);
    const double a = (d12 - d01) / (t2 - t0);
    if (a < 0.0) {
      const double b = d01 - a * (t0 + t1);
      const double ts = std::clamp(-b / (2.0 * a), t0, t2);
      const double ys = y0 + (ts - t0) * (d01 + a * (ts - t1));
      if (ys >= report.i_max) {
        report.i_max = ys;
        report.t_peak = ts;
      }
    }
  }
  report.burst = report.i_max > report.i0 * (1.0 + 1e-6);
  return report;
}

ScalingFit loglog_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw std::invalid_argument("loglog_fit needs at least two points");
  const double n = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) {
      throw std::invalid_argument("loglog_fit needs strictly positive coordinates");
    }
    sx += std::log10(x);
    sy += std::log10(y);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log10(x) - mx, dy = std::log10(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("loglog_fit needs at least two distinct x values");

  ScalingFit fit;
  fit.points = points;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) {
    throw std::invalid_argument("log_grid needs 0 < lo <= hi and count >= 1");
  }
  if (count == 1) return {lo};
  const double a = std::log10(lo), b = std::log10(hi);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out[k] = std::pow(10.0, a + (b - a) * k / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> log_grid_per_decade(double lo, double hi, int per_decade) {
  if (per_decade < 1) throw std::invalid_argument("per_decade must be >= 1");
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log grid needs 0 < lo <= hi");
  const double decades = std::log10(hi / lo);
  const int count = std::max(2, static_cast<int>(std::ceil(decades * per_decade - 1e-9)) + 1);
  return log_grid(lo, hi, count);
}

std::vector<int> log_int_grid(int lo, int hi, int count) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("log_int_grid needs 1 <= lo <= hi");
  std::vector<int> out;
  for (double v : log_grid(lo, hi, count)) {
    const int r = static_cast<int>(std::lround(v));
    if (out.empty() || out.back() != r) out.push_back(r);
  }
  return out;
}

std::vector<double> log_times_with_zero(double t_lo, double t_hi, int count) {
  std::vector<double> out{0.0};
  const auto grid = log_grid(t_lo, t_hi, count);
  out.insert(out.end(), grid.begin(), grid.end());
  return out;
}

std::vector<double> collective_sample_times(double tau_2, int count) {
  return log_times_with_zero(1e-6 * tau_2, 10.0 * tau_2, count);
}

std::vector<double> full_sample_times(const model::SystemConfig& cfg, int count) {
  double t_ref = std::numeric_limits<double>::infinity();
  const double lattice = total_lattice_rate(cfg);
  if (lattice > 0.0) t_ref = 1.0 / lattice;
  const double g1 = model::gamma(1, cfg);
  if (g1 > 0.0) t_ref = std::min(t_ref, 1.0 / g1);
  if (!std::isfinite(t_ref)) throw NoDecayError();
  return log_times_with_zero(1e-4 * t_ref, 1e3 * t_ref, count);
}

Timescales timescales(const model::SystemConfig& cfg, const TimescaleOptions& options) {
  const auto r = collective::build_rate_matrix(cfg);
  Timescales out;
  out.tau_2 = 1.0 / collective::adr(r);

  const auto times = collective_sample_times(out.tau_2, options.samples);
  const collective::SpectralPropagator prop(r, collective::PopulationVector::all_up(cfg.n_spins));
  std::vector<double> intensity, dc;
  for (double t : times) {
    const double i = prop.intensity(t);
    intensity.push_back(i);
    dc.push_back(0.5 * (i - 0.5 * cfg.n_spins - prop.jz(t)));
  }
  out.peak = find_peak(times, intensity);

  if (options.tau_r == TauRDefinition::IntensityPeak) {
    out.tau_r = out.peak.t_peak;
  } else {
    const double target = 0.9 * *std::max_element(dc.begin(), dc.end());
    for (std::size_t k = 0; k < dc.size(); ++k) {
      if (dc[k] >= target) {
        if (k == 0) {
          out.tau_r = times[0];
        } else {
          const double f = (target - dc[k - 1]) / (dc[k] - dc[k - 1]);
          out.tau_r = times[k - 1] + f * (times[k] - times[k - 1]);
        }
        break;
      }
    }
  }

  const double lattice = total_lattice_rate(cfg);
  if (lattice > 0.0) out.tau_1 = 1.0 / lattice;
  return out;
}

NSweep sweep_n(const model::SystemConfig& cfg_template, const std::vector<int>& n_values,
               const SweepOptions& options) {
  if (n_values.empty()) throw std::invalid_argument("sweep_n needs at least one N");
  for (int n : n_values)
    if (n < 2) throw std::invalid_argument("sweep_n needs N >= 2");
  cfg_template.validate();
  const double g1 = model::gamma(1, cfg_template);
  const double g2 = model::gamma(2, cfg_template);

  NSweep out;
  out.rows = parallel_map(n_values.size(), [&](std::size_t i) {
    const int n = n_values[i];
    const auto run = run_collective_peak(collective::build_rate_matrix(n, g1, g2), options.samples);
    return NRow{n, run.peak.i0, run.peak.i_max, run.peak.t_peak, run.tau_2, run.peak.burst};
  });

  if (out.rows.size() >= 2) {
    std::vector<std::pair<double, double>> ip, tp;
    for (const auto& row : out.rows) {
      ip.emplace_back(row.n_spins, row.i_max);
      tp.emplace_back(row.n_spins, row.tau_2);
    }
    out.intensity_fit = loglog_fit(ip);
    out.lifetime_fit = loglog_fit(tp);
  }
  return out;
}

std::vector<RatioRow> sweep_ratio(const model::SystemConfig& cfg_template,
                                  const std::vector<double>& ratios, const SweepOptions& options) {
  cfg_template.validate();
  const auto* bath = std::get_if<model::ThermalBath>(&cfg_template.bath);
  if (bath == nullptr || !(bath->omega_sl > 0.0)) {
    throw ConfigError("sweep_ratio needs a thermal bath with omega_sl > 0");
  }
  for (double r : ratios)
    if (!(r > 0.0)) throw std::invalid_argument("ratios must be positive");

  return parallel_map(ratios.size(), [&](std::size_t i) {
    model::SystemConfig cfg = cfg_template;
    cfg.omega_d = ratios[i] * bath->omega_sl;
    const auto peak = run_full_peak(cfg, options.samples);
    return RatioRow{ratios[i], cfg.omega_d, peak.i0, peak.i_max, peak.t_peak};
  });
}

std::vector<TaucRow> sweep_tauc(const model::SystemConfig& cfg_template,
                                const std::vector<double>& omega0_tau_c,
                                const SweepOptions& options) {
  cfg_template.validate();
  for (double x : omega0_tau_c)
    if (!(x > 0.0)) throw std::invalid_argument("omega0*tau_c values must be positive");

  return parallel_map(omega0_tau_c.size(), [&](std::size_t i) {
    model::SystemConfig cfg = cfg_template;
    cfg.tau_c = omega0_tau_c[i] / cfg.omega0;
    const auto run = run_collective_peak(collective::build_rate_matrix(cfg), options.samples);
    return TaucRow{omega0_tau_c[i], cfg.tau_c, run.tau_2, run.peak.i0, run.peak.i_max,
                   run.peak.t_peak};
  });
}

std::vector<GeometryRow> sweep_geometry(const model::SystemConfig& cfg_template,
                                        const SweepOptions& options) {
  cfg_template.validate();
  if (cfg_template.n_spins < 4) throw ConfigError("sweep_geometry needs n_spins >= 4");
  const std::vector<model::Geometry> kinds{model::Geometry::AllToAll, model::Geometry::Circular,
                                           model::Geometry::Linear};
  return parallel_map(kinds.size(), [&](std::size_t i) {
    model::SystemConfig cfg = cfg_template;
    cfg.geometry = kinds[i];
    const auto peak = run_full_peak(cfg, options.samples);
    return GeometryRow{kinds[i], model::pair_list(kinds[i], cfg.n_spins).size(), peak.i0,
                       peak.i_max, peak.t_peak};
  });
}

CrossEngineReport cross_engine_check(const model::SystemConfig& cfg, double tolerance) {
  cfg.validate();
  if (cfg.geometry != model::Geometry::AllToAll) {
    throw ConfigError("cross-engine check needs geometry = all_to_all");
  }
  if (total_lattice_rate(cfg) != 0.0) {
    throw ConfigError("cross-engine check needs vanishing spin-lattice rates");
  }
  if (cfg.n_spins > 8) throw ConfigError("cross-engine check is limited to n_spins <= 8");

  CrossEngineReport report;
  report.n_spins = cfg.n_spins;
  report.tolerance = tolerance;

  const auto r = collective::build_rate_matrix(cfg);
  report.tau_2 = 1.0 / collective::adr(r);
  report.times = log_times_with_zero(3e-3 * report.tau_2, 3.0 * report.tau_2, 49);

  full::EvolveOptions opts;
  opts.method = full::EvolveMethod::RungeKutta;
  opts.rel_tol = 1e-10;
  opts.abs_tol = 1e-12;
  opts.sample_times = report.times;
  const auto traj = full::evolve(full::all_up_state(cfg.n_spins), cfg, report.times.back(), opts);
  report.full_intensity = traj.intensity();

  const auto pops = collective::evolve_populations(
      collective::PopulationVector::all_up(cfg.n_spins), r, report.times);
  report.collective_intensity = pops.intensity;

  for (std::size_t k = 0; k < report.times.size(); ++k) {
    const double ref = report.collective_intensity[k];
    const double dev = std::abs(report.full_intensity[k] - ref) / std::max(std::abs(ref), 1e-300);
    report.max_rel_dev = std::max(report.max_rel_dev, dev);
  }
  return report;
}

}  // namespace superrad::analysis
