// superrad command-line driver.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical or I/O failure,
// 3 validation failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "superrad/analysis.hpp"
#include "superrad/collective.hpp"
#include "superrad/errors.hpp"
#include "superrad/full_engine.hpp"
#include "superrad/io/config.hpp"
#include "superrad/io/csv.hpp"
#include "superrad/io/manifest.hpp"
#include "superrad/io/svg.hpp"

namespace fs = std::filesystem;
using namespace superrad;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

struct Common {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  int samples = 400;
};

void add_common(CLI::App* cmd, Common& c, int default_samples) {
  c.samples = default_samples;
  cmd->add_option("--config,-c", c.config, "Configuration file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--set", c.overrides, "Override a config entry, key=value (repeatable)");
  cmd->add_option("--out,-o", c.out, "Output directory (default results/<command>)");
  cmd->add_option("--samples", c.samples, "Number of sample times")->check(CLI::Range(3, 10'000'000));
}

fs::path output_dir(const Common& c, const std::string& command) {
  fs::path dir = c.out.empty() ? fs::path("results") / command : fs::path(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

std::string command_line(const std::string& name, const Common& c) {
  std::string s = name + " --config " + c.config;
  for (const auto& o : c.overrides) s += " --set " + o;
  s += " --samples " + std::to_string(c.samples);
  return s;
}

double parse_time(const std::string& text) { return io::parse_quantity(text, io::Quantity::Time); }

std::vector<double> sample_grid(const std::string& kind, double t_end, int count) {
  if (kind == "log") return analysis::log_times_with_zero(1e-6 * t_end, t_end, count - 1);
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) t[k] = t_end * k / (count - 1);
  return t;
}

void finish(io::RunManifest& m, const fs::path& dir) {
  m.finished = io::utc_timestamp();
  io::write_manifest(m, dir);
  std::cout << "wrote " << dir.string() << "\n";
}

std::string g(double v) { return io::format_double(v); }

std::string short_g(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------------------

struct FullRun {
  Common c;
  std::string t_end;
  std::string grid = "linear";
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::string max_step;
};

int run_full(const FullRun& a) {
  const auto cfg = io::load_config(a.c.config, a.c.overrides);
  const double t_end = a.t_end.empty() ? analysis::full_sample_times(cfg, 2).back()
                                       : parse_time(a.t_end);
  full::EvolveOptions opts;
  opts.rel_tol = a.rel_tol;
  opts.abs_tol = a.abs_tol;
  if (!a.max_step.empty()) opts.max_step = parse_time(a.max_step);
  opts.sample_times = sample_grid(a.grid, t_end, a.c.samples);

  auto manifest = io::make_manifest(cfg, command_line("full-run", a.c) + " --t-end " + g(t_end) +
                                             " --grid " + a.grid);
  const auto traj = full::evolve(full::all_up_state(cfg.n_spins), cfg, t_end, opts);
  const auto peak = analysis::find_peak(traj.times, traj.intensity());

  const fs::path dir = output_dir(a.c, "full-run");
  io::write_csv(io::trajectory_table(traj), dir / "trajectory.csv");
  std::vector<double> dc, jz;
  for (const auto& o : traj.observables) {
    dc.push_back(o.dc);
    jz.push_back(o.jz);
  }
  io::PlotOptions po{"Full engine, N = " + std::to_string(cfg.n_spins), "t (us)", "expectation"};
  po.log_x = a.grid == "log";
  io::write_text(dir / "trajectory.svg",
                 io::line_chart_svg({{"<I>", traj.times, traj.intensity()},
                                     {"<Jz>", traj.times, jz},
                                     {"<Dc>", traj.times, dc}},
                                    po));
  manifest.outputs = {"trajectory.csv", "trajectory.svg"};
  manifest.summary = {{"i0", g(peak.i0)},
                      {"i_max", g(peak.i_max)},
                      {"t_peak_us", g(peak.t_peak)},
                      {"burst", peak.burst ? "true" : "false"},
                      {"steps", std::to_string(traj.steps)},
                      {"positivity_warning", traj.positivity_warning ? "true" : "false"}};
  if (traj.positivity_warning) std::cerr << "warning: minimum eigenvalue dipped below -1e-6\n";
  std::cout << "i_max/i0 = " << short_g(peak.i_max / peak.i0) << " at t = " << short_g(peak.t_peak)
            << " us, burst = " << (peak.burst ? "yes" : "no") << "\n";
  finish(manifest, dir);
  return 0;
}

// ---------------------------------------------------------------------------

struct CollectiveRun {
  Common c;
  std::string t_end;
  std::string grid = "log";
};

int run_collective(const CollectiveRun& a) {
  const auto cfg = io::load_config(a.c.config, a.c.overrides);
  const auto r = collective::build_rate_matrix(cfg);
  const double tau2 = 1.0 / collective::adr(r);
  const double t_end = a.t_end.empty() ? 10.0 * tau2 : parse_time(a.t_end);
  const auto times = sample_grid(a.grid, t_end, a.c.samples);

  auto manifest = io::make_manifest(cfg, command_line("collective-run", a.c) + " --t-end " +
                                             g(t_end) + " --grid " + a.grid);
  const auto traj =
      collective::evolve_populations(collective::PopulationVector::all_up(cfg.n_spins), r, times);
  const auto peak = analysis::find_peak(traj.times, traj.intensity);

  const fs::path dir = output_dir(a.c, "collective-run");
  io::write_csv(io::populations_table(traj), dir / "populations.csv");
  io::write_csv(io::collective_intensity_table(traj), dir / "intensity.csv");
  io::PlotOptions po{"Collective engine, N = " + std::to_string(cfg.n_spins), "t (us)", "<I>"};
  po.log_x = a.grid == "log";
  io::write_text(dir / "intensity.svg", io::line_chart_svg({{"<I>", traj.times, traj.intensity}}, po));
  manifest.outputs = {"populations.csv", "intensity.csv", "intensity.svg"};
  manifest.summary = {{"tau_2_us", g(tau2)},
                      {"i0", g(peak.i0)},
                      {"i_max", g(peak.i_max)},
                      {"t_peak_us", g(peak.t_peak)},
                      {"burst", peak.burst ? "true" : "false"},
                      {"method", traj.method}};
  if (traj.fell_back) std::cerr << "note: spectral propagation failed (" << traj.note << ")\n";
  std::cout << "tau_2 = " << short_g(tau2) << " us, i_max/i0 = " << short_g(peak.i_max / peak.i0)
            << " at t = " << short_g(peak.t_peak) << " us\n";
  finish(manifest, dir);
  return 0;
}

// ---------------------------------------------------------------------------

struct SweepN {
  Common c;
  int n_min = 10;
  int n_max = 1000;
  int points = 12;
};

int run_sweep_n(const SweepN& a) {
  const auto cfg = io::load_config(a.c.config, a.c.overrides);
  if (a.n_min < 2 || a.n_max < a.n_min) throw ConfigError("need 2 <= n-min <= n-max");
  const auto ns = analysis::log_int_grid(a.n_min, a.n_max, a.points);
  auto manifest = io::make_manifest(cfg, command_line("sweep-n", a.c) + " --n-min " +
                                             std::to_string(a.n_min) + " --n-max " +
                                             std::to_string(a.n_max) + " --points " +
                                             std::to_string(a.points));
  const auto sweep = analysis::sweep_n(cfg, ns, {a.c.samples});

  const fs::path dir = output_dir(a.c, "sweep-n");
  io::write_csv(io::n_sweep_table(sweep), dir / "sweep_n.csv");
  std::vector<double> n, imax, tau2;
  for (const auto& row : sweep.rows) {
    n.push_back(row.n_spins);
    imax.push_back(row.i_max);
    tau2.push_back(row.tau_2);
  }
  io::PlotOptions pi{"Peak intensity vs N", "N", "I_max", true, true, true};
  io::write_text(dir / "i_max_vs_n.svg", io::line_chart_svg({{"I_max", n, imax}}, pi));
  io::PlotOptions pt{"tau_2 vs N", "N", "tau_2 (us)", true, true, true};
  io::write_text(dir / "tau2_vs_n.svg", io::line_chart_svg({{"tau_2", n, tau2}}, pt));

  manifest.outputs = {"sweep_n.csv", "i_max_vs_n.svg", "tau2_vs_n.svg"};
  if (sweep.rows.size() >= 2) {
    const auto& fi = sweep.intensity_fit;
    const auto& ft = sweep.lifetime_fit;
    manifest.summary = {{"i_max_slope", g(fi.slope)},     {"i_max_intercept", g(fi.intercept)},
                        {"i_max_r_squared", g(fi.r_squared)}, {"tau_2_slope", g(ft.slope)},
                        {"tau_2_intercept", g(ft.intercept)}, {"tau_2_r_squared", g(ft.r_squared)}};
    std::cout << "fit log10(i_max) = " << short_g(fi.slope) << " log10(N) + "
              << short_g(fi.intercept) << "  (r2 = " << short_g(fi.r_squared) << ")\n";
    std::cout << "fit log10(tau_2) = " << short_g(ft.slope) << " log10(N) + "
              << short_g(ft.intercept) << "  (r2 = " << short_g(ft.r_squared) << ")\n";
  }
  finish(manifest, dir);
  return 0;
}

// ---------------------------------------------------------------------------

struct SweepRatio {
  Common c;
  std::vector<double> ratios{0.1, 0.3, 1, 3, 10, 30, 100};
};

int run_sweep_ratio(const SweepRatio& a) {
  const auto cfg = io::load_config(a.c.config, a.c.overrides);
  std::string cmd = command_line("sweep-ratio", a.c) + " --ratios";
  for (double r : a.ratios) cmd += " " + g(r);
  auto manifest = io::make_manifest(cfg, cmd);
  const auto rows = analysis::sweep_ratio(cfg, a.ratios, {a.c.samples});

  const fs::path dir = output_dir(a.c, "sweep-ratio");
  io::write_csv(io::ratio_sweep_table(rows), dir / "sweep_ratio.csv");
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(r.ratio);
    y.push_back(r.relative_peak());
    std::cout << "ratio " << short_g(r.ratio) << ": i_max/i0 = " << short_g(r.relative_peak()) << "\n";
  }
  io::PlotOptions po{"Peak intensity vs omega_d/omega_SL", "omega_d / omega_SL", "I_max / I(0)"};
  po.log_x = true;
  po.markers = true;
  io::write_text(dir / "sweep_ratio.svg", io::line_chart_svg({{"I_max/I0", x, y}}, po));
  manifest.outputs = {"sweep_ratio.csv", "sweep_ratio.svg"};
  finish(manifest, dir);
  return 0;
}

// ---------------------------------------------------------------------------

struct SweepTauc {
  Common c;
  double x_min = 0.05;
  double x_max = 20.0;
  int points = 15;
  std::vector<double> values;
};

int run_sweep_tauc(const SweepTauc& a) {
  const auto cfg = io::load_config(a.c.config, a.c.overrides);
  const auto xs = a.values.empty() ? analysis::log_grid(a.x_min, a.x_max, a.points) : a.values;
  std::string cmd = command_line("sweep-tauc", a.c) + " --values";
  for (double x : xs) cmd += " " + g(x);
  auto manifest = io::make_manifest(cfg, cmd);
  const auto rows = analysis::sweep_tauc(cfg, xs, {a.c.samples});

  const fs::path dir = output_dir(a.c, "sweep-tauc");
  io::write_csv(io::tauc_sweep_table(rows), dir / "sweep_tauc.csv");
  std::vector<double> x, t2, im;
  for (const auto& r : rows) {
    x.push_back(r.omega0_tau_c);
    t2.push_back(r.tau_2);
    im.push_back(r.i_max);
  }
  const auto best = std::min_element(t2.begin(), t2.end()) - t2.begin();
  io::PlotOptions po{"tau_2 vs omega0 tau_c", "omega0 tau_c", "tau_2 (us)", true, true, true};
  io::write_text(dir / "sweep_tauc.svg", io::line_chart_svg({{"tau_2", x, t2}}, po));
  manifest.outputs = {"sweep_tauc.csv", "sweep_tauc.svg"};
  manifest.summary = {{"argmin_omega0_tau_c", g(x[best])}, {"min_tau_2_us", g(t2[best])}};
  std::cout << "tau_2 minimum at omega0*tau_c = " << short_g(x[best]) << " (tau_2 = "
            << short_g(t2[best]) << " us)\n";
  finish(manifest, dir);
  return 0;
}

// ---------------------------------------------------------------------------

int run_sweep_geometry(const Common& c) {
  const auto cfg = io::load_config(c.config, c.overrides);
  auto manifest = io::make_manifest(cfg, command_line("sweep-geometry", c));
  const auto rows = analysis::sweep_geometry(cfg, {c.samples});
  const fs::path dir = output_dir(c, "sweep-geometry");
  io::write_csv(io::geometry_sweep_table(rows), dir / "sweep_geometry.csv");
  for (const auto& r : rows) {
    std::cout << model::to_string(r.geometry) << " (" << r.pairs
              << " pairs): i_max/i0 = " << short_g(r.i_max / r.i0) << "\n";
  }
  manifest.outputs = {"sweep_geometry.csv"};
  finish(manifest, dir);
  return 0;
}

// ---------------------------------------------------------------------------

struct Adr {
  std::string config;
  std::vector<std::string> overrides;
  std::string engine = "collective";
};

int run_adr(const Adr& a) {
  const auto cfg = io::load_config(a.config, a.overrides);
  const double rate = a.engine == "full" ? full::adr_full(cfg)
                                         : collective::adr(collective::build_rate_matrix(cfg));
  std::cout << "N = " << cfg.n_spins << "  engine = " << a.engine << "  adr = " << g(rate)
            << " /us  tau_2 = " << g(1.0 / rate) << " us\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct Validate {
  Common c;
  double tolerance = 1e-6;
};

int run_validate(const Validate& a) {
  const auto cfg = io::load_config(a.c.config, a.c.overrides);
  auto manifest = io::make_manifest(cfg, command_line("validate", a.c));
  const auto report = analysis::cross_engine_check(cfg, a.tolerance);
  const fs::path dir = output_dir(a.c, "validate");
  io::write_csv(io::cross_engine_table(report), dir / "cross_engine.csv");
  manifest.outputs = {"cross_engine.csv"};
  manifest.summary = {{"max_rel_dev", g(report.max_rel_dev)},
                      {"tolerance", g(report.tolerance)},
                      {"passed", report.passed() ? "true" : "false"}};
  finish(manifest, dir);
  std::cout << (report.passed() ? "PASS" : "FAIL") << " max_rel_dev = " << short_g(report.max_rel_dev)
            << (report.passed() ? " < " : " >= ") << short_g(report.tolerance) << " (N = "
            << report.n_spins << ", " << report.times.size() << " samples)\n";
  return report.passed() ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective dipolar relaxation simulator"};
  app.set_version_flag("--version", std::string(SUPERRAD_VERSION));
  app.require_subcommand(1);

  FullRun full_args;
  auto* full_cmd = app.add_subcommand("full-run", "Full Hilbert-space Lindblad integration");
  add_common(full_cmd, full_args.c, 401);
  full_cmd->add_option("--t-end", full_args.t_end, "End time, e.g. 5e5 or 20ms (default: auto)");
  full_cmd->add_option("--grid", full_args.grid, "Sample spacing")
      ->check(CLI::IsMember({"linear", "log"}));
  full_cmd->add_option("--rel-tol", full_args.rel_tol, "Relative tolerance");
  full_cmd->add_option("--abs-tol", full_args.abs_tol, "Absolute tolerance");
  full_cmd->add_option("--max-step", full_args.max_step, "Step size cap (default: none)");

  CollectiveRun coll_args;
  auto* coll_cmd = app.add_subcommand("collective-run", "Dicke-sector rate equations");
  add_common(coll_cmd, coll_args.c, 601);
  coll_cmd->add_option("--t-end", coll_args.t_end, "End time (default 10 tau_2)");
  coll_cmd->add_option("--grid", coll_args.grid, "Sample spacing")
      ->check(CLI::IsMember({"linear", "log"}));

  SweepN sn;
  auto* sn_cmd = app.add_subcommand("sweep-n", "Peak intensity and tau_2 scaling with N");
  add_common(sn_cmd, sn.c, 600);
  sn_cmd->add_option("--n-min", sn.n_min, "Smallest N");
  sn_cmd->add_option("--n-max", sn.n_max, "Largest N");
  sn_cmd->add_option("--points", sn.points, "Log-spaced N values")->check(CLI::PositiveNumber);

  SweepRatio sr;
  auto* sr_cmd = app.add_subcommand("sweep-ratio", "Peak intensity vs omega_d/omega_SL");
  add_common(sr_cmd, sr.c, 600);
  sr_cmd->add_option("--ratios", sr.ratios, "omega_d/omega_SL values");

  SweepTauc st;
  auto* st_cmd = app.add_subcommand("sweep-tauc", "tau_2 and peak intensity vs omega0*tau_c");
  add_common(st_cmd, st.c, 600);
  st_cmd->add_option("--min", st.x_min, "Smallest omega0*tau_c");
  st_cmd->add_option("--max", st.x_max, "Largest omega0*tau_c");
  st_cmd->add_option("--points", st.points, "Log-spaced grid size")->check(CLI::PositiveNumber);
  st_cmd->add_option("--values", st.values, "Explicit omega0*tau_c values");

  Common sg;
  auto* sg_cmd = app.add_subcommand("sweep-geometry", "Peak intensity for each coupling geometry");
  add_common(sg_cmd, sg, 600);

  Adr adr_args;
  auto* adr_cmd = app.add_subcommand("adr", "Asymptotic decay rate and tau_2");
  adr_cmd->add_option("--config,-c", adr_args.config, "Configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  adr_cmd->add_option("--set", adr_args.overrides, "Override a config entry, key=value");
  adr_cmd->add_option("--engine", adr_args.engine, "Rate matrix or full Liouvillian (N <= 4)")
      ->check(CLI::IsMember({"collective", "full"}));

  Validate val;
  auto* val_cmd = app.add_subcommand("validate", "Cross-engine intensity comparison");
  add_common(val_cmd, val.c, 50);
  val_cmd->add_option("--tolerance", val.tolerance, "Maximum relative deviation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*full_cmd) return run_full(full_args);
    if (*coll_cmd) return run_collective(coll_args);
    if (*sn_cmd) return run_sweep_n(sn);
    if (*sr_cmd) return run_sweep_ratio(sr);
    if (*st_cmd) return run_sweep_tauc(st);
    if (*sg_cmd) return run_sweep_geometry(sg);
    if (*adr_cmd) return run_adr(adr_args);
    if (*val_cmd) return run_validate(val);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << " (last good t = " << e.last_good_time()
              << " us)\n";
    return kExitNumerical;
  } catch (const NoDecayError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
