#include "superrad/io/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "superrad/errors.hpp"

namespace superrad::io {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("CSV header must not be empty");
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw std::invalid_argument("CSV row has " + std::to_string(cells.size()) +
                                " cells, header has " + std::to_string(header_.size()));
  }
  rows_.push_back(std::move(cells));
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out.push_back(',');
      out += cells[i];
    }
    out.push_back('\n');
  };
  line(header_);
  for (const auto& row : rows_) line(row);
  return out;
}

CsvTable trajectory_table(const full::Trajectory& traj) {
  CsvTable t({"t_us", "intensity", "jz", "dc", "j_squared", "trace_error", "min_eig"});
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& o = traj.observables[k];
    t.add_row(std::vector<double>{traj.times[k], o.intensity, o.jz, o.dc, o.j_squared,
                                  traj.trace_error[k], traj.min_eigenvalue[k]});
  }
  return t;
}

CsvTable populations_table(const collective::PopulationTrajectory& traj) {
  CsvTable t({"t_us", "M", "P_M"});
  const double j = 0.5 * traj.n_spins;
  for (std::size_t k = 0; k < traj.populations.size(); ++k) {
    const auto& p = traj.populations[k];
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      t.add_row(std::vector<double>{traj.times[k], j - static_cast<double>(i), p(i)});
    }
  }
  return t;
}

CsvTable collective_intensity_table(const collective::PopulationTrajectory& traj) {
  CsvTable t({"t_us", "intensity", "jz", "dc"});
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double dc = 0.5 * (traj.intensity[k] - 0.5 * traj.n_spins - traj.jz[k]);
    t.add_row(std::vector<double>{traj.times[k], traj.intensity[k], traj.jz[k], dc});
  }
  return t;
}

CsvTable n_sweep_table(const analysis::NSweep& sweep) {
  CsvTable t({"N", "i0", "i_max", "i_max_over_i0", "t_peak_us", "tau_2_us", "burst"});
  for (const auto& r : sweep.rows) {
    t.add_row({std::to_string(r.n_spins), format_double(r.i0), format_double(r.i_max),
               format_double(r.i_max / r.i0), format_double(r.t_peak), format_double(r.tau_2),
               r.burst ? "1" : "0"});
  }
  return t;
}

CsvTable ratio_sweep_table(const std::vector<analysis::RatioRow>& rows) {
  CsvTable t({"ratio", "omega_d", "i0", "i_max", "i_max_over_i0", "t_peak_us"});
  for (const auto& r : rows) {
    t.add_row(std::vector<double>{r.ratio, r.omega_d, r.i0, r.i_max, r.relative_peak(), r.t_peak});
  }
  return t;
}

CsvTable tauc_sweep_table(const std::vector<analysis::TaucRow>& rows) {
  CsvTable t({"omega0_tau_c", "tau_c_us", "tau_2_us", "i0", "i_max", "t_peak_us"});
  for (const auto& r : rows) {
    t.add_row(std::vector<double>{r.omega0_tau_c, r.tau_c, r.tau_2, r.i0, r.i_max, r.t_peak});
  }
  return t;
}

CsvTable geometry_sweep_table(const std::vector<analysis::GeometryRow>& rows) {
  CsvTable t({"geometry", "pairs", "i0", "i_max", "i_max_over_i0", "t_peak_us"});
  for (const auto& r : rows) {
    t.add_row({std::string(model::to_string(r.geometry)), std::to_string(r.pairs),
               format_double(r.i0), format_double(r.i_max), format_double(r.i_max / r.i0),
               format_double(r.t_peak)});
  }
  return t;
}

CsvTable cross_engine_table(const analysis::CrossEngineReport& report) {
  CsvTable t({"t_us", "full_intensity", "collective_intensity", "rel_dev"});
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    const double a = report.full_intensity[k];
    const double b = report.collective_intensity[k];
    t.add_row(std::vector<double>{report.times[k], a, b, std::abs(a - b) / std::abs(b)});
  }
  return t;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  write_text(path, table.str());
}

}  // namespace superrad::io
