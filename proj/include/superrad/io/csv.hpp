#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "superrad/analysis.hpp"
#include "superrad/collective.hpp"
#include "superrad/full_engine.hpp"

namespace superrad::io {

/// General notation with 17 significant digits.
std::string format_double(double value);

/// Homogeneous table with a fixed header; rows must match the header width.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& values);

  std::size_t rows() const { return rows_.size(); }
  /// LF-terminated lines, header first.
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// t_us,intensity,jz,dc,j_squared,trace_error,min_eig
CsvTable trajectory_table(const full::Trajectory& traj);
/// t_us,M,P_M (long format, one row per level per sample)
CsvTable populations_table(const collective::PopulationTrajectory& traj);
/// t_us,intensity,jz,dc
CsvTable collective_intensity_table(const collective::PopulationTrajectory& traj);
/// N,i0,i_max,i_max_over_i0,t_peak_us,tau_2_us,burst
CsvTable n_sweep_table(const analysis::NSweep& sweep);
/// ratio,omega_d,i0,i_max,i_max_over_i0,t_peak_us
CsvTable ratio_sweep_table(const std::vector<analysis::RatioRow>& rows);
/// omega0_tau_c,tau_c_us,tau_2_us,i0,i_max,t_peak_us
CsvTable tauc_sweep_table(const std::vector<analysis::TaucRow>& rows);
/// geometry,pairs,i0,i_max,i_max_over_i0,t_peak_us
CsvTable geometry_sweep_table(const std::vector<analysis::GeometryRow>& rows);
/// t_us,full_intensity,collective_intensity,rel_dev
CsvTable cross_engine_table(const analysis::CrossEngineReport& report);

/// Writes bytes verbatim. Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& content);
void write_csv(const CsvTable& table, const std::filesystem::path& path);

}  // namespace superrad::io
