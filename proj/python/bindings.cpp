#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "superrad/analysis.hpp"
#include "superrad/collective.hpp"
#include "superrad/errors.hpp"
#include "superrad/full_engine.hpp"
#include "superrad/io/config.hpp"
#include "superrad/model.hpp"

namespace py = pybind11;
using namespace superrad;

namespace {

full::EvolveMethod parse_full_method(const std::string& name) {
  if (name == "auto") return full::EvolveMethod::Auto;
  if (name == "spectral") return full::EvolveMethod::Spectral;
  if (name == "runge_kutta") return full::EvolveMethod::RungeKutta;
  throw std::invalid_argument("method must be 'auto', 'spectral' or 'runge_kutta'");
}

collective::Method parse_collective_method(const std::string& name) {
  if (name == "auto") return collective::Method::Auto;
  if (name == "spectral") return collective::Method::Spectral;
  if (name == "runge_kutta") return collective::Method::RungeKutta;
  throw std::invalid_argument("method must be 'auto', 'spectral' or 'runge_kutta'");
}

py::dict trajectory_dict(const full::Trajectory& t) {
  std::vector<double> intensity, jz, dc, j2;
  for (const auto& o : t.observables) {
    intensity.push_back(o.intensity);
    jz.push_back(o.jz);
    dc.push_back(o.dc);
    j2.push_back(o.j_squared);
  }
  py::dict d;
  d["times"] = t.times;
  d["intensity"] = intensity;
  d["jz"] = jz;
  d["dc"] = dc;
  d["j_squared"] = j2;
  d["trace_error"] = t.trace_error;
  d["hermiticity_error"] = t.hermiticity_error;
  d["min_eigenvalue"] = t.min_eigenvalue;
  d["method"] = t.method;
  d["fell_back"] = t.fell_back;
  d["positivity_warning"] = t.positivity_warning;
  return d;
}

py::dict peak_dict(const analysis::PeakReport& p) {
  py::dict d;
  d["i_max"] = p.i_max;
  d["t_peak"] = p.t_peak;
  d["i0"] = p.i0;
  d["burst"] = p.burst;
  return d;
}

py::dict fit_dict(const analysis::ScalingFit& f) {
  py::dict d;
  d["slope"] = f.slope;
  d["intercept"] = f.intercept;
  d["r_squared"] = f.r_squared;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dipolar superradiance engines";
  m.attr("__version__") = SUPERRAD_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);
  py::register_exception<NoDecayError>(m, "NoDecayError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::enum_<model::Geometry>(m, "Geometry")
      .value("ALL_TO_ALL", model::Geometry::AllToAll)
      .value("CIRCULAR", model::Geometry::Circular)
      .value("LINEAR", model::Geometry::Linear);

  py::class_<model::SystemConfig>(m, "SystemConfig")
      .def(py::init<>())
      .def_readwrite("n_spins", &model::SystemConfig::n_spins)
      .def_readwrite("omega0", &model::SystemConfig::omega0)
      .def_readwrite("omega_d", &model::SystemConfig::omega_d)
      .def_readwrite("theta", &model::SystemConfig::theta)
      .def_readwrite("phi", &model::SystemConfig::phi)
      .def_readwrite("tau_c", &model::SystemConfig::tau_c)
      .def_readwrite("geometry", &model::SystemConfig::geometry)
      .def_readwrite("alpha_c", &model::SystemConfig::alpha_c)
      .def("set_direct_rates",
           [](model::SystemConfig& c, double p_plus, double p_minus) {
             c.bath = model::DirectRates{p_plus, p_minus};
           },
           py::arg("p_plus"), py::arg("p_minus"))
      .def("set_thermal_bath",
           [](model::SystemConfig& c, double omega_sl, double detuning, double nbar) {
             c.bath = model::ThermalBath{omega_sl, detuning, nbar};
           },
           py::arg("omega_sl"), py::arg("detuning") = 0.0, py::arg("nbar") = 0.0)
      .def("validate", &model::SystemConfig::validate)
      .def("copy", [](const model::SystemConfig& c) { return c; })
      .def("__repr__", [](const model::SystemConfig& c) { return io::canonical_form(c); });

  m.def("parse_config", &io::parse_config, py::arg("text"),
        py::arg("overrides") = std::vector<std::string>{}, py::arg("source") = "<config>");
  m.def("load_config", &io::load_config, py::arg("path"),
        py::arg("overrides") = std::vector<std::string>{});
  m.def("canonical_form", &io::canonical_form);
  m.def("config_hash", &io::config_hash);

  m.def("gamma", &model::gamma, py::arg("m"), py::arg("config"));
  m.def("dipolar_amplitude", &model::dipolar_amplitude, py::arg("m"), py::arg("config"));
  m.def("transition_rates", [](const model::SystemConfig& c) {
    const auto r = model::transition_rates(c);
    return py::make_tuple(r.p_plus, r.p_minus);
  });

  m.def("rate_matrix",
        [](int n, double g1, double g2) { return collective::build_rate_matrix(n, g1, g2).entries; },
        py::arg("n_spins"), py::arg("gamma1"), py::arg("gamma2"));
  m.def(
      "adr",
      [](int n, double g1, double g2) { return collective::adr(collective::build_rate_matrix(n, g1, g2)); },
      py::arg("n_spins"), py::arg("gamma1"), py::arg("gamma2"));
  m.def("collective_adr",
        [](const model::SystemConfig& c) { return collective::adr(collective::build_rate_matrix(c)); });
  m.def(
      "evolve_populations",
      [](const model::SystemConfig& c, const std::vector<double>& times, const std::string& method) {
        collective::PopulationOptions opts;
        opts.method = parse_collective_method(method);
        const auto t = collective::evolve_populations(collective::PopulationVector::all_up(c.n_spins),
                                                      collective::build_rate_matrix(c), times, opts);
        py::dict d;
        d["times"] = t.times;
        d["intensity"] = t.intensity;
        d["jz"] = t.jz;
        d["populations"] = t.populations;
        d["method"] = t.method;
        d["fell_back"] = t.fell_back;
        return d;
      },
      py::arg("config"), py::arg("times"), py::arg("method") = "auto",
      "Collective-engine evolution from the all-up Dicke state.");

  m.def(
      "evolve",
      [](const model::SystemConfig& c, double t_end, std::vector<double> sample_times,
         const std::string& method, double rel_tol, double abs_tol) {
        full::EvolveOptions opts;
        opts.method = parse_full_method(method);
        opts.sample_times = std::move(sample_times);
        opts.rel_tol = rel_tol;
        opts.abs_tol = abs_tol;
        full::Trajectory t;
        {
          py::gil_scoped_release release;
          t = full::evolve(full::all_up_state(c.n_spins), c, t_end, opts);
        }
        return trajectory_dict(t);
      },
      py::arg("config"), py::arg("t_end"), py::arg("sample_times") = std::vector<double>{},
      py::arg("method") = "auto", py::arg("rel_tol") = 1e-8, py::arg("abs_tol") = 1e-10,
      "Full-engine evolution from the all-up product state.");
  m.def("rhs", &full::rhs, py::arg("rho"), py::arg("config"));
  m.def("liouvillian_matrix", &full::liouvillian_matrix, py::arg("config"));
  m.def("adr_full", &full::adr_full, py::arg("config"));

  m.def("timescales", [](const model::SystemConfig& c) {
    const auto t = analysis::timescales(c);
    py::dict d;
    d["tau_r"] = t.tau_r;
    d["tau_2"] = t.tau_2;
    d["tau_1"] = t.tau_1 ? py::cast(*t.tau_1) : py::none();
    d["peak"] = peak_dict(t.peak);
    return d;
  });
  m.def("find_peak", [](const std::vector<double>& t, const std::vector<double>& i) {
    return peak_dict(analysis::find_peak(t, i));
  });
  m.def("loglog_fit", [](const std::vector<std::pair<double, double>>& pts) {
    return fit_dict(analysis::loglog_fit(pts));
  });
  m.def("log_int_grid", &analysis::log_int_grid);
  m.def("log_grid", &analysis::log_grid);

  m.def(
      "sweep_n",
      [](const model::SystemConfig& c, const std::vector<int>& ns) {
        const auto s = analysis::sweep_n(c, ns);
        py::list rows;
        for (const auto& r : s.rows) {
          py::dict d;
          d["n_spins"] = r.n_spins;
          d["i0"] = r.i0;
          d["i_max"] = r.i_max;
          d["t_peak"] = r.t_peak;
          d["tau_2"] = r.tau_2;
          d["burst"] = r.burst;
          rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["intensity_fit"] = fit_dict(s.intensity_fit);
        out["lifetime_fit"] = fit_dict(s.lifetime_fit);
        return out;
      },
      py::arg("config"), py::arg("n_values"));
  m.def(
      "sweep_ratio",
      [](const model::SystemConfig& c, const std::vector<double>& ratios) {
        py::list rows;
        for (const auto& r : analysis::sweep_ratio(c, ratios)) {
          py::dict d;
          d["ratio"] = r.ratio;
          d["omega_d"] = r.omega_d;
          d["i0"] = r.i0;
          d["i_max"] = r.i_max;
          d["t_peak"] = r.t_peak;
          rows.append(d);
        }
        return rows;
      },
      py::arg("config"), py::arg("ratios"));
  m.def(
      "sweep_tauc",
      [](const model::SystemConfig& c, const std::vector<double>& xs) {
        py::list rows;
        for (const auto& r : analysis::sweep_tauc(c, xs)) {
          py::dict d;
          d["omega0_tau_c"] = r.omega0_tau_c;
          d["tau_c"] = r.tau_c;
          d["tau_2"] = r.tau_2;
          d["i0"] = r.i0;
          d["i_max"] = r.i_max;
          d["t_peak"] = r.t_peak;
          rows.append(d);
        }
        return rows;
      },
      py::arg("config"), py::arg("omega0_tau_c"));
  m.def("sweep_geometry", [](const model::SystemConfig& c) {
    py::list rows;
    for (const auto& r : analysis::sweep_geometry(c)) {
      py::dict d;
      d["geometry"] = r.geometry;
      d["pairs"] = r.pairs;
      d["i0"] = r.i0;
      d["i_max"] = r.i_max;
      d["t_peak"] = r.t_peak;
      rows.append(d);
    }
    return rows;
  });
  m.def(
      "cross_engine_check",
      [](const model::SystemConfig& c, double tolerance) {
        const auto r = analysis::cross_engine_check(c, tolerance);
        py::dict d;
        d["n_spins"] = r.n_spins;
        d["tau_2"] = r.tau_2;
        d["times"] = r.times;
        d["full_intensity"] = r.full_intensity;
        d["collective_intensity"] = r.collective_intensity;
        d["max_rel_dev"] = r.max_rel_dev;
        d["passed"] = r.passed();
        return d;
      },
      py::arg("config"), py::arg("tolerance") = 1e-6);
}
