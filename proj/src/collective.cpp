#include "superrad/collective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "superrad/errors.hpp"

namespace superrad::collective {

namespace {

void require_level(double j, double m) {
  if (std::abs(m) > j + 1e-12) {
    throw std::invalid_argument("|M| must not exceed J (J = " + std::to_string(j) +
                                ", M = " + std::to_string(m) + ")");
  }
}

void require_spins(int n_spins) {
  if (n_spins < 1) throw std::invalid_argument("n_spins must be >= 1");
}

Eigen::VectorXd intensity_weights(int n) {
  const double j = 0.5 * n;
  Eigen::VectorXd w(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double m = j - k;
    w(k) = (j + m) * (j - m + 1.0);
  }
  return w;
}

Eigen::VectorXd magnetization_weights(int n) {
  Eigen::VectorXd w(n + 1);
  for (int k = 0; k <= n; ++k) w(k) = 0.5 * n - k;
  return w;
}

void check_sample_times(const std::vector<double>& times) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k]) || times[k] < 0.0) {
      throw std::invalid_argument("sample times must be finite and nonnegative");
    }
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw std::invalid_argument("sample times must be strictly increasing");
    }
  }
}

Eigen::VectorXd renormalized(Eigen::VectorXd p) {
  const double total = p.sum();
  if (total > 0.0) p /= total;
  return p;
}

void record(PopulationTrajectory& traj, double t, const Eigen::VectorXd& p,
            const Eigen::VectorXd& wi, const Eigen::VectorXd& wm, bool store) {
  traj.times.push_back(t);
  traj.intensity.push_back(wi.dot(p));
  traj.jz.push_back(wm.dot(p));
  if (store) traj.populations.push_back(p);
}

PopulationTrajectory evolve_spectral(const PopulationVector& p0, const RateMatrix& r,
                                     const std::vector<double>& times, bool store) {
  const SpectralPropagator prop(r, p0);
  PopulationTrajectory traj;
  traj.n_spins = r.n_spins;
  traj.method = "spectral";
  for (double t : times) {
    if (store) {
      const Eigen::VectorXd p = prop.populations(t);
      traj.populations.push_back(p);
    }
    traj.times.push_back(t);
    traj.intensity.push_back(prop.intensity(t));
    traj.jz.push_back(prop.jz(t));
  }
  return traj;
}

PopulationTrajectory evolve_runge_kutta(const PopulationVector& p0, const RateMatrix& r,
                                        const std::vector<double>& times,
                                        const PopulationOptions& options) {
  namespace ode = boost::numeric::odeint;
  using State = std::vector<double>;

  const int n = r.n_spins;
  const Eigen::Index dim = r.dim();
  const Eigen::VectorXd wi = intensity_weights(n);
  const Eigen::VectorXd wm = magnetization_weights(n);

  PopulationTrajectory traj;
  traj.n_spins = n;
  traj.method = "runge_kutta";

  State x(p0.values.data(), p0.values.data() + dim);
  std::size_t next = 0;
  while (next < times.size() && times[next] <= 0.0) {
    record(traj, times[next], p0.values, wi, wm, options.store_populations);
    ++next;
  }
  if (next == times.size()) return traj;

  auto system = [&](const State& in, State& out, double) {
    Eigen::Map<Eigen::VectorXd>(out.data(), dim) =
        r.entries * Eigen::Map<const Eigen::VectorXd>(in.data(), dim);
  };

  const double scale = r.entries.cwiseAbs().maxCoeff();
  const double dt0 = scale > 0.0 ? std::min(1e-3 / scale, times.back()) : times.back();
  auto stepper = ode::make_dense_output(options.abs_tol, options.rel_tol,
                                        ode::runge_kutta_dopri5<State>());
  stepper.initialize(x, 0.0, dt0);

  State sample(x.size());
  double last_good = 0.0;
  while (next < times.size()) {
    std::pair<double, double> span;
    try {
      span = stepper.do_step(system);
    } catch (const ode::odeint_error& e) {
      throw NumericalFailure(std::string("population integration failed: ") + e.what(),
                             last_good);
    }
    if (!(span.second - span.first > 1e-14 * std::max(1.0, span.second))) {
      throw NumericalFailure("step size underflow in population integration", last_good);
    }
    while (next < times.size() && times[next] <= span.second) {
      stepper.calc_state(times[next], sample);
      const Eigen::VectorXd p =
          renormalized(Eigen::Map<const Eigen::VectorXd>(sample.data(), dim));
      if (!p.allFinite()) throw NumericalFailure("populations became non-finite", last_good);
      record(traj, times[next], p, wi, wm, options.store_populations);
      ++next;
    }
    last_good = span.second;
  }
  return traj;
}

}  // namespace

void PopulationVector::validate() const {
  require_spins(n_spins);
  if (values.size() != n_spins + 1) {
    throw std::invalid_argument("population vector must have N+1 entries");
  }
  if (!values.allFinite()) throw std::invalid_argument("populations must be finite");
  if (std::abs(values.sum() - 1.0) > 1e-10) {
    throw std::invalid_argument("populations must sum to 1");
  }
  if (values.minCoeff() < -1e-12) throw std::invalid_argument("populations must be nonnegative");
}

PopulationVector PopulationVector::all_up(int n_spins) {
  require_spins(n_spins);
  PopulationVector p{n_spins, Eigen::VectorXd::Zero(n_spins + 1)};
  p.values(0) = 1.0;
  return p;
}

PopulationVector PopulationVector::uniform(int n_spins) {
  require_spins(n_spins);
  return {n_spins, Eigen::VectorXd::Constant(n_spins + 1, 1.0 / (n_spins + 1))};
}

double rate_alpha(double j, double m, double gamma1) {
  require_level(j, m);
  const double shift = m - 0.5;
  return 2.0 * gamma1 * (j + m) * (j - m + 1.0) * shift * shift;
}

double rate_beta(double j, double m, double gamma1) { return rate_alpha(j, -m, gamma1); }

double rate_gamma(double j, double m, double gamma2) {
  require_level(j, m);
  return 0.5 * gamma2 * (j + m) * (j - m + 1.0) * (j + m - 1.0) * (j - m + 2.0);
}

double rate_delta(double j, double m, double gamma2) { return rate_gamma(j, -m, gamma2); }

RateMatrix build_rate_matrix(int n_spins, double gamma1, double gamma2) {
  require_spins(n_spins);
  if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0)) {
    throw std::invalid_argument("dipolar rates must be nonnegative");
  }
  const double j = 0.5 * n_spins;
  const int dim = n_spins + 1;
  RateMatrix r{n_spins, Eigen::MatrixXd::Zero(dim, dim)};

  // Row k (M = J − k) receives from neighbours k + shift; shift = +1 is M − 1.
  auto couple = [&](int k, int shift, double rate) {
    const int src = k + shift;
    if (src < 0 || src >= dim) {
      if (rate != 0.0) {
        throw std::logic_error("nonzero rate leaves the Dicke ladder at M = " +
                               std::to_string(j - k));
      }
      return;
    }
    r.entries(k, k) -= rate;
    r.entries(k, src) += rate;
  };

  for (int k = 0; k < dim; ++k) {
    const double m = j - k;
    couple(k, +1, rate_alpha(j, m, gamma1));
    couple(k, -1, rate_beta(j, m, gamma1));
    couple(k, +2, rate_gamma(j, m, gamma2));
    couple(k, -2, rate_delta(j, m, gamma2));
  }
  return r;
}

RateMatrix build_rate_matrix(const model::SystemConfig& cfg) {
  cfg.validate();
  return build_rate_matrix(cfg.n_spins, model::gamma(1, cfg), model::gamma(2, cfg));
}

double intensity_from_populations(const Eigen::VectorXd& p, int n_spins) {
  require_spins(n_spins);
  if (p.size() != n_spins + 1) throw std::invalid_argument("population vector must have N+1 entries");
  return intensity_weights(n_spins).dot(p);
}

double intensity_from_populations(const PopulationVector& p) {
  return intensity_from_populations(p.values, p.n_spins);
}

double jz_from_populations(const Eigen::VectorXd& p, int n_spins) {
  require_spins(n_spins);
  if (p.size() != n_spins + 1) throw std::invalid_argument("population vector must have N+1 entries");
  return magnetization_weights(n_spins).dot(p);
}

double adr(const RateMatrix& r) {
  if (r.entries.size() == 0) throw NoDecayError();
  const double scale = r.entries.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw NoDecayError();
  const double eps = 1e-12 * scale;

  Eigen::VectorXd re;
  if ((r.entries - r.entries.transpose()).cwiseAbs().maxCoeff() <= 1e-13 * scale) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(r.entries, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalFailure("rate matrix eigensolver failed", 0.0);
    re = solver.eigenvalues();
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(r.entries, false);
    if (solver.info() != Eigen::Success) throw NumericalFailure("rate matrix eigensolver failed", 0.0);
    re = solver.eigenvalues().real();
  }

  double best = -1.0;
  for (Eigen::Index k = 0; k < re.size(); ++k) {
    if (re(k) < -eps && (best < 0.0 || -re(k) < best)) best = -re(k);
  }
  if (best < 0.0) throw NoDecayError();
  return best;
}

SpectralPropagator::SpectralPropagator(const RateMatrix& r, const PopulationVector& p0)
    : n_spins_(r.n_spins) {
  p0.validate();
  if (p0.n_spins != r.n_spins) throw std::invalid_argument("population and rate matrix sizes differ");
  const double scale = r.entries.size() ? r.entries.cwiseAbs().maxCoeff() : 0.0;
  if ((r.entries - r.entries.transpose()).cwiseAbs().maxCoeff() > 1e-13 * std::max(scale, 1e-300)) {
    throw NumericalFailure("spectral propagation needs a symmetric rate matrix", 0.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(r.entries);
  if (solver.info() != Eigen::Success) throw NumericalFailure("rate matrix eigensolver failed", 0.0);
  lambda_ = solver.eigenvalues();
  basis_ = solver.eigenvectors();
  // Clamp roundoff so no mode grows.
  for (Eigen::Index k = 0; k < lambda_.size(); ++k) lambda_(k) = std::min(lambda_(k), 0.0);
  coeff_ = basis_.transpose() * p0.values;
  ones_eig_ = basis_.transpose() * Eigen::VectorXd::Ones(r.dim());
  intens_eig_ = basis_.transpose() * intensity_weights(n_spins_);
  jz_eig_ = basis_.transpose() * magnetization_weights(n_spins_);
}

double SpectralPropagator::project(const Eigen::VectorXd& weights_eig, double t) const {
  double value = 0.0;
  double total = 0.0;
  for (Eigen::Index k = 0; k < lambda_.size(); ++k) {
    const double c = coeff_(k) * std::exp(lambda_(k) * t);
    value += weights_eig(k) * c;
    total += ones_eig_(k) * c;
  }
  return value / total;
}

Eigen::VectorXd SpectralPropagator::populations(double t) const {
  const Eigen::VectorXd decayed = coeff_.cwiseProduct((lambda_ * t).array().exp().matrix());
  return renormalized(basis_ * decayed);
}

double SpectralPropagator::intensity(double t) const { return project(intens_eig_, t); }

double SpectralPropagator::jz(double t) const { return project(jz_eig_, t); }

PopulationTrajectory evolve_populations(const PopulationVector& p0, const RateMatrix& r,
                                        const std::vector<double>& sample_times,
                                        const PopulationOptions& options) {
  p0.validate();
  if (p0.n_spins != r.n_spins || r.dim() != r.n_spins + 1) {
    throw std::invalid_argument("population and rate matrix sizes differ");
  }
  check_sample_times(sample_times);

  const bool spectral = options.method == Method::Spectral ||
                        (options.method == Method::Auto && r.n_spins <= options.spectral_cap);
  if (spectral) {
    try {
      return evolve_spectral(p0, r, sample_times, options.store_populations);
    } catch (const NumericalFailure& e) {
      PopulationTrajectory traj = evolve_runge_kutta(p0, r, sample_times, options);
      traj.fell_back = true;
      traj.note = e.what();
      return traj;
    }
  }
  return evolve_runge_kutta(p0, r, sample_times, options);
}

}  // namespace superrad::collective
