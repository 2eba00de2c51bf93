#include "superrad/full_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include "superrad/errors.hpp"

namespace superrad::full {

namespace {

using spinops::Collective;
using spinops::Pauli;

Eigen::Index dim_for(int n_spins) { return Eigen::Index{1} << n_spins; }

double trace_expectation(const ComplexMatrix& op, const ComplexMatrix& rho) {
  // Tr(op ρ) = Σ_ab op_ab ρ_ba
  return op.transpose().cwiseProduct(rho).sum().real();
}

double min_eigenvalue(const ComplexMatrix& rho) {
  const ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

ComplexMatrix sum_pair_tensors(int m, const std::vector<std::pair<int, int>>& pairs, int n) {
  ComplexMatrix total = ComplexMatrix::Zero(dim_for(n), dim_for(n));
  for (const auto& [i, j] : pairs) total += spinops::pair_tensor(m, i, j, n);
  return total;
}

std::vector<std::pair<int, int>> coupled_pairs(const model::SystemConfig& cfg) {
  if (cfg.n_spins < 2) return {};
  return model::pair_list(cfg.geometry, cfg.n_spins);
}

ComplexMatrix decay_operator(const std::vector<Jump>& jumps, Eigen::Index dim) {
  ComplexMatrix k = ComplexMatrix::Zero(dim, dim);
  for (const auto& jump : jumps) k += jump.rate * (jump.op.adjoint() * jump.op);
  return k;
}

ComplexMatrix apply_lindblad(const std::vector<Jump>& jumps, const ComplexMatrix& decay,
                             const ComplexMatrix& rho) {
  ComplexMatrix out = -(decay * rho + rho * decay);
  for (const auto& jump : jumps) {
    out.noalias() += (2.0 * jump.rate) * (jump.op * rho * jump.op.adjoint());
  }
  return out;
}

struct ObservableOps {
  ComplexMatrix intensity;
  ComplexMatrix jz;
  ComplexMatrix j_squared;

  explicit ObservableOps(int n) {
    const ComplexMatrix jp = spinops::collective_operator(Collective::JPlus, n);
    intensity = jp * jp.adjoint();
    jz = spinops::collective_operator(Collective::JZ, n);
    j_squared = spinops::collective_operator(Collective::JSquared, n);
  }

  Observables measure(const ComplexMatrix& rho, int n) const {
    Observables o;
    o.intensity = trace_expectation(intensity, rho);
    o.jz = trace_expectation(jz, rho);
    o.j_squared = trace_expectation(j_squared, rho);
    o.dc = 0.5 * (o.intensity - 0.5 * n - o.jz);
    return o;
  }
};

void check_density_matrix(const DensityMatrix& rho, Eigen::Index dim) {
  if (rho.rows() != dim || rho.cols() != dim) {
    throw std::invalid_argument("density matrix dimension " + std::to_string(rho.rows()) + "x" +
                                std::to_string(rho.cols()) + " does not match 2^N = " +
                                std::to_string(dim));
  }
  if (std::abs(rho.trace() - cplx{1.0, 0.0}) > 1e-8) {
    throw std::invalid_argument("initial density matrix must have unit trace");
  }
  if (spinops::hermiticity_error(rho) > 1e-10) {
    throw std::invalid_argument("initial density matrix must be Hermitian");
  }
  if (min_eigenvalue(rho) < -1e-8) {
    throw std::invalid_argument("initial density matrix must be positive semidefinite");
  }
}

std::vector<double> resolve_sample_times(const EvolveOptions& options, double t_end) {
  std::vector<double> times = options.sample_times;
  if (times.empty()) {
    constexpr int count = 201;
    times.reserve(count);
    for (int k = 0; k < count; ++k) times.push_back(t_end * k / (count - 1));
    return times;
  }
  const double slack = 1e-12 * t_end;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k]) || times[k] < 0.0 || times[k] > t_end + slack) {
      throw std::invalid_argument("sample times must lie in [0, t_end]");
    }
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw std::invalid_argument("sample times must be strictly increasing");
    }
  }
  times.back() = std::min(times.back(), t_end);
  return times;
}

// Dissipative part of the generator expressed in the eigenbasis of H_sec, where
// the unitary evolution reduces to elementwise phases.
class EigenFrame {
 public:
  explicit EigenFrame(const Generator& gen) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gen.hamiltonian());
    if (solver.info() != Eigen::Success) {
      throw NumericalFailure("eigendecomposition of the secular Hamiltonian failed", 0.0);
    }
    energies_ = solver.eigenvalues();
    basis_ = solver.eigenvectors();
    for (const auto& jump : gen.jumps()) {
      jumps_.push_back({basis_.adjoint() * jump.op * basis_, jump.rate});
    }
    decay_ = decay_operator(jumps_, basis_.rows());
  }

  const ComplexMatrix& basis() const { return basis_; }

  ComplexVector phases(double t) const {
    ComplexVector u(energies_.size());
    for (Eigen::Index a = 0; a < u.size(); ++a) u(a) = std::polar(1.0, -energies_(a) * t);
    return u;
  }

  // ρ_eig(t) = U ρ̃ U†, with U = diag(e^{−iEt})
  ComplexMatrix to_eigenbasis(const ComplexMatrix& rho_tilde, double t) const {
    const ComplexVector u = phases(t);
    return u.asDiagonal() * rho_tilde * u.conjugate().asDiagonal();
  }

  ComplexMatrix derivative(const ComplexMatrix& rho_tilde, double t) const {
    const ComplexVector u = phases(t);
    const ComplexMatrix rho = u.asDiagonal() * rho_tilde * u.conjugate().asDiagonal();
    const ComplexMatrix d = apply_lindblad(jumps_, decay_, rho);
    return u.conjugate().asDiagonal() * d * u.asDiagonal();
  }

 private:
  Eigen::VectorXd energies_;
  ComplexMatrix basis_;
  std::vector<Jump> jumps_;
  ComplexMatrix decay_;
};

using State = std::vector<double>;

Eigen::Map<const ComplexMatrix> as_matrix(const State& x, Eigen::Index dim) {
  return {reinterpret_cast<const cplx*>(x.data()), dim, dim};
}

Eigen::Map<ComplexMatrix> as_matrix(State& x, Eigen::Index dim) {
  return {reinterpret_cast<cplx*>(x.data()), dim, dim};
}


// Exact propagation e^{Lt} vec(ρ0) through the eigendecomposition of the dense
// Liouvillian. Returns false, without recording, when the eigenbasis is too
// ill-conditioned to reproduce ρ0.
template <class Record>
bool propagate_spectral(const DensityMatrix& rho0, const model::SystemConfig& cfg,
                        const std::vector<double>& times, Record& record) {
  const Eigen::Index dim = rho0.rows();
  const ComplexMatrix l = liouvillian_matrix(cfg);
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(l);
  if (solver.info() != Eigen::Success) return false;
  const ComplexMatrix& v = solver.eigenvectors();
  ComplexVector lambda = solver.eigenvalues();
  // Roundoff can leave stationary modes marginally growing.
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (lambda(k).real() > 0.0) lambda(k) = {0.0, lambda(k).imag()};
  }

  const Eigen::Map<const ComplexVector> v0(rho0.data(), dim * dim);
  const Eigen::PartialPivLU<ComplexMatrix> lu(v);
  const ComplexVector c = lu.solve(v0);
  if (!c.allFinite() || (v * c - v0).norm() > 1e-10) return false;

  for (double t : times) {
    const ComplexVector coeff = c.cwiseProduct((lambda * t).array().exp().matrix());
    const ComplexVector vec = v * coeff;
    const Eigen::Map<const ComplexMatrix> rho(vec.data(), dim, dim);
    record(ComplexMatrix(rho), t);
  }
  return true;
}

// Dormand-Prince with dense output on ρ̃ = U† V† ρ V U.
template <class Record>
void integrate_eigenframe(const Generator& gen, const DensityMatrix& rho0,
                          const std::vector<double>& times, const EvolveOptions& options,
                          std::size_t& steps, Record& record) {
  namespace ode = boost::numeric::odeint;
  const Eigen::Index dim = gen.dim();
  const EigenFrame frame(gen);
  auto to_lab = [&](const ComplexMatrix& rho_tilde, double t) -> ComplexMatrix {
    return frame.basis() * frame.to_eigenbasis(rho_tilde, t) * frame.basis().adjoint();
  };

  State x(static_cast<std::size_t>(2 * dim * dim));
  as_matrix(x, dim) = frame.basis().adjoint() * rho0 * frame.basis();

  std::size_t next = 0;
  while (next < times.size() && times[next] <= 0.0) {
    record(to_lab(as_matrix(x, dim), times[next]), times[next]);
    ++next;
  }
  if (next == times.size()) return;

  auto system = [&](const State& in, State& out, double t) {
    as_matrix(out, dim) = frame.derivative(as_matrix(in, dim), t);
  };

  const double t_end = times.back();
  const double scale = gen.rate_scale();
  double dt0 = scale > 0.0 ? 1e-3 / scale : t_end;
  dt0 = std::min(dt0, t_end);
  if (options.max_step) dt0 = std::min(dt0, *options.max_step);

  auto stepper = ode::make_dense_output(options.abs_tol, options.rel_tol,
                                        options.max_step.value_or(0.0),
                                        ode::runge_kutta_dopri5<State>());
  stepper.initialize(x, 0.0, dt0);

  State sample(x.size());
  double reached = 0.0;
  while (next < times.size()) {
    std::pair<double, double> span;
    try {
      span = stepper.do_step(system);
    } catch (const ode::odeint_error& e) {
      throw NumericalFailure(std::string("step size underflow: ") + e.what(), reached);
    }
    const double taken = span.second - span.first;
    if (!(taken > 1e-14 * std::max(1.0, std::abs(span.second)))) {
      throw NumericalFailure("step size underflow at t = " + std::to_string(span.first) + " us",
                             reached);
    }
    if (++steps > options.max_steps) throw NumericalFailure("step budget exhausted", reached);
    while (next < times.size() && times[next] <= span.second) {
      stepper.calc_state(times[next], sample);
      record(to_lab(as_matrix(sample, dim), times[next]), times[next]);
      ++next;
    }
    reached = span.second;
  }
}

}  // namespace

Generator::Generator(const model::SystemConfig& cfg) : n_spins_(cfg.n_spins) {
  cfg.validate();
  const int n = cfg.n_spins;
  const Eigen::Index dim = dim_for(n);
  h_ = build_hamiltonian_secular(cfg);

  const auto rates = model::rate_set(cfg);
  const auto pairs = coupled_pairs(cfg);
  if (!pairs.empty()) {
    for (int m = 0; m <= 2; ++m) {
      if (rates.gamma[m] <= 0.0) continue;
      ComplexMatrix a = sum_pair_tensors(m, pairs, n);
      if (m == 0) {
        jumps_.push_back({std::move(a), rates.gamma[0]});
      } else {
        ComplexMatrix adj = a.adjoint();
        jumps_.push_back({std::move(a), rates.gamma[m]});
        jumps_.push_back({std::move(adj), rates.gamma[m]});
      }
    }
  }

  const double local = 1.0 - cfg.alpha_c;
  for (int s = 0; s < n; ++s) {
    if (rates.p_minus > 0.0) {
      jumps_.push_back({spinops::site_operator(spinops::pauli(Pauli::Minus), s, n),
                        local * rates.p_minus});
    }
    if (rates.p_plus > 0.0) {
      jumps_.push_back({spinops::site_operator(spinops::pauli(Pauli::Plus), s, n),
                        local * rates.p_plus});
    }
  }
  // Σ_{i,j} α_c (...) over all site pairs is the collective channel; the diagonal
  // i = j part is already removed from the local channels above.
  if (cfg.alpha_c > 0.0) {
    if (rates.p_minus > 0.0) {
      jumps_.push_back({spinops::collective_operator(Collective::JMinus, n),
                        cfg.alpha_c * rates.p_minus});
    }
    if (rates.p_plus > 0.0) {
      jumps_.push_back({spinops::collective_operator(Collective::JPlus, n),
                        cfg.alpha_c * rates.p_plus});
    }
  }
  decay_ = decay_operator(jumps_, dim);
}

DensityMatrix Generator::dissipator(const DensityMatrix& rho) const {
  return apply_lindblad(jumps_, decay_, rho);
}

DensityMatrix Generator::operator()(const DensityMatrix& rho) const {
  if (rho.rows() != dim() || rho.cols() != dim()) {
    throw std::invalid_argument("density matrix dimension does not match the configuration");
  }
  const cplx minus_i{0.0, -1.0};
  DensityMatrix out = dissipator(rho);
  out.noalias() += minus_i * (h_ * rho);
  out.noalias() -= minus_i * (rho * h_);
  return out;
}

double Generator::rate_scale() const {
  auto norm_inf = [](const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
  };
  return norm_inf(h_) + 4.0 * norm_inf(decay_);
}

ComplexMatrix build_hamiltonian_secular(const model::SystemConfig& cfg) {
  cfg.validate();
  const Eigen::Index dim = dim_for(cfg.n_spins);
  const auto pairs = coupled_pairs(cfg);
  // Y_2^0 is real, so ω_{d_0} is real.
  const double w0 = model::dipolar_amplitude(0, cfg).real();
  if (pairs.empty() || w0 == 0.0) return ComplexMatrix::Zero(dim, dim);
  return w0 * sum_pair_tensors(0, pairs, cfg.n_spins);
}

DensityMatrix rhs(const DensityMatrix& rho, const model::SystemConfig& cfg) {
  const Generator gen(cfg);
  return gen(rho);
}

Observables observables(const DensityMatrix& rho, int n_spins) {
  if (rho.rows() != dim_for(n_spins) || rho.cols() != dim_for(n_spins)) {
    throw std::invalid_argument("density matrix dimension does not match n_spins");
  }
  return ObservableOps(n_spins).measure(rho, n_spins);
}

std::vector<double> Trajectory::intensity() const {
  std::vector<double> out;
  out.reserve(observables.size());
  for (const auto& o : observables) out.push_back(o.intensity);
  return out;
}

Trajectory evolve(const DensityMatrix& rho0, const model::SystemConfig& cfg, double t_end,
                  const EvolveOptions& options) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be > 0");
  if (!(options.rel_tol > 0.0) || !(options.abs_tol > 0.0)) {
    throw std::invalid_argument("integrator tolerances must be positive");
  }

  const Generator gen(cfg);
  const int n = cfg.n_spins;
  check_density_matrix(rho0, gen.dim());
  const std::vector<double> times = resolve_sample_times(options, t_end);

  const bool spectral = options.method == EvolveMethod::Spectral ||
                        (options.method == EvolveMethod::Auto && n <= kLiouvillianSpinCap);
  if (options.method == EvolveMethod::Spectral && n > kLiouvillianSpinCap) {
    throw std::invalid_argument("spectral propagation is limited to N <= " +
                                std::to_string(kLiouvillianSpinCap));
  }

  Trajectory traj;
  traj.n_spins = n;
  traj.times.reserve(times.size());
  const ObservableOps ops(n);
  double last_good = 0.0;

  auto record = [&](const ComplexMatrix& rho, double t) {
    if (!rho.allFinite()) throw NumericalFailure("state became non-finite", last_good);
    const double lowest = min_eigenvalue(rho);
    if (lowest < -options.positivity_fail) {
      throw NumericalFailure("positivity breach: minimum eigenvalue " + std::to_string(lowest) +
                                 " at t = " + std::to_string(t) + " us",
                             last_good);
    }
    if (lowest < -options.positivity_warn) traj.positivity_warning = true;
    traj.times.push_back(t);
    traj.observables.push_back(ops.measure(rho, n));
    traj.trace_error.push_back(std::abs(rho.trace() - cplx{1.0, 0.0}));
    traj.hermiticity_error.push_back(spinops::hermiticity_error(rho));
    traj.min_eigenvalue.push_back(lowest);
    if (options.store_states) traj.states.push_back(rho);
    last_good = t;
  };

  if (spectral) {
    if (propagate_spectral(rho0, cfg, times, record)) {
      traj.method = "spectral";
      return traj;
    }
    // Ill-conditioned eigenbasis: start over on the integrator.
    traj = Trajectory{};
    traj.n_spins = n;
    traj.fell_back = true;
    last_good = 0.0;
  }
  traj.method = "runge_kutta";
  integrate_eigenframe(gen, rho0, times, options, traj.steps, record);
  return traj;
}

ComplexMatrix liouvillian_matrix(const model::SystemConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_spins;
  if (n > kLiouvillianSpinCap) {
    throw std::invalid_argument("dense Liouvillian is limited to N <= " +
                                std::to_string(kLiouvillianSpinCap));
  }
  const Eigen::Index dim = dim_for(n);
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);

  // vec(A X B) = (Bᵀ ⊗ A) vec(X) for column-stacked vec.
  auto left = [&](const ComplexMatrix& a) -> ComplexMatrix {
    return Eigen::kroneckerProduct(id, a).eval();
  };
  auto right = [&](const ComplexMatrix& b) -> ComplexMatrix {
    return Eigen::kroneckerProduct(b.transpose(), id).eval();
  };
  auto comm = [&](const ComplexMatrix& a) -> ComplexMatrix { return left(a) - right(a); };

  const cplx minus_i{0.0, -1.0};
  const auto pairs = coupled_pairs(cfg);
  const auto rates = model::rate_set(cfg);

  ComplexMatrix l = ComplexMatrix::Zero(dim * dim, dim * dim);
  if (!pairs.empty()) {
    const double w0 = model::dipolar_amplitude(0, cfg).real();
    l += minus_i * w0 * comm(sum_pair_tensors(0, pairs, n));

    for (int m = 0; m <= 2; ++m) {
      if (rates.gamma[m] == 0.0) continue;
      const double weight = (m == 0) ? 0.5 : 1.0;
      const ComplexMatrix up = comm(sum_pair_tensors(m, pairs, n));
      const ComplexMatrix down = comm(sum_pair_tensors(-m, pairs, n));
      l -= rates.gamma[m] * weight * (up * down + down * up);
    }
  }

  const ComplexMatrix sm = spinops::pauli(Pauli::Minus);
  const ComplexMatrix sp = spinops::pauli(Pauli::Plus);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double c = (i == j) ? 1.0 : cfg.alpha_c;
      if (c == 0.0) continue;
      const ComplexMatrix minus_i_op = spinops::site_operator(sm, i, n);
      const ComplexMatrix plus_i_op = spinops::site_operator(sp, i, n);
      const ComplexMatrix minus_j_op = spinops::site_operator(sm, j, n);
      const ComplexMatrix plus_j_op = spinops::site_operator(sp, j, n);

      // p_−: 2 σ−_i ρ σ+_j − {σ+_j σ−_i, ρ};  p_+: 2 σ+_i ρ σ−_j − {σ−_j σ+_i, ρ}
      if (rates.p_minus > 0.0) {
        const ComplexMatrix k = plus_j_op * minus_i_op;
        l += c * rates.p_minus * (2.0 * right(plus_j_op) * left(minus_i_op) - left(k) - right(k));
      }
      if (rates.p_plus > 0.0) {
        const ComplexMatrix k = minus_j_op * plus_i_op;
        l += c * rates.p_plus * (2.0 * right(minus_j_op) * left(plus_i_op) - left(k) - right(k));
      }
    }
  }
  return l;
}

double adr_full(const model::SystemConfig& cfg) {
  const ComplexMatrix l = liouvillian_matrix(cfg);
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(l, false);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("Liouvillian eigendecomposition failed", 0.0);
  }
  const ComplexVector& lambda = solver.eigenvalues();
  const double radius = lambda.cwiseAbs().maxCoeff();
  if (!(radius > 0.0)) throw NoDecayError();

  const double eps = 1e-9 * radius;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    const double re = lambda(k).real();
    if (re < -eps) best = std::min(best, -re);
  }
  if (!std::isfinite(best)) throw NoDecayError();
  return best;
}

DensityMatrix all_up_state(int n_spins) {
  if (n_spins < 1) throw std::invalid_argument("n_spins must be >= 1");
  const Eigen::Index dim = dim_for(n_spins);
  DensityMatrix rho = DensityMatrix::Zero(dim, dim);
  rho(0, 0) = 1.0;
  return rho;
}

DensityMatrix pure_state(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("state vector must be nonzero");
  const ComplexVector v = psi / norm;
  return v * v.adjoint();
}

}  // namespace superrad::full
