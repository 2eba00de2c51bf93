#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "superrad/model.hpp"

namespace superrad::collective {

/// Populations P_M of the symmetric Dicke block, index k ↔ M = J − k.
struct PopulationVector {
  int n_spins = 0;
  Eigen::VectorXd values;

  double total_spin() const { return 0.5 * n_spins; }
  double magnetization(Eigen::Index k) const { return total_spin() - static_cast<double>(k); }

  /// Throws std::invalid_argument unless the entries sum to 1 within 1e−10 and
  /// none falls below −1e−12.
  void validate() const;

  static PopulationVector all_up(int n_spins);
  static PopulationVector uniform(int n_spins);
};

/// Generator of dP/dt = R·P on the N+1 Dicke populations.
struct RateMatrix {
  int n_spins = 0;
  Eigen::MatrixXd entries;

  Eigen::Index dim() const { return entries.rows(); }
};

// Dicke-sector transition rates in 1/µs. All throw std::invalid_argument when |M| > J.
double rate_alpha(double j, double m, double gamma1);
double rate_beta(double j, double m, double gamma1);
double rate_gamma(double j, double m, double gamma2);
double rate_delta(double j, double m, double gamma2);

/// dP_M/dt = −α(M)(P_M − P_{M−1}) − β(M)(P_M − P_{M+1})
///           −γ(M)(P_M − P_{M−2}) − δ(M)(P_M − P_{M+2})
/// Rates pointing outside the ladder must vanish algebraically; a nonzero one
/// raises std::logic_error instead of being clipped.
RateMatrix build_rate_matrix(int n_spins, double gamma1, double gamma2);

/// Uses Γ(1), Γ(2) of the configuration.
RateMatrix build_rate_matrix(const model::SystemConfig& cfg);

/// Σ_M (J+M)(J−M+1) P_M
double intensity_from_populations(const Eigen::VectorXd& p, int n_spins);
double intensity_from_populations(const PopulationVector& p);

/// Σ_M M P_M
double jz_from_populations(const Eigen::VectorXd& p, int n_spins);

/// Smallest |Re λ| among eigenvalues with Re λ < −1e−12·max|R_ij|.
/// Throws NoDecayError when no eigenvalue qualifies.
double adr(const RateMatrix& r);

enum class Method { Auto, Spectral, RungeKutta };

struct PopulationOptions {
  Method method = Method::Auto;
  /// Auto uses exact spectral propagation up to this many spins.
  int spectral_cap = 2000;
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  bool store_populations = true;
};

struct PopulationTrajectory {
  int n_spins = 0;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> populations;  // empty unless stored
  std::vector<double> intensity;
  std::vector<double> jz;
  /// "spectral" or "runge_kutta"
  std::string method;
  /// Set when the spectral path failed and the ODE path took over.
  bool fell_back = false;
  std::string note;
};

/// Exact propagation P(t) = V e^{Λt} Vᵀ P0 for a symmetric R. Intensity
/// queries cost O(N) once the decomposition is built.
class SpectralPropagator {
 public:
  /// Throws NumericalFailure if R is not symmetric or the eigensolver fails.
  SpectralPropagator(const RateMatrix& r, const PopulationVector& p0);

  Eigen::VectorXd populations(double t) const;
  double intensity(double t) const;
  double jz(double t) const;

 private:
  double project(const Eigen::VectorXd& weights_eig, double t) const;

  int n_spins_;
  Eigen::VectorXd lambda_;
  Eigen::MatrixXd basis_;
  Eigen::VectorXd coeff_;       // Vᵀ P0
  Eigen::VectorXd ones_eig_;    // Vᵀ 1
  Eigen::VectorXd intens_eig_;  // Vᵀ w_I
  Eigen::VectorXd jz_eig_;      // Vᵀ w_M
};

/// Samples populations at strictly increasing, nonnegative times.
PopulationTrajectory evolve_populations(const PopulationVector& p0, const RateMatrix& r,
                                        const std::vector<double>& sample_times,
                                        const PopulationOptions& options = {});

}  // namespace superrad::collective
