#pragma once

#include <complex>

#include <Eigen/Dense>

namespace superrad {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace spinops {

enum class Pauli { X, Y, Z, Plus, Minus, Identity };

enum class Collective { JPlus, JMinus, JZ, JSquared };

/// 2x2 Pauli matrix in the {|up>, |down>} basis. Plus/Minus are (σx ± iσy)/2.
ComplexMatrix pauli(Pauli kind);

/// Embeds a single-site 2x2 operator at `site` of an n-spin register.
/// Site 0 is the leftmost Kronecker factor, so basis index 0 is the all-up state.
ComplexMatrix site_operator(const ComplexMatrix& op, int site, int n_spins);

/// a at site i times b at site j (i != j), built directly as a Kronecker product.
ComplexMatrix two_site_operator(const ComplexMatrix& a, int i, const ComplexMatrix& b, int j,
                                int n_spins);

/// Collective operators in spin-1/2 units: J_z = Σ σ_z/2, J_± = Σ σ_±.
ComplexMatrix collective_operator(Collective kind, int n_spins);

/// Rank-2 pair tensor T_2^m(i, j) in the unnormalized convention whose all-pair
/// sums reproduce the collective forms:
///   Σ T^0  = 3 J_z² − J²
///   Σ T^+1 = J_z J_+ − J_+/2
///   Σ T^+2 = J_+ J_+ / 2
/// Throws std::invalid_argument for i == j, out-of-range sites or |m| > 2.
ComplexMatrix pair_tensor(int m, int i, int j, int n_spins);

/// Symmetric (J = N/2) Dicke states embedded in the 2^N product space.
struct DickeBasis {
  int n_spins = 0;
  /// Column k holds |J, M = J − k>.
  ComplexMatrix vectors;

  double total_spin() const { return 0.5 * n_spins; }
  double magnetization(int k) const { return total_spin() - k; }
  int size() const { return n_spins + 1; }
};

/// Built from the all-up state by repeated normalized J_− applications.
DickeBasis dicke_basis(int n_spins);

/// Largest elementwise |A − A†|.
double hermiticity_error(const ComplexMatrix& a);

inline bool is_hermitian(const ComplexMatrix& a, double tol = 1e-12) {
  return a.rows() == a.cols() && hermiticity_error(a) <= tol;
}

/// A·B − B·A
inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

}  // namespace spinops
}  // namespace superrad
