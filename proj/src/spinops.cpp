#include "superrad/spinops.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace superrad::spinops {

namespace {

void require_spins(int n_spins) {
  if (n_spins < 1) throw std::invalid_argument("n_spins must be >= 1");
  if (n_spins > 14) throw std::invalid_argument("n_spins too large for dense operators");
}

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix spin_half(Pauli kind) {
  // I = σ/2 for x, y, z; the ladder operators are already I_± = σ_±.
  switch (kind) {
    case Pauli::Plus:
    case Pauli::Minus:
      return pauli(kind);
    default:
      return 0.5 * pauli(kind);
  }
}

}  // namespace

ComplexMatrix pauli(Pauli kind) {
  const cplx i{0.0, 1.0};
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (kind) {
    case Pauli::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Pauli::Y:
      m(0, 1) = -i;
      m(1, 0) = i;
      break;
    case Pauli::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case Pauli::Plus:
      m(0, 1) = 1.0;
      break;
    case Pauli::Minus:
      m(1, 0) = 1.0;
      break;
    case Pauli::Identity:
      m = identity(2);
      break;
  }
  return m;
}

ComplexMatrix site_operator(const ComplexMatrix& op, int site, int n_spins) {
  require_spins(n_spins);
  if (op.rows() != 2 || op.cols() != 2) throw std::invalid_argument("site operator must be 2x2");
  if (site < 0 || site >= n_spins) {
    throw std::invalid_argument("site " + std::to_string(site) + " out of range for " +
                                std::to_string(n_spins) + " spins");
  }
  const Eigen::Index left = Eigen::Index{1} << site;
  const Eigen::Index right = Eigen::Index{1} << (n_spins - site - 1);
  ComplexMatrix inner = Eigen::kroneckerProduct(op, identity(right)).eval();
  return Eigen::kroneckerProduct(identity(left), inner).eval();
}

ComplexMatrix two_site_operator(const ComplexMatrix& a, int i, const ComplexMatrix& b, int j,
                                int n_spins) {
  require_spins(n_spins);
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2) {
    throw std::invalid_argument("site operators must be 2x2");
  }
  if (i < 0 || j < 0 || i >= n_spins || j >= n_spins) {
    throw std::invalid_argument("pair index out of range");
  }
  if (i == j) throw std::invalid_argument("two-site operator requires distinct sites");

  ComplexMatrix out = identity(1);
  for (int s = 0; s < n_spins; ++s) {
    const ComplexMatrix& factor = (s == i) ? a : (s == j) ? b : identity(2);
    out = Eigen::kroneckerProduct(out, factor).eval();
  }
  return out;
}

ComplexMatrix collective_operator(Collective kind, int n_spins) {
  require_spins(n_spins);
  const Eigen::Index dim = Eigen::Index{1} << n_spins;

  if (kind == Collective::JSquared) {
    ComplexMatrix jx = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix jy = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix jz = ComplexMatrix::Zero(dim, dim);
    for (int s = 0; s < n_spins; ++s) {
      jx += site_operator(spin_half(Pauli::X), s, n_spins);
      jy += site_operator(spin_half(Pauli::Y), s, n_spins);
      jz += site_operator(spin_half(Pauli::Z), s, n_spins);
    }
    return jx * jx + jy * jy + jz * jz;
  }

  Pauli single = Pauli::Z;
  if (kind == Collective::JPlus) single = Pauli::Plus;
  if (kind == Collective::JMinus) single = Pauli::Minus;

  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  for (int s = 0; s < n_spins; ++s) total += site_operator(spin_half(single), s, n_spins);
  return total;
}

ComplexMatrix pair_tensor(int m, int i, int j, int n_spins) {
  require_spins(n_spins);
  if (m < -2 || m > 2) throw std::invalid_argument("tensor component m must lie in [-2, 2]");
  if (i < 0 || j < 0 || i >= n_spins || j >= n_spins) {
    throw std::invalid_argument("pair index out of range");
  }
  if (i == j) throw std::invalid_argument("pair tensor requires distinct sites");

  auto pair = [&](Pauli a, Pauli b) {
    return two_site_operator(spin_half(a), i, spin_half(b), j, n_spins);
  };

  switch (m) {
    case 0: {
      const ComplexMatrix zz = pair(Pauli::Z, Pauli::Z);
      const ComplexMatrix dot = pair(Pauli::X, Pauli::X) + pair(Pauli::Y, Pauli::Y) + zz;
      return 6.0 * zz - 2.0 * dot;
    }
    case 1:
      return pair(Pauli::Z, Pauli::Plus) + pair(Pauli::Plus, Pauli::Z);
    case -1:
      return pair(Pauli::Z, Pauli::Minus) + pair(Pauli::Minus, Pauli::Z);
    case 2:
      return pair(Pauli::Plus, Pauli::Plus);
    default:
      return pair(Pauli::Minus, Pauli::Minus);
  }
}

DickeBasis dicke_basis(int n_spins) {
  require_spins(n_spins);
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  const ComplexMatrix lower = collective_operator(Collective::JMinus, n_spins);

  DickeBasis basis;
  basis.n_spins = n_spins;
  basis.vectors = ComplexMatrix::Zero(dim, n_spins + 1);
  basis.vectors(0, 0) = 1.0;

  const double j = basis.total_spin();
  for (int k = 1; k <= n_spins; ++k) {
    const double m = basis.magnetization(k - 1);
    const double norm = std::sqrt((j + m) * (j - m + 1.0));
    basis.vectors.col(k) = lower * basis.vectors.col(k - 1) / norm;
  }
  return basis;
}

double hermiticity_error(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace superrad::spinops
