#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace qoptics {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Largest entry of |U†U − I|. Works on any square Eigen expression.
template <typename Derived>
double unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using Plain = typename Derived::PlainObject;
  const Plain m = u;
  if (m.rows() != m.cols()) return INFINITY;
  return (m.adjoint() * m - Plain::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename A, typename B>
double max_abs_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

// Smallest max-norm distance between a and e^{iφ}·b over all global phases φ,
// with φ taken from the largest-magnitude entry of b.
template <typename A, typename B>
double global_phase_distance(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  if (a.size() == 0) return 0.0;
  Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  const Complex pivot_b = b(r, c);
  const Complex pivot_a = a(r, c);
  if (std::abs(pivot_b) == 0.0) return a.cwiseAbs().maxCoeff();
  if (std::abs(pivot_a) == 0.0) return b.cwiseAbs().maxCoeff();
  const Complex phase = (pivot_a / pivot_b) / std::abs(pivot_a / pivot_b);
  return (a - phase * b).cwiseAbs().maxCoeff();
}

// exp(t·G) for anti-Hermitian G, via the eigendecomposition of the Hermitian iG.
// Exact to rounding and unitary by construction.
template <typename Derived>
CMatrix exp_anti_hermitian(const Eigen::MatrixBase<Derived>& g, double t) {
  const CMatrix h = kI * g;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  CVector phases(lambda.size());
  for (Index i = 0; i < lambda.size(); ++i) phases(i) = std::polar(1.0, -t * lambda(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace qoptics
