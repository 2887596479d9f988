#pragma once

#include <cmath>
#include <random>

#include "qoptics/linalg.hpp"

namespace testsupport {

using qoptics::CMatrix;
using qoptics::Complex;
using qoptics::CVector;
using qoptics::Index;

// Written out by hand so tests do not lean on the library's own operators.
inline CMatrix lowering(int d) {
  CMatrix a = CMatrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline CMatrix kron(const CMatrix& x, const CMatrix& y) {
  CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

inline CMatrix eye(Index n) { return CMatrix::Identity(n, n); }

// Truncated Taylor series with scaling and squaring.
inline CMatrix expm_taylor(const CMatrix& g) {
  const double norm = g.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (norm / std::pow(2.0, s) > 0.25) ++s;
  const CMatrix x = g / std::pow(2.0, s);
  CMatrix term = eye(g.rows()), sum = eye(g.rows());
  for (int k = 1; k < 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

inline CVector random_state(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CVector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = Complex(n(rng), n(rng));
  return v / v.norm();
}

inline CMatrix random_unitary(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix m(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) m(i, j) = Complex(n(rng), n(rng));
  Eigen::HouseholderQR<CMatrix> qr(m);
  return qr.householderQ();
}

inline double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace testsupport
