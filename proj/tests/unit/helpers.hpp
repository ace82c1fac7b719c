#pragma once

// Hand-rolled generators and independent oracles shared by the unit tests.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <vector>

#include "loewner/matrix.hpp"
#include "loewner/random.hpp"

namespace testing {

using loewner::Complex;
using loewner::HermitianMatrix;
using loewner::Matrix;
using loewner::RealVector;
using loewner::Rng;

inline Matrix random_complex(Eigen::Index n, Rng& rng) { return loewner::complex_gaussian(n, n, rng); }

/// Eigen's own solver, used only as an oracle.
inline RealVector oracle_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double oracle_min_eigenvalue(const Matrix& m) { return oracle_eigenvalues(m)(0); }

/// Oracle matrix function: V f(L) V* through Eigen's solver.
template <class F>
Matrix oracle_apply(const Matrix& m, F f) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  RealVector lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = f(lam(i));
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

/// Standard Kronecker product written out entrywise.
inline Matrix oracle_kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index p = 0; p < a.rows(); ++p)
    for (Eigen::Index q = 0; q < a.cols(); ++q)
      for (Eigen::Index r = 0; r < b.rows(); ++r)
        for (Eigen::Index s = 0; s < b.cols(); ++s)
          out(p * b.rows() + r, q * b.cols() + s) = a(p, q) * b(r, s);
  return out;
}

inline Matrix oracle_kron_all(const std::vector<Matrix>& ms) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& m : ms) out = oracle_kron(out, m);
  return out;
}

/// Positive definite with spectrum in [lo, hi].
inline HermitianMatrix random_pd_in(Eigen::Index n, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = u(rng);
  return loewner::random_with_spectrum(v, rng);
}

inline std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace testing
