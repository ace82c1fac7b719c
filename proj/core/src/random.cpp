#include "loewner/random.hpp"

#include <cmath>
#include <vector>

#include "loewner/errors.hpp"

namespace loewner {

Rng trial_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  return Rng(seq);
}

Matrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix g(rows, cols);
  for (Eigen::Index q = 0; q < cols; ++q) {
    for (Eigen::Index p = 0; p < rows; ++p) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(p, q) = Complex(re, im);
    }
  }
  return g;
}

Matrix haar_unitary(Eigen::Index n, Rng& rng) {
  const Matrix z = complex_gaussian(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mag = std::abs(r(i, i));
    const Complex phase = mag > 0.0 ? r(i, i) / mag : Complex(1.0);
    q.col(i) *= phase;
  }
  return q;
}

HermitianMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  return HermitianMatrix::from_symmetrized(complex_gaussian(n, n, rng));
}

HermitianMatrix random_pd(Eigen::Index n, Rng& rng, double shift) {
  const Matrix g = complex_gaussian(n, n, rng);
  return HermitianMatrix::from_symmetrized(g * g.adjoint() +
                                           shift * Matrix::Identity(n, n));
}

double log_uniform(double lo, double hi, Rng& rng) {
  if (!(lo > 0.0) || !(hi >= lo)) throw ConfigError("log_uniform: need 0 < lo <= hi");
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

HermitianMatrix random_with_spectrum(std::span<const double> values, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(values.size());
  const Matrix u = haar_unitary(n, rng);
  RealVector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = values[static_cast<std::size_t>(i)];
  return HermitianMatrix::from_symmetrized(u * d.asDiagonal() * u.adjoint());
}

}  // namespace loewner
