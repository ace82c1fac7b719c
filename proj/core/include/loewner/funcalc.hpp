#pragma once

// Functional calculus for functions of several matrix variables: f applied to
// a k-tuple (x_1, .., x_k) lives on H_1 (x) ... (x) H_k, and its restriction
// to commuting tuples on one space H.

#include <cstddef>
#include <vector>

#include "loewner/expr.hpp"
#include "loewner/matrix.hpp"

namespace loewner {

/// Eigenvalues of one operand grouped within 1e-8 * scale; each cluster
/// shares one spectral projection and is represented by its mean.
struct ClusteredSpectrum {
  RealVector representative;        // per eigenvalue: the mean of its cluster
  std::vector<double> cluster_means;
};

ClusteredSpectrum cluster_spectrum(const EigenSystem& es, double scale);

/// A k-tuple of Hermitian operands with eigensystems computed up front.
class OperandTuple {
 public:
  explicit OperandTuple(std::vector<HermitianMatrix> matrices);

  std::size_t size() const noexcept { return matrices_.size(); }
  const HermitianMatrix& operator[](std::size_t i) const { return matrices_[i]; }
  const std::vector<HermitianMatrix>& matrices() const noexcept { return matrices_; }
  const EigenSystem& eigen(std::size_t i) const { return eigen_[i]; }
  const ClusteredSpectrum& spectrum(std::size_t i) const { return spectra_[i]; }

  /// n_1 * ... * n_k
  Eigen::Index product_dim() const;
  std::vector<Eigen::Index> dims() const;

 private:
  std::vector<HermitianMatrix> matrices_;
  std::vector<EigenSystem> eigen_;
  std::vector<ClusteredSpectrum> spectra_;
};

/// Sum over eigenvalue tuples of f(l_1, .., l_k) E_1 (x) ... (x) E_k.
/// Throws DomainError naming the variable and eigenvalue when a spectrum
/// leaves f's declared domain. Eigenvalues within cluster tolerance of a
/// closed endpoint are evaluated at the endpoint.
HermitianMatrix apply_multivariate(const ScalarFunction& f, const OperandTuple& x);
HermitianMatrix apply_multivariate(const ScalarFunction& f,
                                   const std::vector<HermitianMatrix>& x);

struct SimultaneousEigen {
  Matrix basis;                            // unitary, columns u_m
  std::vector<RealVector> eigenvalues;     // eigenvalues[i](m) = <u_m, x_i u_m>
  double residual = 0.0;                   // max_i off-diagonal norm of U* x_i U
};

/// Common eigenbasis of commuting Hermitian matrices on one space. Throws
/// NonCommuting, or ConvergenceError when the retry cap is exhausted.
SimultaneousEigen simultaneous_diagonalize(const std::vector<HermitianMatrix>& x);

/// sum_m f(l_{m,1}, .., l_{m,k}) u_m u_m* for commuting x_1..x_k.
HermitianMatrix apply_commuting(const ScalarFunction& f, const std::vector<HermitianMatrix>& x);

struct CompressionReport {
  double max_deviation = 0.0;   // max_{m,n} |<u_m^(k), F u_n^(k)> - delta_mn f(l_m)|
  double fcom_deviation = 0.0;  // ||W* F W - f_com||_F, W = sum_m u_m^(k) u_m*
  HermitianMatrix fcom;
};

/// Compares apply_commuting with the compression of apply_multivariate by the
/// projection onto span{u_m (x) ... (x) u_m}.
CompressionReport compression_check(const ScalarFunction& f,
                                    const std::vector<HermitianMatrix>& x);

}  // namespace loewner
