#pragma once

// Dense complex Hermitian linear algebra used by every other module.

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace loewner {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// max(1, ||m||_F); the reference scale for all relative tolerances.
double scale_of(const Matrix& m);

/// (m + m*) / 2 with an exactly real diagonal.
Matrix symmetrize(const Matrix& m);

/// A square complex matrix equal to its conjugate transpose.
///
/// The checked constructor rejects inputs whose anti-Hermitian part exceeds
/// 1e-10 * scale and stores the symmetrized matrix, so entries[p][q] is
/// exactly conj(entries[q][p]) afterwards.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const Matrix& m);

  /// Skips the Hermitian check; use for values that are Hermitian by
  /// construction up to roundoff (e.g. differences of two Hermitian sides).
  static HermitianMatrix from_symmetrized(const Matrix& m);

  static HermitianMatrix identity(Eigen::Index n);
  static HermitianMatrix diagonal(std::span<const double> values);
  static HermitianMatrix diagonal(std::initializer_list<double> values);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  Complex operator()(Eigen::Index p, Eigen::Index q) const { return m_(p, q); }
  double frobenius() const { return m_.norm(); }
  double scale() const { return scale_of(m_); }

 private:
  struct Unchecked {};
  HermitianMatrix(Unchecked, Matrix m);
  Matrix m_;
};

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix operator*(double s, const HermitianMatrix& a);

/// Eigenvalues ascending; eigenvectors are the matching columns of a unitary.
struct EigenSystem {
  RealVector eigenvalues;
  Matrix eigenvectors;
};

/// Cyclic complex Jacobi. Stops when the off-diagonal Frobenius norm drops
/// below 1e-13 * ||M||_F; throws ConvergenceError after 100 sweeps.
EigenSystem eig_hermitian(const HermitianMatrix& m);

Matrix kron(const Matrix& a, const Matrix& b);

/// factors[0] (x) factors[1] (x) ... ; the identity of size 1 when empty.
Matrix kron_all(std::span<const Matrix> factors);

struct PsdVerdict {
  bool is_psd = false;
  double margin = 0.0;  // smallest eigenvalue
  double tolerance_used = 0.0;
};

/// Default tolerance 1e-9 * max(1, ||M||_F).
PsdVerdict is_psd(const HermitianMatrix& m, std::optional<double> tol = std::nullopt);

/// 1e-8 * max(1, ||M||_F): margins at or below this are "not positive definite".
double pd_floor(const HermitianMatrix& m);

HermitianMatrix sqrt_pd(const HermitianMatrix& m);
HermitianMatrix inv_sqrt_pd(const HermitianMatrix& m);

/// V diag(fn(lambda)) V* for an arbitrary real function of one variable.
HermitianMatrix spectral_apply(const HermitianMatrix& m,
                               const std::function<double(double)>& fn);

/// A square grid of equally sized square blocks.
class BlockMatrix {
 public:
  BlockMatrix(std::size_t block_rows, Eigen::Index block_dim);

  std::size_t block_rows() const noexcept { return rows_; }
  Eigen::Index block_dim() const noexcept { return dim_; }
  Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(rows_) * dim_; }

  /// Throws DimensionMismatch when the block is not block_dim x block_dim.
  void set(std::size_t p, std::size_t q, Matrix block);
  const Matrix& block(std::size_t p, std::size_t q) const;

  Matrix assemble() const;

  /// Assembles and symmetrizes; for differences of two Hermitian sides.
  HermitianMatrix assemble_hermitian() const;

 private:
  std::size_t rows_;
  Eigen::Index dim_;
  std::vector<Matrix> blocks_;  // row-major, zero-initialized
};

/// Builds a block_rows x block_rows grid from fn(p, q).
BlockMatrix assemble_block(std::size_t block_rows, Eigen::Index block_dim,
                           const std::function<Matrix(std::size_t, std::size_t)>& fn);

}  // namespace loewner
