#include "loewner/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "loewner/errors.hpp"
#include "loewner/tolerances.hpp"

namespace loewner {

double scale_of(const Matrix& m) { return std::max(1.0, m.norm()); }

Matrix symmetrize(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("symmetrize: matrix is not square");
  }
  Matrix h = 0.5 * (m + m.adjoint());
  for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, i) = h(i, i).real();
  return h;
}

HermitianMatrix::HermitianMatrix(Unchecked, Matrix m) : m_(std::move(m)) {}

HermitianMatrix::HermitianMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionMismatch("HermitianMatrix: expected a non-empty square matrix, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const double skew = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!(skew <= tol::kHermitianRel * scale_of(m))) {
    throw NotHermitian("HermitianMatrix: anti-Hermitian part " + std::to_string(skew) +
                       " exceeds tolerance");
  }
  m_ = symmetrize(m);
}

HermitianMatrix HermitianMatrix::from_symmetrized(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionMismatch("HermitianMatrix: expected a non-empty square matrix");
  }
  return HermitianMatrix(Unchecked{}, symmetrize(m));
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index n) {
  return HermitianMatrix(Unchecked{}, Matrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  const auto n = static_cast<Eigen::Index>(values.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = values[static_cast<std::size_t>(i)];
  return HermitianMatrix(m);
}

HermitianMatrix HermitianMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("HermitianMatrix +: dimension mismatch");
  return HermitianMatrix::from_symmetrized(a.matrix() + b.matrix());
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("HermitianMatrix -: dimension mismatch");
  return HermitianMatrix::from_symmetrized(a.matrix() - b.matrix());
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix::from_symmetrized(s * a.matrix());
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (Eigen::Index q = 0; q < a.cols(); ++q) {
    for (Eigen::Index p = 0; p < a.rows(); ++p) {
      if (p != q) sum += std::norm(a(p, q));
    }
  }
  return std::sqrt(sum);
}

// One two-sided rotation annihilating a(p, q). The phase of a(p, q) is first
// absorbed into column q, then a real symmetric Schur rotation is applied.
void jacobi_rotate(Matrix& a, Matrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const Complex phase = apq / mag;  // e^{i phi}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  // G = D R, D = diag(1, e^{-i phi}) on (p, q).
  const Complex gpp = c;
  const Complex gpq = s;
  const Complex gqp = -s * std::conj(phase);
  const Complex gqq = c * std::conj(phase);

  const Eigen::Index n = a.rows();
  for (Eigen::Index r = 0; r < n; ++r) {
    const Complex arp = a(r, p);
    const Complex arq = a(r, q);
    a(r, p) = arp * gpp + arq * gqp;
    a(r, q) = arp * gpq + arq * gqq;
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    const Complex apr = a(p, r);
    const Complex aqr = a(q, r);
    a(p, r) = std::conj(gpp) * apr + std::conj(gqp) * aqr;
    a(q, r) = std::conj(gpq) * apr + std::conj(gqq) * aqr;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
  for (Eigen::Index r = 0; r < n; ++r) {
    const Complex vrp = v(r, p);
    const Complex vrq = v(r, q);
    v(r, p) = vrp * gpp + vrq * gqp;
    v(r, q) = vrp * gpq + vrq * gqq;
  }
}

}  // namespace

EigenSystem eig_hermitian(const HermitianMatrix& m) {
  const Eigen::Index n = m.dim();
  Matrix a = m.matrix();
  Matrix v = Matrix::Identity(n, n);
  const double threshold = tol::kJacobiOffRel * m.frobenius();

  bool converged = off_diagonal_norm(a) <= threshold;
  for (int sweep = 0; sweep < tol::kJacobiMaxSweeps && !converged; ++sweep) {
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    }
    converged = off_diagonal_norm(a) <= threshold;
  }
  if (!converged) {
    throw ConvergenceError("eig_hermitian: no convergence after " +
                           std::to_string(tol::kJacobiMaxSweeps) + " sweeps (off-diagonal " +
                           std::to_string(off_diagonal_norm(a)) + ")");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() < a(j, j).real();
  });

  EigenSystem es;
  es.eigenvalues.resize(n);
  es.eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    es.eigenvalues(i) = a(src, src).real();
    es.eigenvectors.col(i) = v.col(src);
  }
  return es;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index p = 0; p < a.rows(); ++p) {
    for (Eigen::Index q = 0; q < a.cols(); ++q) {
      out.block(p * b.rows(), q * b.cols(), b.rows(), b.cols()) = a(p, q) * b;
    }
  }
  return out;
}

Matrix kron_all(std::span<const Matrix> factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

PsdVerdict is_psd(const HermitianMatrix& m, std::optional<double> tol) {
  PsdVerdict v;
  v.tolerance_used = tol.value_or(tol::kPsdRel * m.scale());
  v.margin = eig_hermitian(m).eigenvalues(0);
  v.is_psd = v.margin >= -v.tolerance_used;
  return v;
}

double pd_floor(const HermitianMatrix& m) { return tol::kPdFloorRel * m.scale(); }

namespace {

HermitianMatrix pd_power(const HermitianMatrix& m, double exponent, const char* who) {
  const EigenSystem es = eig_hermitian(m);
  const double margin = es.eigenvalues(0);
  if (!(margin > pd_floor(m))) {
    throw NotPositiveDefinite(std::string(who) + ": matrix is not positive definite (margin " +
                                  std::to_string(margin) + ")",
                              margin);
  }
  RealVector d = es.eigenvalues.array().pow(exponent);
  return HermitianMatrix::from_symmetrized(es.eigenvectors * d.asDiagonal() *
                                           es.eigenvectors.adjoint());
}

}  // namespace

HermitianMatrix sqrt_pd(const HermitianMatrix& m) { return pd_power(m, 0.5, "sqrt_pd"); }

HermitianMatrix inv_sqrt_pd(const HermitianMatrix& m) {
  return pd_power(m, -0.5, "inv_sqrt_pd");
}

HermitianMatrix spectral_apply(const HermitianMatrix& m,
                               const std::function<double(double)>& fn) {
  const EigenSystem es = eig_hermitian(m);
  RealVector d(es.eigenvalues.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = fn(es.eigenvalues(i));
  return HermitianMatrix::from_symmetrized(es.eigenvectors * d.asDiagonal() *
                                           es.eigenvectors.adjoint());
}

BlockMatrix::BlockMatrix(std::size_t block_rows, Eigen::Index block_dim)
    : rows_(block_rows), dim_(block_dim) {
  if (block_rows == 0 || block_dim <= 0) {
    throw DimensionMismatch("BlockMatrix: block_rows and block_dim must be positive");
  }
  blocks_.assign(rows_ * rows_, Matrix::Zero(dim_, dim_));
}

void BlockMatrix::set(std::size_t p, std::size_t q, Matrix block) {
  if (p >= rows_ || q >= rows_) throw DimensionMismatch("BlockMatrix::set: index out of range");
  if (block.rows() != dim_ || block.cols() != dim_) {
    throw DimensionMismatch("BlockMatrix::set: block is " + std::to_string(block.rows()) + "x" +
                            std::to_string(block.cols()) + ", expected " +
                            std::to_string(dim_));
  }
  blocks_[p * rows_ + q] = std::move(block);
}

const Matrix& BlockMatrix::block(std::size_t p, std::size_t q) const {
  if (p >= rows_ || q >= rows_) throw DimensionMismatch("BlockMatrix::block: index out of range");
  return blocks_[p * rows_ + q];
}

Matrix BlockMatrix::assemble() const {
  Matrix out(dim(), dim());
  for (std::size_t p = 0; p < rows_; ++p) {
    for (std::size_t q = 0; q < rows_; ++q) {
      out.block(static_cast<Eigen::Index>(p) * dim_, static_cast<Eigen::Index>(q) * dim_, dim_,
                dim_) = blocks_[p * rows_ + q];
    }
  }
  return out;
}

HermitianMatrix BlockMatrix::assemble_hermitian() const {
  return HermitianMatrix::from_symmetrized(assemble());
}

BlockMatrix assemble_block(std::size_t block_rows, Eigen::Index block_dim,
                           const std::function<Matrix(std::size_t, std::size_t)>& fn) {
  BlockMatrix bm(block_rows, block_dim);
  for (std::size_t p = 0; p < block_rows; ++p) {
    for (std::size_t q = 0; q < block_rows; ++q) bm.set(p, q, fn(p, q));
  }
  return bm;
}

}  // namespace loewner
