#include "loewner/funcalc.hpp"

#include <cmath>
#include <sstream>

#include "loewner/errors.hpp"
#include "loewner/random.hpp"
#include "loewner/tolerances.hpp"

namespace loewner {

namespace {

// Maps an eigenvalue into the declared interval of variable `var`, snapping
// values within `slack` of a closed endpoint onto it.
double domain_argument(const ScalarFunction& f, std::size_t var, double value, double slack) {
  const Interval& d = f.domain()[var];
  if (d.contains(value)) return value;
  if (d.lo_closed && value < d.lo && value >= d.lo - slack) return d.lo;
  if (d.hi_closed && value > d.hi && value <= d.hi + slack) return d.hi;
  std::ostringstream os;
  os.precision(17);
  os << "spectrum outside domain: variable r" << (var + 1) << " has eigenvalue " << value
     << " not in " << d.to_string();
  throw DomainError(os.str());
}

double off_diagonal_norm(const Matrix& a) {
  Matrix off = a;
  off.diagonal().setZero();
  return off.norm();
}

}  // namespace

ClusteredSpectrum cluster_spectrum(const EigenSystem& es, double scale) {
  const double gap = tol::kClusterRel * scale;
  const Eigen::Index n = es.eigenvalues.size();
  ClusteredSpectrum cs;
  cs.representative.resize(n);
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && es.eigenvalues(end) - es.eigenvalues(end - 1) <= gap) ++end;
    double mean = 0.0;
    for (Eigen::Index i = start; i < end; ++i) mean += es.eigenvalues(i);
    mean /= static_cast<double>(end - start);
    for (Eigen::Index i = start; i < end; ++i) cs.representative(i) = mean;
    cs.cluster_means.push_back(mean);
    start = end;
  }
  return cs;
}

OperandTuple::OperandTuple(std::vector<HermitianMatrix> matrices)
    : matrices_(std::move(matrices)) {
  if (matrices_.empty()) throw DimensionMismatch("OperandTuple: need at least one operand");
  eigen_.reserve(matrices_.size());
  spectra_.reserve(matrices_.size());
  for (const auto& m : matrices_) {
    eigen_.push_back(eig_hermitian(m));
    spectra_.push_back(cluster_spectrum(eigen_.back(), m.scale()));
  }
}

Eigen::Index OperandTuple::product_dim() const {
  Eigen::Index n = 1;
  for (const auto& m : matrices_) n *= m.dim();
  return n;
}

std::vector<Eigen::Index> OperandTuple::dims() const {
  std::vector<Eigen::Index> out;
  for (const auto& m : matrices_) out.push_back(m.dim());
  return out;
}

HermitianMatrix apply_multivariate(const ScalarFunction& f, const OperandTuple& x) {
  const std::size_t k = x.size();
  if (f.arity() != k) {
    throw DimensionMismatch("apply_multivariate: function of " + std::to_string(f.arity()) +
                            " variables applied to " + std::to_string(k) + " operands");
  }

  std::vector<std::vector<double>> args(k);
  std::vector<Matrix> bases;
  bases.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const RealVector& rep = x.spectrum(i).representative;
    const double slack = tol::kClusterRel * x[i].scale();
    for (Eigen::Index m = 0; m < rep.size(); ++m) {
      args[i].push_back(domain_argument(f, i, rep(m), slack));
    }
    bases.push_back(x.eigen(i).eigenvectors);
  }

  // Diagonal of f in the product eigenbasis, lexicographic over (m_1, .., m_k).
  const Eigen::Index total = x.product_dim();
  RealVector diag(total);
  std::vector<std::size_t> idx(k, 0);
  std::vector<double> point(k);
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    for (std::size_t i = 0; i < k; ++i) point[i] = args[i][idx[i]];
    diag(flat) = f.eval(point);
    for (std::size_t i = k; i-- > 0;) {
      if (++idx[i] < args[i].size()) break;
      idx[i] = 0;
    }
  }

  const Matrix w = kron_all(bases);
  return HermitianMatrix::from_symmetrized((w * diag.asDiagonal()) * w.adjoint());
}

HermitianMatrix apply_multivariate(const ScalarFunction& f,
                                   const std::vector<HermitianMatrix>& x) {
  return apply_multivariate(f, OperandTuple(x));
}

SimultaneousEigen simultaneous_diagonalize(const std::vector<HermitianMatrix>& x) {
  if (x.empty()) throw DimensionMismatch("simultaneous_diagonalize: no matrices");
  const Eigen::Index n = x.front().dim();
  for (const auto& m : x) {
    if (m.dim() != n) throw DimensionMismatch("simultaneous_diagonalize: dimension mismatch");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const Matrix& a = x[i].matrix();
      const Matrix& b = x[j].matrix();
      const double residual = (a * b - b * a).norm();
      const double scale = std::max(1.0, a.norm() * b.norm());
      if (residual > tol::kCommuteRel * scale) {
        throw NonCommuting("operands r" + std::to_string(i + 1) + " and r" +
                               std::to_string(j + 1) + " do not commute (residual " +
                               std::to_string(residual) + ")",
                           i, j, residual);
      }
    }
  }

  Rng rng(0x5eed'd1a6ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < tol::kSimulDiagRetries; ++attempt) {
    Matrix combo = Matrix::Zero(n, n);
    for (const auto& m : x) combo += normal(rng) * m.matrix();
    const EigenSystem es = eig_hermitian(HermitianMatrix::from_symmetrized(combo));

    SimultaneousEigen out;
    out.basis = es.eigenvectors;
    for (const auto& m : x) {
      const Matrix d = out.basis.adjoint() * m.matrix() * out.basis;
      out.residual = std::max(out.residual, off_diagonal_norm(d) / m.scale());
      out.eigenvalues.push_back(d.diagonal().real());
    }
    if (out.residual <= tol::kSimulDiagRel) return out;
    best = std::min(best, out.residual);
  }
  throw ConvergenceError("simultaneous_diagonalize: degeneracy not resolved after " +
                         std::to_string(tol::kSimulDiagRetries) +
                         " attempts (best residual " + std::to_string(best) + ")");
}

HermitianMatrix apply_commuting(const ScalarFunction& f, const std::vector<HermitianMatrix>& x) {
  if (f.arity() != x.size()) {
    throw DimensionMismatch("apply_commuting: arity does not match the number of operands");
  }
  const SimultaneousEigen se = simultaneous_diagonalize(x);
  const Eigen::Index n = se.basis.rows();
  RealVector diag(n);
  std::vector<double> point(x.size());
  for (Eigen::Index m = 0; m < n; ++m) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      point[i] = domain_argument(f, i, se.eigenvalues[i](m), tol::kClusterRel * x[i].scale());
    }
    diag(m) = f.eval(point);
  }
  return HermitianMatrix::from_symmetrized((se.basis * diag.asDiagonal()) *
                                           se.basis.adjoint());
}

CompressionReport compression_check(const ScalarFunction& f,
                                    const std::vector<HermitianMatrix>& x) {
  const SimultaneousEigen se = simultaneous_diagonalize(x);
  const std::size_t k = x.size();
  const Eigen::Index n = se.basis.rows();

  Eigen::Index big = 1;
  for (std::size_t i = 0; i < k; ++i) big *= n;
  Matrix lifted(big, n);  // columns u_m (x) ... (x) u_m
  for (Eigen::Index m = 0; m < n; ++m) {
    Matrix col = Matrix::Identity(1, 1);
    for (std::size_t i = 0; i < k; ++i) col = kron(col, se.basis.col(m));
    lifted.col(m) = col.col(0);
  }

  const HermitianMatrix full = apply_multivariate(f, x);
  const Matrix compressed = lifted.adjoint() * full.matrix() * lifted;

  HermitianMatrix fcom = apply_commuting(f, x);
  CompressionReport report{0.0, 0.0, fcom};
  std::vector<double> point(k);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (std::size_t i = 0; i < k; ++i) {
      point[i] = domain_argument(f, i, se.eigenvalues[i](m), tol::kClusterRel * x[i].scale());
    }
    const double fm = f.eval(point);
    for (Eigen::Index q = 0; q < n; ++q) {
      const Complex expected = (m == q) ? Complex(fm) : Complex(0.0);
      report.max_deviation = std::max(report.max_deviation, std::abs(compressed(m, q) - expected));
    }
  }
  report.fcom_deviation =
      (se.basis * compressed * se.basis.adjoint() - report.fcom.matrix()).norm();
  return report;
}

}  // namespace loewner
