#include "loewner/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "loewner/errors.hpp"
#include "loewner/tolerances.hpp"

namespace loewner {

double Decomposition::sum_residual() const {
  Matrix sum = Matrix::Zero(x.dim(), x.dim());
  for (const auto& p : parts) sum += p.matrix();
  return (sum - x.matrix()).norm();
}

double Decomposition::min_part_margin() const {
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& p : parts) margin = std::min(margin, eig_hermitian(p).eigenvalues(0));
  return margin;
}

Decomposition decomposition_from_weights(const HermitianMatrix& x,
                                         std::span<const HermitianMatrix> weights) {
  if (weights.size() < 2) throw ConfigError("decomposition: need at least two parts");
  Matrix s = Matrix::Zero(x.dim(), x.dim());
  for (const auto& w : weights) {
    if (w.dim() != x.dim()) throw DimensionMismatch("decomposition: weight dimension mismatch");
    s += w.matrix();
  }
  const HermitianMatrix x_half = sqrt_pd(x);
  const HermitianMatrix s_inv_half = inv_sqrt_pd(HermitianMatrix::from_symmetrized(s));
  const Matrix t = x_half.matrix() * s_inv_half.matrix();

  Decomposition d{x, {}};
  d.parts.reserve(weights.size());
  for (const auto& w : weights) {
    d.parts.push_back(HermitianMatrix::from_symmetrized(t * w.matrix() * t.adjoint()));
  }
  return d;
}

Decomposition sample_decomposition(const HermitianMatrix& x, int l, Rng& rng) {
  if (l < 2) throw ConfigError("sample_decomposition: l must be at least 2");
  constexpr int kAttempts = 16;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::vector<HermitianMatrix> weights;
    weights.reserve(static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i) weights.push_back(random_pd(x.dim(), rng, 0.05));
    Decomposition d = decomposition_from_weights(x, weights);
    const bool ok = std::all_of(d.parts.begin(), d.parts.end(), [](const HermitianMatrix& p) {
      return eig_hermitian(p).eigenvalues(0) > pd_floor(p);
    });
    if (ok) return d;
  }
  throw NotPositiveDefinite("sample_decomposition: could not produce positive definite parts",
                            0.0);
}

double UnitaryRow::row_residual() const {
  const Eigen::Index n = entries.front().rows();
  Matrix sum = Matrix::Zero(n, n);
  for (const auto& a : entries) sum += a * a.adjoint();
  return (sum - Matrix::Identity(n, n)).norm();
}

double UnitaryRow::min_singular_value() const {
  double smin = std::numeric_limits<double>::infinity();
  for (const auto& a : entries) {
    const double lam = eig_hermitian(HermitianMatrix::from_symmetrized(a.adjoint() * a))
                           .eigenvalues(0);
    smin = std::min(smin, std::sqrt(std::max(lam, 0.0)));
  }
  return smin;
}

UnitaryRow unitary_row(const Decomposition& d) {
  const HermitianMatrix x_inv_half = inv_sqrt_pd(d.x);
  UnitaryRow row;
  row.entries.reserve(d.parts.size());
  for (const auto& y : d.parts) {
    if (y.dim() != d.x.dim()) throw DimensionMismatch("unitary_row: part dimension mismatch");
    row.entries.push_back(x_inv_half.matrix() * sqrt_pd(y).matrix());
  }
  return row;
}

UnitaryRow sample_unitary_row(Eigen::Index n, int l, Rng& rng) {
  if (l < 1) throw ConfigError("sample_unitary_row: l must be positive");
  const Matrix u = haar_unitary(n * l, rng);
  UnitaryRow row;
  for (int i = 0; i < l; ++i) row.entries.push_back(u.block(0, i * n, n, n));
  return row;
}

double PartitionOfUnity::invariant_residual() const {
  const Eigen::Index n = projections.front().dim();
  double r = 0.0;
  Matrix sum = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < projections.size(); ++i) {
    const Matrix& p = projections[i].matrix();
    sum += p;
    r = std::max(r, (p * p - p).norm());
    for (std::size_t j = i + 1; j < projections.size(); ++j) {
      r = std::max(r, (p * projections[j].matrix()).norm());
    }
  }
  return std::max(r, (sum - Matrix::Identity(n, n)).norm());
}

PartitionOfUnity partition_from_basis(const Matrix& u, std::span<const int> ranks) {
  const int total = std::accumulate(ranks.begin(), ranks.end(), 0);
  if (u.rows() != u.cols() || total != u.rows()) {
    throw DimensionMismatch("partition_from_basis: ranks must sum to the dimension");
  }
  PartitionOfUnity part;
  Eigen::Index offset = 0;
  for (int r : ranks) {
    if (r < 1) throw ConfigError("partition_from_basis: ranks must be positive");
    const Matrix cols = u.middleCols(offset, r);
    part.projections.push_back(HermitianMatrix::from_symmetrized(cols * cols.adjoint()));
    part.ranks.push_back(r);
    offset += r;
  }
  return part;
}

PartitionOfUnity sample_partition_of_unity(Eigen::Index n, int l, Rng& rng) {
  if (l < 1 || l > n) {
    throw ConfigError("sample_partition_of_unity: need 1 <= l <= n (l=" + std::to_string(l) +
                      ", n=" + std::to_string(n) + ")");
  }
  // A composition of n into l positive parts is a choice of l-1 distinct cut
  // points in {1, .., n-1}.
  std::vector<int> cuts(static_cast<std::size_t>(n - 1));
  std::iota(cuts.begin(), cuts.end(), 1);
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(static_cast<std::size_t>(l - 1));
  std::sort(cuts.begin(), cuts.end());
  std::vector<int> ranks;
  int prev = 0;
  for (int c : cuts) {
    ranks.push_back(c - prev);
    prev = c;
  }
  ranks.push_back(static_cast<int>(n) - prev);
  return partition_from_basis(haar_unitary(n, rng), ranks);
}

Complex root_of_unity_power(int l, long long m) {
  const long long r = ((m % l) + l) % l;
  if (r == 0) return Complex(1.0, 0.0);
  if (2 * r == l) return Complex(-1.0, 0.0);
  if (4 * r == l) return Complex(0.0, 1.0);
  if (4 * r == 3LL * l) return Complex(0.0, -1.0);
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / l;
  return std::polar(1.0, angle);
}

HermitianMatrix build_Pj(int l, int j) {
  if (l < 1) throw ConfigError("build_Pj: l must be positive");
  Matrix p(l, l);
  for (int a = 0; a < l; ++a) {
    for (int b = 0; b < l; ++b) {
      p(a, b) = root_of_unity_power(l, static_cast<long long>(b - a) * j) / static_cast<double>(l);
    }
  }
  return HermitianMatrix::from_symmetrized(p);
}

HermitianMatrix build_Q(int s, std::span<const double> xvals) {
  const int l = static_cast<int>(xvals.size());
  if (l < 1) throw ConfigError("build_Q: need at least one value");
  double total = 0.0;
  for (double v : xvals) {
    if (!(v > 0.0)) throw DomainError("build_Q: values must be strictly positive");
    total += v;
  }
  Matrix q(l, l);
  for (int a = 0; a < l; ++a) {
    for (int b = 0; b < l; ++b) {
      q(a, b) = std::sqrt(xvals[static_cast<std::size_t>(a)] * xvals[static_cast<std::size_t>(b)]) *
                root_of_unity_power(l, static_cast<long long>(b - a) * s) / total;
    }
  }
  return HermitianMatrix::from_symmetrized(q);
}

HermitianMatrix build_Pi_u(int l, int j, std::size_t k, const MultiIndex& u) {
  if (u.size() != k) throw ConfigError("build_Pi_u: u must have k entries");
  for (int ui : u) {
    if (ui < 1 || ui > l) throw ConfigError("build_Pi_u: entries of u must lie in 1..l");
  }
  const MultiIndexSet set = enumerate_multi_indices(k, l, j);
  const auto m = static_cast<Eigen::Index>(set.size());

  auto dot = [](const MultiIndex& a, const MultiIndex& b) {
    long long s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long long>(a[i]) * b[i];
    return s;
  };

  const double norm = std::pow(static_cast<double>(l), -static_cast<double>(k - 1));
  Matrix pi(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const MultiIndex& t = set[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < m; ++b) {
      const MultiIndex& s = set[static_cast<std::size_t>(b)];
      const long long exponent = dot(s, s) - dot(t, t) + dot(t, u) - dot(s, u);
      pi(a, b) = norm * root_of_unity_power(l, exponent);
    }
  }
  return HermitianMatrix::from_symmetrized(pi);
}

}  // namespace loewner
