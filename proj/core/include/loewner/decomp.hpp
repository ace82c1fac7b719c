#pragma once

// Decompositions x = y_1 + .. + y_l of positive definite matrices, their
// associated unitary rows, partitions of unity, and the root-of-unity
// projection families used when passing from index monotonicity to convexity.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "loewner/matrix.hpp"
#include "loewner/multi_index.hpp"
#include "loewner/random.hpp"

namespace loewner {

/// Positive definite parts summing to x.
struct Decomposition {
  HermitianMatrix x;
  std::vector<HermitianMatrix> parts;

  std::size_t length() const noexcept { return parts.size(); }
  /// ||sum parts - x||_F
  double sum_residual() const;
  /// smallest eigenvalue over all parts
  double min_part_margin() const;
};

/// y_i = x^{1/2} s^{-1/2} w_i s^{-1/2} x^{1/2} with s = sum w_i, for given
/// positive definite weights. Throws NotPositiveDefinite.
Decomposition decomposition_from_weights(const HermitianMatrix& x,
                                         std::span<const HermitianMatrix> weights);

/// Weights w_i = G_i G_i* + 0.05 I with standard complex Gaussian G_i.
/// Resamples (up to 16 times) when a part's margin falls to pd_floor.
Decomposition sample_decomposition(const HermitianMatrix& x, int l, Rng& rng);

/// (a_1, .., a_l) with sum a_i a_i* = I.
struct UnitaryRow {
  std::vector<Matrix> entries;

  std::size_t length() const noexcept { return entries.size(); }
  /// ||sum a_i a_i* - I||_F
  double row_residual() const;
  /// min over i of the smallest singular value of a_i
  double min_singular_value() const;
};

/// a_i = x^{-1/2} y_i^{1/2}. Satisfies a_i* x a_i = y_i.
UnitaryRow unitary_row(const Decomposition& d);

/// First block row of a Haar-random unitary on C^{l n}.
UnitaryRow sample_unitary_row(Eigen::Index n, int l, Rng& rng);

/// Orthogonal projections p_1 + .. + p_l = I with positive ranks.
struct PartitionOfUnity {
  std::vector<HermitianMatrix> projections;
  std::vector<int> ranks;

  std::size_t length() const noexcept { return projections.size(); }
  /// max of ||p_i^2 - p_i||_F, ||sum p_i - I||_F, ||p_i p_j||_F (i != j)
  double invariant_residual() const;
};

/// p_i = U (indicator of the i-th consecutive block of `ranks`) U*.
PartitionOfUnity partition_from_basis(const Matrix& u, std::span<const int> ranks);

/// Ranks uniform over compositions of n into l positive parts, U Haar.
/// Throws ConfigError when l > n.
PartitionOfUnity sample_partition_of_unity(Eigen::Index n, int l, Rng& rng);

/// beta^m for beta = e^{2 pi i / l}; m is reduced mod l first.
Complex root_of_unity_power(int l, long long m);

/// (P_j)_{pq} = beta^{(q - p) j} / l; j is taken mod l.
HermitianMatrix build_Pj(int l, int j);

/// (Q_s)_{pq} = sqrt(x_p x_q) beta^{(q - p) s} / (x_1 + .. + x_l).
HermitianMatrix build_Q(int s, std::span<const double> xvals);

/// Pi_u = l^{-(k-1)} (beta^{s.s - t.t + (t - s).u})_{t,s} over the index set
/// {t : |t| = j mod l} in canonical order. u is 1-based.
HermitianMatrix build_Pi_u(int l, int j, std::size_t k, const MultiIndex& u);

}  // namespace loewner
