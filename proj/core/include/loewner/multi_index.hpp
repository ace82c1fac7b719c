#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace loewner {

/// t = (t_1, .., t_k) with 1 <= t_i <= l (1-based, as reported in witnesses).
using MultiIndex = std::vector<int>;

/// A monotonicity index (l, j): l >= 2, 0 <= j <= l - 1.
struct MonotonicityIndex {
  int l = 2;
  int j = 0;

  /// Throws ConfigError when l < 2 or j is outside [0, l - 1].
  void validate() const;
  friend bool operator==(const MonotonicityIndex&, const MonotonicityIndex&) = default;
};

/// All t in {1..l}^k with t_1 + .. + t_k = j (mod l), ascending lexicographic.
/// Has exactly l^(k-1) elements.
struct MultiIndexSet {
  std::size_t k = 0;
  int l = 0;
  int j = 0;
  std::vector<MultiIndex> indices;

  std::size_t size() const noexcept { return indices.size(); }
  const MultiIndex& operator[](std::size_t i) const { return indices[i]; }
};

MultiIndexSet enumerate_multi_indices(std::size_t k, int l, int j);

std::string to_string(const MultiIndex& t);

}  // namespace loewner
