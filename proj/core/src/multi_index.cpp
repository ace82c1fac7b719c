#include "loewner/multi_index.hpp"

#include "loewner/errors.hpp"

namespace loewner {

void MonotonicityIndex::validate() const {
  if (l < 2) throw ConfigError("index: l must be at least 2, got " + std::to_string(l));
  if (j < 0 || j > l - 1) {
    throw ConfigError("index: j must lie in [0, " + std::to_string(l - 1) + "], got " +
                      std::to_string(j));
  }
}

MultiIndexSet enumerate_multi_indices(std::size_t k, int l, int j) {
  if (k == 0) throw ConfigError("enumerate_multi_indices: k must be positive");
  MonotonicityIndex{l, j}.validate();

  // The first k-1 coordinates range freely; the last is forced by the
  // congruence, so walking them lexicographically and solving for t_k gives
  // the full lexicographic order directly.
  MultiIndexSet set{k, l, j, {}};
  MultiIndex t(k, 1);
  for (;;) {
    int partial = 0;
    for (std::size_t i = 0; i + 1 < k; ++i) partial += t[i];
    int last = ((j - partial) % l + l) % l;
    if (last == 0) last = l;
    t[k - 1] = last;
    set.indices.push_back(t);

    std::size_t i = k - 1;
    for (;;) {
      if (i == 0) return set;
      --i;
      if (++t[i] <= l) break;
      t[i] = 1;
    }
  }
}

std::string to_string(const MultiIndex& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(t[i]);
  }
  return s + ")";
}

}  // namespace loewner
