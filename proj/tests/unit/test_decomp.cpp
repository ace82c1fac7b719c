#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "loewner/decomp.hpp"
#include "loewner/errors.hpp"
#include "loewner/multi_index.hpp"

using namespace loewner;

namespace {

Matrix real2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

std::vector<MultiIndex> brute_force(std::size_t k, int l, int j) {
  std::vector<MultiIndex> out;
  MultiIndex t(k, 1);
  while (true) {
    int sum = 0;
    for (int v : t) sum += v;
    if (sum % l == j) out.push_back(t);
    std::size_t i = k;
    while (i > 0 && t[i - 1] == l) t[--i] = 1;
    if (i == 0) break;
    ++t[i - 1];
  }
  return out;
}

std::vector<MultiIndex> all_u(std::size_t k, int l) {
  std::vector<MultiIndex> out;
  for (int j = 0; j < l; ++j)
    for (auto& t : brute_force(k, l, j)) out.push_back(t);
  return out;
}

}  // namespace

TEST_SUITE("decomp") {

TEST_CASE("scalar decomposition from weights") {
  const HermitianMatrix x = HermitianMatrix::diagonal({5.0});
  const std::vector<HermitianMatrix> w{HermitianMatrix::diagonal({0.2}), HermitianMatrix::diagonal({0.8})};
  const Decomposition d = decomposition_from_weights(x, w);
  REQUIRE(d.length() == 2);
  CHECK(d.parts[0](0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.parts[1](0, 0).real() == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("equal weights split the identity evenly") {
  const HermitianMatrix x = HermitianMatrix::identity(3);
  const std::vector<HermitianMatrix> w(3, HermitianMatrix::identity(3));
  const Decomposition d = decomposition_from_weights(x, w);
  for (const auto& p : d.parts) CHECK((p.matrix() - Matrix::Identity(3, 3) / 3.0).norm() <= 1e-14);
}

TEST_CASE("sampled decomposition seed 21") {
  Rng rng(21);
  const HermitianMatrix x = random_pd(4, rng);
  const Decomposition d = sample_decomposition(x, 3, rng);
  CHECK(d.sum_residual() <= 1e-11);
  CHECK(d.min_part_margin() > 0.0);
  CHECK_THROWS_AS(decomposition_from_weights(HermitianMatrix::diagonal({1.0, -1.0}),
                                             std::vector<HermitianMatrix>(2, HermitianMatrix::identity(2))),
                  NotPositiveDefinite);
}

TEST_CASE("decomposition invariants over 500 seeds") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng = trial_stream(seed, 0, 11);
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed % 6);
    const int l = 2 + static_cast<int>(seed % 3);
    const HermitianMatrix x = random_pd(n, rng);
    const Decomposition d = sample_decomposition(x, l, rng);
    CHECK(d.length() == static_cast<std::size_t>(l));
    CHECK(d.sum_residual() <= 1e-10 * std::max(1.0, x.frobenius()));
    for (const auto& p : d.parts) CHECK(testing::oracle_min_eigenvalue(p.matrix()) > pd_floor(p));
  }
}

TEST_CASE("scalar unitary row") {
  const HermitianMatrix x = HermitianMatrix::diagonal({4.0});
  const std::vector<HermitianMatrix> w{HermitianMatrix::diagonal({1.0}), HermitianMatrix::diagonal({3.0})};
  const UnitaryRow row = unitary_row(decomposition_from_weights(x, w));
  CHECK(row.entries[0](0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(row.entries[1](0, 0).real() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
  CHECK(row.row_residual() <= 1e-14);
}

TEST_CASE("unitary row residuals and reconstruction") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed == 0 ? 2 : seed + 1000);
    const HermitianMatrix x = random_pd(4, rng);
    const Decomposition d = sample_decomposition(x, 3, rng);
    const UnitaryRow row = unitary_row(d);
    CHECK(row.row_residual() <= 1e-10);
    CHECK(row.min_singular_value() > 0.0);
    for (std::size_t i = 0; i < row.length(); ++i) {
      const Matrix& a = row.entries[i];
      CHECK((a.adjoint() * x.matrix() * a - d.parts[i].matrix()).norm() <= 1e-9 * x.scale());
    }
  }
  Rng rng(6);
  const UnitaryRow haar = sample_unitary_row(3, 2, rng);
  CHECK(haar.row_residual() <= 1e-10);
}

TEST_CASE("partition from the standard basis is coordinate projections") {
  const std::vector<int> ranks{1, 1, 1};
  const PartitionOfUnity p = partition_from_basis(Matrix::Identity(3, 3), ranks);
  for (int i = 0; i < 3; ++i) {
    Matrix e = Matrix::Zero(3, 3);
    e(i, i) = 1.0;
    CHECK((p.projections[static_cast<std::size_t>(i)].matrix() - e).norm() == 0.0);
  }
}

TEST_CASE("partition from the Hadamard basis") {
  const Matrix h = real2(1, 1, 1, -1) / std::sqrt(2.0);
  const std::vector<int> ranks{1, 1};
  const PartitionOfUnity p = partition_from_basis(h, ranks);
  CHECK((p.projections[0].matrix() - real2(0.5, 0.5, 0.5, 0.5)).norm() <= 1e-15);
  CHECK((p.projections[1].matrix() - real2(0.5, -0.5, -0.5, 0.5)).norm() <= 1e-15);
}

TEST_CASE("sampled partitions of unity") {
  Rng rng(8);
  const PartitionOfUnity p = sample_partition_of_unity(6, 3, rng);
  CHECK(p.invariant_residual() <= 1e-10);
  int total = 0;
  for (int r : p.ranks) {
    CHECK(r >= 1);
    total += r;
  }
  CHECK(total == 6);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(p.projections[i].matrix().trace().real() == doctest::Approx(p.ranks[i]).epsilon(1e-12));
  }
  Rng rng2(1);
  CHECK_THROWS_AS(sample_partition_of_unity(2, 3, rng2), ConfigError);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng r = trial_stream(seed, 0, 5);
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(seed % 5);
    CHECK(sample_partition_of_unity(n, 3, r).invariant_residual() <= 1e-9);
  }
}

TEST_CASE("P_j for l = 2") {
  CHECK((build_Pj(2, 1).matrix() - real2(0.5, -0.5, -0.5, 0.5)).norm() <= 1e-15);
  CHECK((build_Pj(2, 2).matrix() - real2(0.5, 0.5, 0.5, 0.5)).norm() <= 1e-15);
  CHECK((build_Pj(2, 0).matrix() - build_Pj(2, 2).matrix()).norm() == 0.0);
}

TEST_CASE("P_j are mutually orthogonal and sum to the identity") {
  for (int l = 2; l <= 5; ++l) {
    Matrix sum = Matrix::Zero(l, l);
    for (int j = 1; j <= l; ++j) {
      const Matrix pj = build_Pj(l, j).matrix();
      sum += pj;
      CHECK((pj * pj - pj).norm() <= 1e-12);
      for (int i = 1; i < j; ++i) CHECK((build_Pj(l, i).matrix() * pj).norm() <= 1e-12);
    }
    CHECK((sum - Matrix::Identity(l, l)).norm() <= 1e-12);
  }
}

TEST_CASE("root of unity powers stay on the unit circle") {
  for (int l = 2; l <= 7; ++l)
    for (long long m = -20; m <= 20; ++m) {
      CHECK(std::abs(root_of_unity_power(l, m)) == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(std::abs(root_of_unity_power(l, m) - root_of_unity_power(l, m + l)) == 0.0);
    }
  CHECK(root_of_unity_power(4, 1).imag() == doctest::Approx(1.0));
}

TEST_CASE("Q with equal weights reduces to P") {
  const std::vector<double> x{2.0, 2.0, 2.0};
  for (int s = 0; s < 3; ++s) CHECK((build_Q(s, x).matrix() - build_Pj(3, s).matrix()).norm() <= 1e-14);
}

TEST_CASE("Q identity, trace and idempotence") {
  const std::vector<double> x{1.0, 3.0};
  const Matrix sq = HermitianMatrix::diagonal({1.0, std::sqrt(3.0)}).matrix();
  CHECK((sq * build_Pj(2, 1).matrix() * sq - 2.0 * build_Q(1, x).matrix()).norm() <= 1e-12);

  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int l = 2 + trial % 4;
    std::vector<double> xs;
    double total = 0.0;
    for (int i = 0; i < l; ++i) {
      xs.push_back(log_uniform(0.01, 100.0, rng));
      total += xs.back();
    }
    std::vector<double> roots;
    for (double v : xs) roots.push_back(std::sqrt(v));
    const Matrix r = HermitianMatrix::diagonal(roots).matrix();
    for (int s = 0; s < l; ++s) {
      const Matrix q = build_Q(s, xs).matrix();
      CHECK(q.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK((q * q - q).norm() <= 1e-12);
      CHECK((q - q.adjoint()).norm() <= 1e-12);
      CHECK((r * build_Pj(l, s).matrix() * r - (total / l) * q).norm() <= 1e-12 * std::max(1.0, total));
    }
  }
  CHECK_THROWS_AS(build_Q(0, std::vector<double>{1.0, 0.0}), DomainError);
}

TEST_CASE("Pi_u example") {
  const Matrix half = Matrix::Constant(2, 2, Complex(0.5, 0.0));
  CHECK((build_Pi_u(2, 0, 2, {1, 1}).matrix() - half).norm() <= 1e-15);
  CHECK_THROWS_AS(build_Pi_u(2, 0, 2, {1, 3}), ConfigError);
  CHECK_THROWS_AS(build_Pi_u(2, 0, 2, {1}), ConfigError);
}

TEST_CASE("Pi_u sums, idempotence and shift classes") {
  for (int l = 2; l <= 3; ++l) {
    for (std::size_t k = 2; k <= 3; ++k) {
      const auto m = static_cast<Eigen::Index>(std::pow(l, k - 1));
      const auto us = all_u(k, l);
      for (int j = 0; j < l; ++j) {
        CAPTURE(l);
        CAPTURE(k);
        CAPTURE(j);
        Matrix sum = Matrix::Zero(m, m);
        std::vector<Matrix> pis;
        for (const auto& u : us) {
          const Matrix pi = build_Pi_u(l, j, k, u).matrix();
          CHECK((pi - pi.adjoint()).norm() <= 1e-10);
          CHECK((pi * pi - pi).norm() <= 1e-10);
          sum += pi;
          pis.push_back(pi);
        }
        CHECK((sum - static_cast<double>(l) * Matrix::Identity(m, m)).norm() <= 1e-10);

        for (std::size_t a = 0; a < us.size(); ++a) {
          for (std::size_t b = 0; b < us.size(); ++b) {
            bool shifted = false;
            for (int i = 0; i < l && !shifted; ++i) {
              bool same = true;
              for (std::size_t c = 0; c < k; ++c) same = same && ((us[a][c] - 1 + i) % l + 1 == us[b][c]);
              shifted = same;
            }
            if (shifted) {
              CHECK((pis[a] - pis[b]).norm() <= 1e-10);
            } else {
              CHECK((pis[a] * pis[b]).norm() <= 1e-10);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("listed multi-index sets") {
  using V = std::vector<MultiIndex>;
  CHECK(enumerate_multi_indices(2, 2, 0).indices == V{{1, 1}, {2, 2}});
  CHECK(enumerate_multi_indices(2, 2, 1).indices == V{{1, 2}, {2, 1}});
  CHECK(enumerate_multi_indices(2, 3, 0).indices == V{{1, 2}, {2, 1}, {3, 3}});
  CHECK(enumerate_multi_indices(3, 2, 0).indices == V{{1, 1, 2}, {1, 2, 1}, {2, 1, 1}, {2, 2, 2}});
  CHECK(to_string(MultiIndex{1, 2, 3}) == "(1,2,3)");
}

TEST_CASE("multi-index sets match brute force and have l^(k-1) elements") {
  for (int l = 2; l <= 6; ++l)
    for (std::size_t k = 1; k <= 4; ++k)
      for (int j = 0; j < l; ++j) {
        const MultiIndexSet s = enumerate_multi_indices(k, l, j);
        CHECK(s.size() == static_cast<std::size_t>(std::pow(l, k - 1)));
        CHECK(s.indices == brute_force(k, l, j));
      }
}

TEST_CASE("monotonicity index validation") {
  CHECK_NOTHROW((MonotonicityIndex{2, 1}.validate()));
  CHECK_THROWS_AS((MonotonicityIndex{1, 0}.validate()), ConfigError);
  CHECK_THROWS_AS((MonotonicityIndex{3, 3}.validate()), ConfigError);
  CHECK_THROWS_AS((MonotonicityIndex{3, -1}.validate()), ConfigError);
}

}  // TEST_SUITE
