#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "loewner/errors.hpp"
#include "loewner/matrix.hpp"

using namespace loewner;
using testing::oracle_eigenvalues;

TEST_SUITE("matrix") {

TEST_CASE("hermitian construction rejects skew input and symmetrizes exactly") {
  Matrix m(2, 2);
  m << Complex(1, 0), Complex(2, 1), Complex(2, -1), Complex(3, 0);
  HermitianMatrix h(m);
  CHECK(h(0, 1) == std::conj(h(1, 0)));
  CHECK(h(0, 0).imag() == 0.0);

  Matrix bad = m;
  bad(0, 1) = Complex(5, 0);
  CHECK_THROWS_AS(HermitianMatrix{bad}, NotHermitian);

  Rng rng(1);
  const Matrix g = testing::random_complex(5, rng);
  const HermitianMatrix s = HermitianMatrix::from_symmetrized(g + g.adjoint());
  for (Eigen::Index p = 0; p < 5; ++p)
    for (Eigen::Index q = 0; q < 5; ++q) CHECK(s(p, q) == std::conj(s(q, p)));
}

TEST_CASE("eig of diag(3,1,2) sorts and returns permutation vectors") {
  const EigenSystem es = eig_hermitian(HermitianMatrix::diagonal({3.0, 1.0, 2.0}));
  CHECK(es.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(es.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(es.eigenvalues(2) == doctest::Approx(3.0));
  for (Eigen::Index p = 0; p < 3; ++p) {
    for (Eigen::Index q = 0; q < 3; ++q) {
      const double a = std::abs(es.eigenvectors(p, q));
      CHECK((a == doctest::Approx(0.0) || a == doctest::Approx(1.0)));
    }
  }
  CHECK(std::abs(es.eigenvectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(es.eigenvectors(2, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(es.eigenvectors(0, 2)) == doctest::Approx(1.0));
}

TEST_CASE("eig of the swap matrix") {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  const EigenSystem es = eig_hermitian(HermitianMatrix(m));
  CHECK(es.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(es.eigenvalues(1) == doctest::Approx(1.0));
}

TEST_CASE("eig residuals on n=16 seed 42") {
  Rng rng(42);
  const HermitianMatrix m = random_hermitian(16, rng);
  const EigenSystem es = eig_hermitian(m);
  const Matrix resid = m.matrix() * es.eigenvectors - es.eigenvectors * es.eigenvalues.asDiagonal();
  CHECK(resid.norm() <= 1e-10 * m.frobenius());
}

TEST_CASE("eig property: residual, unitarity and oracle agreement for n <= 32") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = trial_stream(seed, 0, 77);
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed % 32);
    const HermitianMatrix m = random_hermitian(n, rng);
    const EigenSystem es = eig_hermitian(m);
    const double scale = m.scale();
    const Matrix& v = es.eigenvectors;
    CHECK((m.matrix() * v - v * es.eigenvalues.asDiagonal()).norm() <= 1e-10 * scale);
    CHECK((v.adjoint() * v - Matrix::Identity(n, n)).norm() <= 1e-10);
    const RealVector want = oracle_eigenvalues(m.matrix());
    CHECK((es.eigenvalues - want).norm() <= 1e-10 * scale);
    for (Eigen::Index i = 1; i < n; ++i) CHECK(es.eigenvalues(i - 1) <= es.eigenvalues(i));
  }
}

TEST_CASE("eig handles repeated eigenvalues") {
  Rng rng(5);
  const std::vector<double> spec{2.0, 2.0, 2.0, -1.0};
  const HermitianMatrix m = random_with_spectrum(spec, rng);
  const EigenSystem es = eig_hermitian(m);
  CHECK(es.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) CHECK(es.eigenvalues(i) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK((m.matrix() * es.eigenvectors - es.eigenvectors * es.eigenvalues.asDiagonal()).norm() <=
        1e-10 * m.scale());
}

TEST_CASE("kron examples") {
  Matrix b(2, 2);
  b << Complex(1, 0), Complex(2, 1), Complex(3, 0), Complex(4, -1);
  const Matrix k = kron(Matrix::Identity(2, 2), b);
  CHECK(k.block(0, 0, 2, 2) == b);
  CHECK(k.block(2, 2, 2, 2) == b);
  CHECK(k.block(0, 2, 2, 2).norm() == 0.0);
  CHECK(k.block(2, 0, 2, 2).norm() == 0.0);

  const Matrix d = kron(HermitianMatrix::diagonal({2.0, 3.0}).matrix(),
                        HermitianMatrix::diagonal({5.0, 7.0}).matrix());
  CHECK(d == HermitianMatrix::diagonal({10.0, 14.0, 15.0, 21.0}).matrix());
}

TEST_CASE("kron block layout and mixed-product identity") {
  Rng rng(7);
  const Matrix a = testing::random_complex(3, rng);
  const Matrix c = testing::random_complex(3, rng);
  const Matrix b = testing::random_complex(2, rng);
  const Matrix d = testing::random_complex(2, rng);
  CHECK((kron(a, b) - testing::oracle_kron(a, b)).norm() == 0.0);
  CHECK((kron(a, b) * kron(c, d) - kron(a * c, b * d)).norm() <= 1e-10 * kron(a * c, b * d).norm());
  const std::vector<Matrix> fs{a, b, c};
  CHECK((kron_all(fs) - testing::oracle_kron_all(fs)).norm() == 0.0);
  CHECK(kron_all(std::vector<Matrix>{}).rows() == 1);
}

TEST_CASE("is_psd examples") {
  const PsdVerdict id = is_psd(HermitianMatrix::identity(3));
  CHECK(id.is_psd);
  CHECK(id.margin == doctest::Approx(1.0));

  const PsdVerdict neg = is_psd(HermitianMatrix::diagonal({1.0, -1e-3}));
  CHECK_FALSE(neg.is_psd);
  CHECK(neg.margin == doctest::Approx(-1e-3));

  const PsdVerdict edge = is_psd(HermitianMatrix::diagonal({0.0, 2.0}));
  CHECK(edge.is_psd);
  CHECK(edge.margin == doctest::Approx(0.0));
  CHECK(edge.tolerance_used == doctest::Approx(1e-9 * 2.0));

  const PsdVerdict explicit_tol = is_psd(HermitianMatrix::diagonal({1.0, -1e-3}), 1e-2);
  CHECK(explicit_tol.is_psd);
}

TEST_CASE("is_psd sign flip for negative definite inputs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const HermitianMatrix p = testing::random_pd_in(4, 0.5, 3.0, rng);
    const HermitianMatrix n = -1.0 * p;
    const PsdVerdict vp = is_psd(p);
    const PsdVerdict vn = is_psd(n);
    CHECK(vp.is_psd);
    CHECK_FALSE(vn.is_psd);
    const double max_p = testing::oracle_eigenvalues(p.matrix()).maxCoeff();
    CHECK(vn.margin == doctest::Approx(-max_p).epsilon(1e-10));
    CHECK(vp.is_psd == (vp.margin >= -vp.tolerance_used));
  }
}

TEST_CASE("sqrt_pd and inv_sqrt_pd examples") {
  const HermitianMatrix d = HermitianMatrix::diagonal({4.0, 9.0});
  CHECK((sqrt_pd(d).matrix() - HermitianMatrix::diagonal({2.0, 3.0}).matrix()).norm() <= 1e-14);
  CHECK((inv_sqrt_pd(d).matrix() - HermitianMatrix::diagonal({0.5, 1.0 / 3.0}).matrix()).norm() <=
        1e-14);
  const HermitianMatrix id = HermitianMatrix::identity(4);
  CHECK((sqrt_pd(id).matrix() - id.matrix()).norm() <= 1e-14);

  Rng rng(3);
  const HermitianMatrix m = random_pd(8, rng);
  const Matrix s = sqrt_pd(m).matrix();
  CHECK((s * s - m.matrix()).norm() <= 1e-10 * m.frobenius());
  const Matrix is = inv_sqrt_pd(m).matrix();
  CHECK((is * m.matrix() * is - Matrix::Identity(8, 8)).norm() <= 1e-10 * m.scale());
}

TEST_CASE("sqrt_pd rejects non positive definite input with its margin") {
  try {
    (void)sqrt_pd(HermitianMatrix::diagonal({1.0, -0.25}));
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.margin() == doctest::Approx(-0.25));
  }
  CHECK_THROWS_AS(inv_sqrt_pd(HermitianMatrix::diagonal({0.0, 1.0})), NotPositiveDefinite);
}

TEST_CASE("sqrt_pd commutes with unitary conjugation") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(100 + seed);
    const Matrix u = haar_unitary(5, rng);
    const std::vector<double> spec{0.3, 1.0, 2.0, 4.0, 7.5};
    std::vector<double> roots;
    for (double v : spec) roots.push_back(std::sqrt(v));
    const HermitianMatrix m = HermitianMatrix::from_symmetrized(
        u * HermitianMatrix::diagonal(spec).matrix() * u.adjoint());
    const Matrix want = u * HermitianMatrix::diagonal(roots).matrix() * u.adjoint();
    CHECK((sqrt_pd(m).matrix() - want).norm() <= 1e-9);
  }
}

TEST_CASE("block assembly") {
  Rng rng(11);
  const Matrix b = testing::random_complex(3, rng);
  CHECK(assemble_block(1, 3, [&](std::size_t, std::size_t) { return b; }).assemble() == b);

  const Matrix d0 = testing::random_complex(2, rng);
  const Matrix d1 = testing::random_complex(2, rng);
  const Matrix diag = assemble_block(2, 2, [&](std::size_t p, std::size_t q) {
                        if (p != q) return Matrix(Matrix::Zero(2, 2));
                        return p == 0 ? d0 : d1;
                      }).assemble();
  CHECK(diag.block(0, 0, 2, 2) == d0);
  CHECK(diag.block(2, 2, 2, 2) == d1);
  CHECK(diag.block(0, 2, 2, 2).norm() == 0.0);

  std::vector<Matrix> blocks;
  for (int i = 0; i < 4; ++i) blocks.push_back(testing::random_complex(2, rng));
  const BlockMatrix grid = assemble_block(2, 2, [&](std::size_t p, std::size_t q) { return blocks[p * 2 + q]; });
  CHECK(grid.dim() == 4);
  const Matrix full = grid.assemble();
  CHECK(full(2, 3) == blocks[3](0, 1));
  CHECK(full(1, 2) == blocks[1](1, 0));

  BlockMatrix bm(2, 2);
  CHECK_THROWS_AS(bm.set(0, 0, Matrix::Zero(3, 3)), DimensionMismatch);
}

}  // TEST_SUITE
