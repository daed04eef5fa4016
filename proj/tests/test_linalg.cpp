#include <doctest.h>

#include <cmath>
#include <vector>

#include "beamsel/linalg.hpp"
#include "test_support.hpp"

using namespace beamsel;
using test_support::max_abs_diff;
using test_support::random_matrix;
using test_support::random_pd;
using test_support::rel_close;
using test_support::test_stream;

namespace {
const ComplexMatrix kFixture{{1.0, 0.0, 1.0}, {0.0, 1.0, 1.0}};
}

TEST_CASE("matrix constructors enforce shape and finiteness") {
  CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<cdouble>(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      ComplexMatrix(1, 1,
                    std::vector<cdouble>{
                        cdouble{std::nan(""), 0.0}}),
      std::invalid_argument);
  CHECK_THROWS_AS((ComplexMatrix{{1.0, 2.0}, {1.0}}), std::invalid_argument);
}

TEST_CASE("gram of the hand fixture") {
  const auto g = gram(kFixture);
  CHECK(g(0, 0) == cdouble{2.0, 0.0});
  CHECK(g(0, 1) == cdouble{1.0, 0.0});
  CHECK(g(1, 0) == cdouble{1.0, 0.0});
  CHECK(g(1, 1) == cdouble{2.0, 0.0});
}

TEST_CASE("gram trivial cases") {
  const auto gi = gram(ComplexMatrix::identity(2));
  CHECK(max_abs_diff(gi.matrix(), ComplexMatrix::identity(2)) == 0.0);

  const auto gz = gram(ComplexMatrix(2, 3));
  CHECK(gz.matrix().frobenius_norm() == 0.0);

  CHECK_THROWS_AS(gram(ComplexMatrix(3, 2)), std::invalid_argument);
}

TEST_CASE("hermitian inverse of the fixture Gram") {
  const auto inv = hermitian_inverse(gram(kFixture));
  CHECK(rel_close(inv(0, 0).real(), 2.0 / 3.0, 1e-12));
  CHECK(rel_close(inv(0, 1).real(), -1.0 / 3.0, 1e-12));
  CHECK(rel_close(inv(1, 1).real(), 2.0 / 3.0, 1e-12));

  const auto id = hermitian_inverse(HermitianMatrix::identity(4));
  CHECK(max_abs_diff(id.matrix(), ComplexMatrix::identity(4)) < 1e-15);
}

TEST_CASE("rank-deficient Gram raises SingularGram with the pivot index") {
  const HermitianMatrix g{ComplexMatrix{{1.0, 1.0}, {1.0, 1.0}}};
  CHECK_THROWS_AS(hermitian_inverse(g), SingularGram);
  try {
    hermitian_inverse(g);
  } catch (const SingularGram& e) {
    CHECK(e.pivot_index() == 1);
  }
}

TEST_CASE("trace_inverse known values") {
  CHECK(rel_close(trace_inverse(gram(kFixture)), 4.0 / 3.0, 1e-12));
  CHECK(rel_close(trace_inverse(HermitianMatrix::identity(5)), 5.0, 1e-12));
  const HermitianMatrix d{ComplexMatrix{{2.0, 0.0}, {0.0, 4.0}}};
  CHECK(rel_close(trace_inverse(d), 0.75, 1e-12));
}

TEST_CASE("inverse round-trips against the defining property") {
  auto rng = test_stream(10);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 1 + (rng.next_u32() % 8);
    const auto g = random_pd(rng, n);
    const auto inv = hermitian_inverse(g);
    const auto prod = g.matrix() * inv.matrix();
    CHECK(max_abs_diff(prod, ComplexMatrix::identity(n)) < 1e-10);
  }
}

TEST_CASE("sherman-morrison downdate hand cases") {
  const ComplexMatrix g_inv_entries{
      {2.0 / 3.0, -1.0 / 3.0}, {-1.0 / 3.0, 2.0 / 3.0}};
  const HermitianMatrix g_inv{g_inv_entries};
  const std::vector<cdouble> h{1.0, 1.0};
  const auto out = sherman_morrison_downdate(g_inv, h);
  REQUIRE(out.feasible);
  CHECK(rel_close(out.denominator, 1.0 / 3.0, 1e-12));
  CHECK(max_abs_diff(out.updated_inverse->matrix(),
                     ComplexMatrix::identity(2)) < 1e-12);

  const auto unchanged = sherman_morrison_downdate(
      HermitianMatrix::identity(2), std::vector<cdouble>{0.0, 0.0});
  REQUIRE(unchanged.feasible);
  CHECK(unchanged.denominator == 1.0);
  CHECK(max_abs_diff(unchanged.updated_inverse->matrix(),
                     ComplexMatrix::identity(2)) == 0.0);

  const auto broken = sherman_morrison_downdate(
      HermitianMatrix::identity(2), std::vector<cdouble>{1.0, 0.0});
  CHECK_FALSE(broken.feasible);
  CHECK(std::abs(broken.denominator) < 1e-12);
  CHECK_FALSE(broken.updated_inverse.has_value());
}

TEST_CASE("downdate agrees with direct inversion on random instances") {
  auto rng = test_stream(11);
  int feasible_count = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + (rng.next_u32() % 8);
    const auto h_mat = random_matrix(rng, n, n + 2);
    const auto g = gram(h_mat);
    const auto g_inv = hermitian_inverse(g);
    const auto col = h_mat.column(rng.next_u32() % h_mat.cols());

    const auto fast = sherman_morrison_downdate(g_inv, col);

    ComplexMatrix gd = g.matrix();
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        gd(r, c) -= col[r] * std::conj(col[c]);
      }
    }
    if (!fast.feasible) continue;
    ++feasible_count;
    const auto direct = hermitian_inverse(HermitianMatrix(std::move(gd)));
    const double scale = direct.matrix().frobenius_norm();
    ComplexMatrix diff = fast.updated_inverse->matrix();
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) diff(r, c) -= direct(r, c);
    }
    CHECK(diff.frobenius_norm() <= 1e-9 * scale);
  }
  CHECK(feasible_count > 900);
}

TEST_CASE("downdate quadratic form stays within [0, 1] for channel columns") {
  auto rng = test_stream(12);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 2 + (rng.next_u32() % 5);
    const auto h = random_matrix(rng, n, n + 3);
    const auto g_inv = hermitian_inverse(gram(h));
    for (std::size_t c = 0; c < h.cols(); ++c) {
      const auto out = sherman_morrison_downdate(g_inv, h.column(c));
      const double quad = 1.0 - out.denominator;
      CHECK(quad >= -1e-10);
      CHECK(quad <= 1.0 + 1e-10);
    }
  }
}

TEST_CASE("pinv_fro_norm_sq examples") {
  CHECK(rel_close(pinv_fro_norm_sq(kFixture), 4.0 / 3.0, 1e-12));
  CHECK(rel_close(pinv_fro_norm_sq(ComplexMatrix::identity(6)), 6.0, 1e-12));
  CHECK(rel_close(pinv_fro_norm_sq(ComplexMatrix{{1.0, 1.0}}), 0.5, 1e-12));
  CHECK_THROWS_AS(pinv_fro_norm_sq(ComplexMatrix(2, 2)), SingularGram);
}

TEST_CASE("hermitian_eig hand cases") {
  const auto id = hermitian_eig(HermitianMatrix::identity(2));
  CHECK(rel_close(id.eigenvalues[0], 1.0, 1e-12));
  CHECK(rel_close(id.eigenvalues[1], 1.0, 1e-12));

  const auto tri = hermitian_eig(gram(kFixture));
  CHECK(rel_close(tri.eigenvalues[0], 3.0, 1e-10));
  CHECK(rel_close(tri.eigenvalues[1], 1.0, 1e-10));
  // eigenvector of 3 is proportional to (1, 1)/sqrt(2)
  const auto& v = tri.eigenvectors;
  CHECK(std::abs(std::abs(v(0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-10);
  CHECK(std::abs(v(0, 0) - v(1, 0)) < 1e-10);

  const HermitianMatrix diag{
      ComplexMatrix{{5.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 1.0}}};
  const auto d = hermitian_eig(diag);
  CHECK(d.eigenvalues == std::vector<double>{5.0, 2.0, 1.0});
}

TEST_CASE("hermitian_eig satisfies residual and orthonormality bounds") {
  auto rng = test_stream(13);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 1 + (rng.next_u32() % 10);
    const auto g = random_pd(rng, n);
    const auto eig = hermitian_eig(g);

    const double scale = g.matrix().frobenius_norm();
    for (std::size_t c = 0; c < n; ++c) {
      double resid = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        cdouble gv{};
        for (std::size_t k = 0; k < n; ++k) {
          gv += g(r, k) * eig.eigenvectors(k, c);
        }
        resid += std::norm(gv - eig.eigenvalues[c] * eig.eigenvectors(r, c));
      }
      CHECK(std::sqrt(resid) <= 1e-8 * std::max(scale, 1.0));
    }

    const auto vhv =
        eig.eigenvectors.adjoint() * eig.eigenvectors;
    CHECK(max_abs_diff(vhv, ComplexMatrix::identity(n)) < 1e-10);

    // descending order
    for (std::size_t c = 1; c < n; ++c) {
      CHECK(eig.eigenvalues[c - 1] >= eig.eigenvalues[c]);
    }
  }
}

TEST_CASE("trace of the inverse equals the eigenvalue reciprocal sum") {
  auto rng = test_stream(14);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 1 + (rng.next_u32() % 8);
    const auto g = random_pd(rng, n);
    const auto eig = hermitian_eig(g);
    double recip = 0.0;
    for (const double lam : eig.eigenvalues) recip += 1.0 / lam;
    CHECK(rel_close(trace_inverse(g), recip, 1e-8));
  }
}

TEST_CASE("hermitian constructor rejects non-hermitian input") {
  CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix{{1.0, 2.0}, {3.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix(2, 3)),
                  std::invalid_argument);
}
