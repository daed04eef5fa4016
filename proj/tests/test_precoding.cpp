#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "beamsel/precoding.hpp"
#include "test_support.hpp"

using namespace beamsel;
using test_support::max_abs_diff;
using test_support::random_matrix;
using test_support::rel_close;
using test_support::test_stream;

TEST_CASE("zf precoder hand cases") {
  const auto id = zf_precoder(ComplexMatrix::identity(3));
  CHECK(max_abs_diff(id, ComplexMatrix::identity(3)) < 1e-12);

  const auto row = zf_precoder(ComplexMatrix{{1.0, 1.0}});
  CHECK(std::abs(row(0, 0) - cdouble{0.5, 0.0}) < 1e-12);
  CHECK(std::abs(row(1, 0) - cdouble{0.5, 0.0}) < 1e-12);

  const ComplexMatrix h{{1.0, 0.0, 1.0}, {0.0, 1.0, 1.0}};
  const auto f = zf_precoder(h);
  CHECK(max_abs_diff(h * f, ComplexMatrix::identity(2)) < 1e-12);
}

TEST_CASE("zf precoder nulls interference on random channels") {
  auto rng = test_stream(30);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n_u = 1 + (rng.next_u32() % 6);
    const std::size_t n_b = n_u + (rng.next_u32() % 8);
    const auto h = random_matrix(rng, n_u, n_b);
    const auto f = zf_precoder(h);
    CHECK(max_abs_diff(h * f, ComplexMatrix::identity(n_u)) < 1e-9);
  }
  CHECK_THROWS_AS(zf_precoder(ComplexMatrix(2, 4)), SingularGram);
}

TEST_CASE("sum rate formula") {
  CHECK(rel_close(sum_rate(1.0, 1.0, 1.0, 2), 2.0, 1e-12));
  CHECK(rel_close(sum_rate(4.0 / 3.0, 4.0 / 3.0, 1.0, 2), 2.0, 1e-12));
  CHECK(sum_rate(1.0, 1e-12, 1.0, 2) < 1e-8);  // vanishes with power
  CHECK_THROWS_AS(sum_rate(0.0, 1.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(sum_rate(1.0, -1.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(sum_rate(1.0, 1.0, 0.0, 2), std::invalid_argument);
}

TEST_CASE("rate point stores its own formula") {
  const auto p = make_rate_point(3.0, 1.5, 4);
  CHECK(p.rate == sum_rate(1.5, 3.0, 1.0, 4));
}

TEST_CASE("sum rate is monotone in snr and norm") {
  double prev = 0.0;
  for (double snr = 0.5; snr < 64.0; snr *= 2.0) {
    const double r = sum_rate(2.0, snr, 1.0, 3);
    CHECK(r > prev);
    prev = r;
  }
  prev = 1e9;
  for (double norm = 0.5; norm < 64.0; norm *= 2.0) {
    const double r = sum_rate(norm, 4.0, 1.0, 3);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("column removal cannot improve the precoder norm") {
  auto rng = test_stream(31);
  int checked = 0;
  while (checked < 1000) {
    const std::size_t n_u = 1 + (rng.next_u32() % 4);
    const std::size_t n_b = n_u + 1 + (rng.next_u32() % 8);
    const auto h = random_matrix(rng, n_u, n_b);
    const std::size_t k = n_u + (rng.next_u32() % (n_b - n_u));
    // random k-subset
    std::vector<std::size_t> perm(n_b);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n_b; i > 1; --i) {
      std::swap(perm[i - 1], perm[rng.next_u32() % i]);
    }
    std::vector<std::size_t> subset(perm.begin(),
                                    perm.begin() + static_cast<long>(k));
    std::sort(subset.begin(), subset.end());

    double full, sub;
    try {
      full = pinv_fro_norm_sq(h);
      sub = pinv_fro_norm_sq(select_columns(h, subset));
    } catch (const SingularGram&) {
      continue;
    }
    CHECK(sub >= full - 1e-9);
    CHECK(sum_rate(sub, 2.0, 1.0, n_u) <= sum_rate(full, 2.0, 1.0, n_u) + 1e-9);
    ++checked;
  }
}

TEST_CASE("partition splits and restores columns") {
  const ComplexMatrix h{{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}};

  SUBCASE("identity selection") {
    const std::vector<std::size_t> all{0, 1, 2};
    const auto p = partition(h, all);
    CHECK(max_abs_diff(p.selected, h) == 0.0);
    CHECK(p.discarded.cols() == 0);
  }

  SUBCASE("reordered selection") {
    const std::vector<std::size_t> sel{2, 0};
    const auto p = partition(h, sel);
    CHECK(p.selected(0, 0) == cdouble{3.0, 0.0});
    CHECK(p.selected(0, 1) == cdouble{1.0, 0.0});
    CHECK(p.discarded(0, 0) == cdouble{2.0, 0.0});
    CHECK(p.permutation == std::vector<std::size_t>{2, 0, 1});

    // applying the permutation to [selected discarded] restores h exactly
    ComplexMatrix restored(h.rows(), h.cols());
    for (std::size_t i = 0; i < p.permutation.size(); ++i) {
      const auto& src = i < p.selected.cols()
                            ? p.selected
                            : p.discarded;
      const std::size_t local = i < p.selected.cols()
                                    ? i
                                    : i - p.selected.cols();
      for (std::size_t r = 0; r < h.rows(); ++r) {
        restored(r, p.permutation[i]) = src(r, local);
      }
    }
    CHECK(max_abs_diff(restored, h) == 0.0);
  }

  SUBCASE("validation") {
    CHECK_THROWS_AS(partition(h, std::vector<std::size_t>{0, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(partition(h, std::vector<std::size_t>{3}),
                    std::invalid_argument);
  }
}
