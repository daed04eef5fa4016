#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "beamsel/channel.hpp"
#include "test_support.hpp"

using namespace beamsel;
using test_support::max_abs_diff;
using test_support::rel_close;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("steering vector values and normalization") {
  const auto flat = steering_vector(0.0, 4);
  for (const auto& z : flat) {
    CHECK(std::abs(z - cdouble{0.5, 0.0}) < 1e-15);
  }

  // theta = 0.5, n = 2: indices {-1/2, +1/2} give (+j, -j)/sqrt(2)
  const auto two = steering_vector(0.5, 2);
  CHECK(std::abs(two[0] - cdouble{0.0, 1.0} / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(two[1] - cdouble{0.0, -1.0} / std::sqrt(2.0)) < 1e-15);

  auto rng = test_support::test_stream(20);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 1 + (rng.next_u32() % 32);
    const auto a = steering_vector(rng.next_uniform(-0.5, 0.5), n);
    double norm = 0.0;
    for (const auto& z : a) norm += std::norm(z);
    CHECK(rel_close(norm, 1.0, 1e-12));
  }
}

TEST_CASE("spatial frequency mapping") {
  CHECK(spatial_frequency(0.0) == 0.0);
  CHECK(rel_close(spatial_frequency(kPi / 2.0), 0.5, 1e-12));
  CHECK(rel_close(spatial_frequency(kPi / 6.0), 0.25, 1e-12));
  CHECK_THROWS_AS(spatial_frequency(2.0), std::invalid_argument);
  CHECK_THROWS_AS(spatial_frequency(-2.0), std::invalid_argument);
}

TEST_CASE("beamspace transform is unitary for n up to 64") {
  for (std::size_t n = 1; n <= 64; ++n) {
    const auto u = dft_matrix(n);
    const auto uuh = u * u.adjoint();
    CHECK(max_abs_diff(uuh, ComplexMatrix::identity(n)) < 1e-10);
  }
}

TEST_CASE("transform columns are steering vectors on the beam grid") {
  const std::size_t n = 2;
  const auto u = dft_matrix(n);
  for (std::size_t c = 0; c < n; ++c) {
    const double theta = (static_cast<double>(c) - 0.5) / 2.0;
    const auto a = steering_vector(theta, n);
    for (std::size_t r = 0; r < n; ++r) {
      CHECK(std::abs(u(r, c) - a[r]) < 1e-15);
    }
  }
  CHECK(dft_matrix(1)(0, 0) == cdouble{1.0, 0.0});
}

TEST_CASE("user channel reconstructs from its path records") {
  const ChannelParams params{16, 1, 3, 1.0, 0.1, 7};
  RandomStream rng(params.seed, stream_id(StreamPurpose::kUserChannel, 0, 0));
  const auto user = generate_user_channel(params, rng);
  REQUIRE(user.paths.size() == 4);
  const auto rebuilt = reconstruct_user_row(user.paths, params.n_b);
  for (std::size_t i = 0; i < params.n_b; ++i) {
    CHECK(std::abs(rebuilt[i] - user.vec[i]) < 1e-12);
  }
}

TEST_CASE("a single unit-gain boresight path is the steering vector") {
  const std::vector<PathRecord> paths{{0.0, 0.0, cdouble{1.0, 0.0}}};
  const auto row = reconstruct_user_row(paths, 8);
  const auto a = steering_vector(0.0, 8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(row[i] == a[i]);
}

TEST_CASE("channel generation is deterministic in seed and trial") {
  const ChannelParams params{32, 4, 2, 1.0, 0.1, 123};
  const auto a = generate_spatial_channel(params, 5);
  const auto b = generate_spatial_channel(params, 5);
  CHECK(max_abs_diff(a.matrix, b.matrix) == 0.0);
  REQUIRE(a.paths.size() == b.paths.size());
  for (std::size_t k = 0; k < a.paths.size(); ++k) {
    for (std::size_t p = 0; p < a.paths[k].size(); ++p) {
      CHECK(a.paths[k][p].angle == b.paths[k][p].angle);
      CHECK(a.paths[k][p].gain == b.paths[k][p].gain);
    }
  }

  const auto other_trial = generate_spatial_channel(params, 6);
  CHECK(max_abs_diff(a.matrix, other_trial.matrix) > 1e-6);

  ChannelParams reseeded = params;
  reseeded.seed = 124;
  const auto other_seed = generate_spatial_channel(reseeded, 5);
  CHECK(max_abs_diff(a.matrix, other_seed.matrix) > 1e-6);
}

TEST_CASE("mean channel energy matches the summed path variances") {
  // direct 1.0 plus two reflections at 0.1 each
  const ChannelParams params{16, 1, 2, 1.0, 0.1, 99};
  double acc = 0.0;
  const int draws = 10000;
  for (int t = 0; t < draws; ++t) {
    RandomStream rng(params.seed,
                     stream_id(StreamPurpose::kUserChannel,
                               static_cast<std::uint32_t>(t), 0));
    const auto user = generate_user_channel(params, rng);
    for (const auto& z : user.vec) acc += std::norm(z);
  }
  CHECK(std::abs(acc / draws - 1.2) < 0.05);
}

TEST_CASE("beamspace conversion preserves the Frobenius norm") {
  const ChannelParams params{24, 4, 2, 1.0, 0.1, 11};
  const auto u = dft_matrix(params.n_b);
  for (std::uint32_t t = 0; t < 100; ++t) {
    const auto spatial = generate_spatial_channel(params, t);
    const auto beam = to_beamspace(spatial, u);
    CHECK(rel_close(beam.matrix.frobenius_norm(),
                    spatial.matrix.frobenius_norm(), 1e-10));
  }
}

TEST_CASE("matched steering row concentrates on its beam") {
  const std::size_t n = 16;
  const std::size_t beam = 11;
  const double theta = (static_cast<double>(beam) -
                        (static_cast<double>(n) - 1.0) / 2.0) /
                       static_cast<double>(n);
  const auto a = steering_vector(theta, n);
  SpatialChannel sp;
  sp.matrix = ComplexMatrix(1, n);
  for (std::size_t i = 0; i < n; ++i) sp.matrix(0, i) = std::conj(a[i]);
  const auto h = to_beamspace(sp, dft_matrix(n)).matrix;
  CHECK(std::abs(std::abs(h(0, beam)) - 1.0) < 1e-12);
  for (std::size_t c = 0; c < n; ++c) {
    if (c != beam) CHECK(std::abs(h(0, c)) < 1e-12);
  }
}

TEST_CASE("zero channel maps to zero beamspace") {
  SpatialChannel sp;
  sp.matrix = ComplexMatrix(2, 8);
  const auto h = to_beamspace(sp, dft_matrix(8)).matrix;
  CHECK(h.frobenius_norm() == 0.0);
}

TEST_CASE("beamspace rows are mostly energy-sparse") {
  const ChannelParams params{64, 4, 2, 1.0, 0.1, 2024};
  double frac_sum = 0.0;
  int rows = 0;
  for (std::uint32_t t = 0; t < 100; ++t) {
    const auto h = generate_beamspace_channel(params, t).matrix;
    for (std::size_t r = 0; r < params.n_u; ++r) {
      std::vector<double> energy(params.n_b);
      double total = 0.0;
      for (std::size_t c = 0; c < params.n_b; ++c) {
        energy[c] = std::norm(h(r, c));
        total += energy[c];
      }
      std::sort(energy.begin(), energy.end(), std::greater<>());
      double top = 0.0;
      for (int i = 0; i < 8; ++i) top += energy[i];
      frac_sum += top / total;
      ++rows;
    }
  }
  CHECK(frac_sum / rows > 0.8);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(generate_spatial_channel({4, 8, 2, 1.0, 0.1, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_spatial_channel({8, 0, 2, 1.0, 0.1, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_spatial_channel({8, 2, 2, 0.0, 0.1, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_spatial_channel({8, 2, 2, 1.0, -1.0, 0}),
                  std::invalid_argument);
  SpatialChannel sp;
  sp.matrix = ComplexMatrix(2, 8);
  CHECK_THROWS_AS(to_beamspace(sp, dft_matrix(4)), std::invalid_argument);
}
