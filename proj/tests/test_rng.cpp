#include <doctest.h>

#include <array>
#include <cmath>

#include "beamsel/rng.hpp"

using namespace beamsel;

TEST_CASE("philox4x32-10 matches the reference known-answer vectors") {
  const std::array<std::uint32_t, 4> zero =
      philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(zero == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du,
                                             0xbc57ac4cu, 0x9b00dbd8u});

  const std::array<std::uint32_t, 4> ones = philox4x32(
      {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
      {0xffffffffu, 0xffffffffu});
  CHECK(ones == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu,
                                             0xa20bc7c6u, 0x6d5451fdu});

  const std::array<std::uint32_t, 4> pi = philox4x32(
      {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
      {0xa4093822u, 0x299f31d0u});
  CHECK(pi == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu,
                                           0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and distinct") {
  RandomStream a(42, stream_id(StreamPurpose::kGeneric, 0, 0));
  RandomStream b(42, stream_id(StreamPurpose::kGeneric, 0, 0));
  RandomStream c(42, stream_id(StreamPurpose::kGeneric, 0, 1));
  RandomStream d(43, stream_id(StreamPurpose::kGeneric, 0, 0));

  bool same_ab = true, same_ac = true, same_ad = true;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.next_u32();
    same_ab &= (va == b.next_u32());
    same_ac &= (va == c.next_u32());
    same_ad &= (va == d.next_u32());
  }
  CHECK(same_ab);
  CHECK_FALSE(same_ac);
  CHECK_FALSE(same_ad);
}

TEST_CASE("stream ids partition purpose, trial and index") {
  CHECK(stream_id(StreamPurpose::kUserChannel, 0, 0) !=
        stream_id(StreamPurpose::kPreselect, 0, 0));
  CHECK(stream_id(StreamPurpose::kUserChannel, 1, 0) !=
        stream_id(StreamPurpose::kUserChannel, 0, 1));
  CHECK(stream_id(StreamPurpose::kGeneric, 7, 9) ==
        stream_id(StreamPurpose::kGeneric, 7, 9));
}

TEST_CASE("uniform draws live in [0, 1) and cover the range") {
  RandomStream rng(1, stream_id(StreamPurpose::kGeneric, 0, 2));
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("gaussian pairs have unit variance and no correlation") {
  RandomStream rng(1, stream_id(StreamPurpose::kGeneric, 0, 3));
  const int n = 20000;
  double m0 = 0.0, m1 = 0.0, v0 = 0.0, v1 = 0.0, cross = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto [z0, z1] = rng.next_gaussian_pair();
    m0 += z0;
    m1 += z1;
    v0 += z0 * z0;
    v1 += z1 * z1;
    cross += z0 * z1;
  }
  CHECK(std::abs(m0 / n) < 0.03);
  CHECK(std::abs(m1 / n) < 0.03);
  CHECK(std::abs(v0 / n - 1.0) < 0.05);
  CHECK(std::abs(v1 / n - 1.0) < 0.05);
  CHECK(std::abs(cross / n) < 0.03);
}

TEST_CASE("complex gaussian variance splits across components") {
  RandomStream rng(9, stream_id(StreamPurpose::kGeneric, 0, 4));
  const int n = 20000;
  double e2 = 0.0, re2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = rng.next_cgaussian(4.0);
    e2 += std::norm(z);
    re2 += z.real() * z.real();
  }
  CHECK(std::abs(e2 / n - 4.0) < 0.15);
  CHECK(std::abs(re2 / n - 2.0) < 0.1);
}
