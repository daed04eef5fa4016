#pragma once
//
// Counter-based random number generation (Philox4x32-10).
//
// Every stream is identified by (seed, stream id) and each draw is a pure
// function of (seed, stream id, position). Substreams are independent by
// construction, so workers can consume disjoint streams concurrently and the
// aggregate results do not depend on scheduling.

#include <array>
#include <complex>
#include <cstdint>
#include <utility>

namespace beamsel {

// One Philox4x32-10 block: 128-bit counter + 64-bit key -> 128 output bits.
std::array<std::uint32_t, 4> philox4x32(
    const std::array<std::uint32_t, 4>& counter,
    const std::array<std::uint32_t, 2>& key);

// Keeps substreams used by different subsystems disjoint.
enum class StreamPurpose : std::uint8_t {
  kUserChannel = 0,  // per-user path draws
  kPreselect = 1,    // Bernoulli candidate sampling
  kGeneric = 2,      // tests and ad-hoc consumers
};

// 64-bit stream id laid out as purpose | trial | index (8 / 32 / 24 bits).
std::uint64_t stream_id(StreamPurpose purpose, std::uint32_t trial,
                        std::uint32_t index);

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53-bit resolution.
  double next_double();
  double next_uniform(double lo, double hi);

  // Box-Muller pair of independent standard normals.
  std::pair<double, double> next_gaussian_pair();

  // Circularly symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> next_cgaussian(double variance);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int pos_ = 4;
};

}  // namespace beamsel
