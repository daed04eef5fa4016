#pragma once
//
// Multipath spatial channel synthesis for a critically spaced uniform linear
// array, and the unitary DFT transform into beamspace.

#include <cstdint>
#include <vector>

#include "beamsel/linalg.hpp"
#include "beamsel/rng.hpp"

namespace beamsel {

struct ChannelParams {
  std::size_t n_b = 0;      // beams / array elements
  std::size_t n_u = 0;      // users, n_u <= n_b
  std::size_t n_paths = 0;  // reflected paths per user on top of the direct one
  double los_var = 1.0;     // direct-path gain variance
  double nlos_var = 0.1;    // reflected-path gain variance
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

struct PathRecord {
  double angle;         // physical angle in [-pi/2, pi/2]
  double spatial_freq;  // 0.5 * sin(angle)
  cdouble gain;
};

// Antenna-domain channel plus the path draws that produced it, kept so a row
// can be reconstructed bit-for-bit.
struct SpatialChannel {
  ComplexMatrix matrix;                        // n_u x n_b
  std::vector<std::vector<PathRecord>> paths;  // per user; [0] is direct
};

struct BeamspaceChannel {
  ComplexMatrix matrix;  // n_u x n_b, columns indexed by beam
};

// Unit-norm array response at spatial frequency theta: entry for array index
// i in {0,...,n_b-1} is exp(-j 2 pi theta (i - (n_b-1)/2)) / sqrt(n_b).
std::vector<cdouble> steering_vector(double theta, std::size_t n_b);

// theta = 0.5 sin(phi) for a physical angle phi in [-pi/2, pi/2].
double spatial_frequency(double phi);

// Unitary n_b x n_b matrix whose column c is the steering vector at
// theta = (c - (n_b-1)/2) / n_b.
ComplexMatrix dft_matrix(std::size_t n_b);

struct UserChannel {
  std::vector<cdouble> vec;
  std::vector<PathRecord> paths;
};

// One user's channel: a direct path plus n_paths reflected paths, angles
// uniform on [-pi/2, pi/2] and complex Gaussian gains. Draw order per path is
// angle then gain, direct path first.
UserChannel generate_user_channel(const ChannelParams& params,
                                  RandomStream& rng);

// All users; user k draws from substream (kUserChannel, trial, k), so the
// result depends only on (params.seed, trial).
SpatialChannel generate_spatial_channel(const ChannelParams& params,
                                        std::uint32_t trial = 0);

// H = H_spatial * U. The transform is unitary, so Frobenius norm is kept.
BeamspaceChannel to_beamspace(const SpatialChannel& spatial,
                              const ComplexMatrix& dft);

BeamspaceChannel generate_beamspace_channel(const ChannelParams& params,
                                            std::uint32_t trial = 0);

// Rebuild one user's row from its stored path records.
std::vector<cdouble> reconstruct_user_row(const std::vector<PathRecord>& paths,
                                          std::size_t n_b);

}  // namespace beamsel
