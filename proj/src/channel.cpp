#include "beamsel/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace beamsel {

namespace {
constexpr double kPi = std::numbers::pi;
}

void ChannelParams::validate() const {
  if (n_b == 0) throw std::invalid_argument("n_b must be positive");
  if (n_u == 0) throw std::invalid_argument("n_u must be positive");
  if (n_u > n_b) throw std::invalid_argument("n_u must not exceed n_b");
  if (!(los_var > 0.0)) {
    throw std::invalid_argument("los_var must be positive");
  }
  if (!(nlos_var > 0.0)) {
    throw std::invalid_argument("nlos_var must be positive");
  }
}

std::vector<cdouble> steering_vector(double theta, std::size_t n_b) {
  if (n_b == 0) throw std::invalid_argument("n_b must be positive");
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_b));
  const double offset = (static_cast<double>(n_b) - 1.0) / 2.0;
  std::vector<cdouble> a(n_b);
  for (std::size_t i = 0; i < n_b; ++i) {
    const double idx = static_cast<double>(i) - offset;
    a[i] = std::polar(amp, -2.0 * kPi * theta * idx);
  }
  return a;
}

double spatial_frequency(double phi) {
  if (!(phi >= -kPi / 2.0 && phi <= kPi / 2.0)) {
    throw std::invalid_argument("angle must lie in [-pi/2, pi/2]");
  }
  return 0.5 * std::sin(phi);
}

ComplexMatrix dft_matrix(std::size_t n_b) {
  if (n_b == 0) throw std::invalid_argument("n_b must be positive");
  const double offset = (static_cast<double>(n_b) - 1.0) / 2.0;
  ComplexMatrix u(n_b, n_b);
  for (std::size_t c = 0; c < n_b; ++c) {
    const double theta = (static_cast<double>(c) - offset) /
                         static_cast<double>(n_b);
    const auto col = steering_vector(theta, n_b);
    for (std::size_t r = 0; r < n_b; ++r) u(r, c) = col[r];
  }
  return u;
}

UserChannel generate_user_channel(const ChannelParams& params,
                                  RandomStream& rng) {
  params.validate();
  UserChannel out;
  out.paths.reserve(params.n_paths + 1);
  out.vec.assign(params.n_b, cdouble{});
  for (std::size_t p = 0; p <= params.n_paths; ++p) {
    PathRecord rec;
    rec.angle = rng.next_uniform(-kPi / 2.0, kPi / 2.0);
    rec.spatial_freq = 0.5 * std::sin(rec.angle);
    rec.gain = rng.next_cgaussian(p == 0 ? params.los_var : params.nlos_var);
    const auto a = steering_vector(rec.spatial_freq, params.n_b);
    for (std::size_t i = 0; i < params.n_b; ++i) {
      out.vec[i] += rec.gain * a[i];
    }
    out.paths.push_back(rec);
  }
  return out;
}

SpatialChannel generate_spatial_channel(const ChannelParams& params,
                                        std::uint32_t trial) {
  params.validate();
  SpatialChannel out;
  out.matrix = ComplexMatrix(params.n_u, params.n_b);
  out.paths.resize(params.n_u);
  for (std::size_t k = 0; k < params.n_u; ++k) {
    RandomStream rng(params.seed,
                     stream_id(StreamPurpose::kUserChannel, trial,
                               static_cast<std::uint32_t>(k)));
    auto user = generate_user_channel(params, rng);
    for (std::size_t i = 0; i < params.n_b; ++i) {
      out.matrix(k, i) = user.vec[i];
    }
    out.paths[k] = std::move(user.paths);
  }
  return out;
}

BeamspaceChannel to_beamspace(const SpatialChannel& spatial,
                              const ComplexMatrix& dft) {
  if (spatial.matrix.cols() != dft.rows()) {
    throw std::invalid_argument("channel / transform dimension mismatch");
  }
  return BeamspaceChannel{spatial.matrix * dft};
}

BeamspaceChannel generate_beamspace_channel(const ChannelParams& params,
                                            std::uint32_t trial) {
  return to_beamspace(generate_spatial_channel(params, trial),
                      dft_matrix(params.n_b));
}

std::vector<cdouble> reconstruct_user_row(const std::vector<PathRecord>& paths,
                                          std::size_t n_b) {
  std::vector<cdouble> row(n_b, cdouble{});
  for (const auto& rec : paths) {
    const auto a = steering_vector(rec.spatial_freq, n_b);
    for (std::size_t i = 0; i < n_b; ++i) row[i] += rec.gain * a[i];
  }
  return row;
}

}  // namespace beamsel
