#include "beamsel/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beamsel {

RatePoint make_rate_point(double snr_linear, double norm_sq,
                          std::size_t n_u) {
  if (!(snr_linear > 0.0)) {
    throw std::invalid_argument("snr must be positive");
  }
  if (!(norm_sq > 0.0)) {
    throw std::invalid_argument("norm_sq must be positive");
  }
  return RatePoint{snr_linear, norm_sq, n_u,
                   sum_rate(norm_sq, snr_linear, 1.0, n_u)};
}

ComplexMatrix zf_precoder(const ComplexMatrix& h) {
  const auto g_inv = hermitian_inverse(gram(h));
  return h.adjoint() * g_inv.matrix();
}

double sum_rate(double norm_sq, double power, double noise_var,
                std::size_t n_u) {
  if (!(norm_sq > 0.0) || !(power > 0.0) || !(noise_var > 0.0) || n_u == 0) {
    throw std::invalid_argument("sum_rate expects positive arguments");
  }
  return static_cast<double>(n_u) *
         std::log2(1.0 + power / (noise_var * norm_sq));
}

Partition partition(const ComplexMatrix& h,
                    std::span<const std::size_t> selected) {
  std::vector<bool> taken(h.cols(), false);
  for (const auto idx : selected) {
    if (idx >= h.cols()) {
      throw std::invalid_argument("selected index out of range");
    }
    if (taken[idx]) {
      throw std::invalid_argument("selected indices must be distinct");
    }
    taken[idx] = true;
  }

  Partition out;
  out.permutation.assign(selected.begin(), selected.end());
  for (std::size_t c = 0; c < h.cols(); ++c) {
    if (!taken[c]) out.permutation.push_back(c);
  }
  out.selected = select_columns(h, selected);
  out.discarded = select_columns(
      h, std::span<const std::size_t>(out.permutation)
             .subspan(selected.size()));
  return out;
}

}  // namespace beamsel
