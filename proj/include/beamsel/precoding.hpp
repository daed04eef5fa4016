#pragma once
//
// Zero-forcing precoding and the equal-power sum-rate expression. The power
// constraint lives entirely in the rate formula; the precoder itself is the
// plain pseudo-inverse.

#include <cstddef>
#include <span>
#include <vector>

#include "beamsel/linalg.hpp"

namespace beamsel {

struct RatePoint {
  double snr_linear;  // P / sigma^2
  double norm_sq;     // ||H^+||_F^2 of the precoded channel
  std::size_t n_u;
  double rate;  // n_u * log2(1 + snr_linear / norm_sq), bits/s/Hz
};

RatePoint make_rate_point(double snr_linear, double norm_sq, std::size_t n_u);

// H^+ = H^H (H H^H)^-1 for a full-row-rank wide matrix; H * H^+ = I.
ComplexMatrix zf_precoder(const ComplexMatrix& h);

// n_u * log2(1 + power / (noise_var * norm_sq)).
double sum_rate(double norm_sq, double power, double noise_var,
                std::size_t n_u);

struct Partition {
  ComplexMatrix selected;   // columns in the order given
  ComplexMatrix discarded;  // remaining columns, ascending index
  // Column i of [selected discarded] came from input column permutation[i].
  std::vector<std::size_t> permutation;
};

Partition partition(const ComplexMatrix& h,
                    std::span<const std::size_t> selected);

}  // namespace beamsel
