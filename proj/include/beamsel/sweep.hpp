#pragma once
//
// Monte Carlo sum-rate sweep. Trials draw from independent substreams keyed
// by (seed, trial), results are reduced in trial order, so the output is a
// pure function of the config no matter how many workers run.

#include <cstddef>
#include <vector>

#include "beamsel/channel.hpp"
#include "beamsel/selection.hpp"

namespace beamsel {

struct SweepConfig {
  ChannelParams channel;
  std::vector<std::size_t> k_values;
  std::vector<double> snr_db;  // P / sigma^2 in dB
  std::size_t trials = 100;
  PreselectMode preselect_mode = PreselectMode::kTop;
  double oversample = 1.0;
  std::size_t workers = 1;  // does not affect the output

  void validate() const;  // throws std::invalid_argument

  static std::vector<double> default_snr_grid();  // -10..30 dB, step 5
};

// One (K, SNR) cell. Means and standard deviations are over trials; the
// bound columns average the per-trial guaranteed rates.
struct SweepCell {
  std::size_t k = 0;
  double snr_db = 0.0;
  double r_full_mean = 0.0;
  double r_full_std = 0.0;
  double r_s_mean = 0.0;  // greedy on the full channel
  double r_s_std = 0.0;
  double r_s_pre_mean = 0.0;  // greedy on the pre-selected candidates
  double bound_eq9_rate = 0.0;
  double bound_eq17_mean = 0.0;
  double n_c_mean = 0.0;
  double epsilon_mean = 0.0;  // (||H_c^+||^2 - ||H^+||^2) / ||H^+||^2
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepCell> cells;  // K-major, SNR in config order
};

SweepResult run_sweep(const SweepConfig& config);

}  // namespace beamsel
