#include "beamsel/sweep.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "beamsel/precoding.hpp"

namespace beamsel {

namespace {

// Pairwise summation keeps the reduction well conditioned and, because the
// inputs are indexed by trial, independent of worker scheduling.
double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (const double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.subspan(0, half)) +
         pairwise_sum(values.subspan(half));
}

double mean_of(std::span<const double> values) {
  return pairwise_sum(values) / static_cast<double>(values.size());
}

double stddev_of(std::span<const double> values, double mean) {
  if (values.size() < 2) return 0.0;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mean;
    sq[i] = d * d;
  }
  return std::sqrt(pairwise_sum(sq) /
                   static_cast<double>(values.size() - 1));
}

struct TrialK {
  double greedy_norm = 0.0;
  double pre_greedy_norm = 0.0;
  double candidate_norm = 0.0;
  std::size_t n_c = 0;
};

struct TrialData {
  double full_norm = 0.0;
  std::vector<TrialK> per_k;
};

TrialData run_trial(const SweepConfig& config, std::uint32_t trial) {
  const auto& ch = config.channel;
  const ComplexMatrix h = generate_beamspace_channel(ch, trial).matrix;

  TrialData data;
  data.full_norm = pinv_fro_norm_sq(h);
  data.per_k.resize(config.k_values.size());

  // Greedy removals nest, so one deep run covers every requested K.
  std::size_t k_min = ch.n_b;
  for (const auto k : config.k_values) k_min = std::min(k_min, k);
  std::optional<SelectionResult> deep;
  try {
    deep = decremental_select(h, k_min);
  } catch (const InfeasibleSelection&) {
    // fall back to per-K runs below
  }

  for (std::size_t ki = 0; ki < config.k_values.size(); ++ki) {
    const std::size_t k = config.k_values[ki];
    auto& slot = data.per_k[ki];
    if (deep) {
      slot.greedy_norm =
          selection_at(*deep, ch.n_b, k, data.full_norm).final_norm_sq;
    } else {
      slot.greedy_norm = decremental_select(h, k).final_norm_sq;
    }

    RandomStream rng(ch.seed,
                     stream_id(StreamPurpose::kPreselect, trial,
                               static_cast<std::uint32_t>(ki)));
    const auto pre =
        preselect(h, k, config.preselect_mode, config.oversample, rng);
    slot.n_c = pre.indices.size();
    slot.candidate_norm = pinv_fro_norm_sq(pre.candidates);
    slot.pre_greedy_norm = decremental_select(pre.candidates, k).final_norm_sq;
  }
  return data;
}

}  // namespace

void SweepConfig::validate() const {
  channel.validate();
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (k_values.empty()) throw std::invalid_argument("no K values given");
  for (const auto k : k_values) {
    if (k < channel.n_u || k > channel.n_b) {
      throw std::invalid_argument("every K must lie in [n_u, n_b]");
    }
  }
  if (snr_db.empty()) throw std::invalid_argument("no SNR points given");
  if (!(oversample >= 1.0)) {
    throw std::invalid_argument("oversample must be >= 1");
  }
}

std::vector<double> SweepConfig::default_snr_grid() {
  std::vector<double> grid;
  for (int db = -10; db <= 30; db += 5) grid.push_back(db);
  return grid;
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();

  std::vector<TrialData> trials(config.trials);
  const std::size_t workers =
      std::max<std::size_t>(1, std::min(config.workers, config.trials));

  if (workers == 1) {
    for (std::size_t t = 0; t < config.trials; ++t) {
      trials[t] = run_trial(config, static_cast<std::uint32_t>(t));
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&]() {
      while (true) {
        const std::size_t t = next.fetch_add(1);
        if (t >= config.trials) return;
        try {
          trials[t] = run_trial(config, static_cast<std::uint32_t>(t));
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  const std::size_t n_u = config.channel.n_u;
  const std::size_t n_b = config.channel.n_b;

  SweepResult result;
  result.config = config;
  result.cells.reserve(config.k_values.size() * config.snr_db.size());

  std::vector<double> r_full(config.trials);
  std::vector<double> r_s(config.trials);
  std::vector<double> r_s_pre(config.trials);
  std::vector<double> bound9(config.trials);
  std::vector<double> bound17(config.trials);
  std::vector<double> n_c(config.trials);
  std::vector<double> epsilon(config.trials);

  for (std::size_t ki = 0; ki < config.k_values.size(); ++ki) {
    const std::size_t k = config.k_values[ki];
    for (std::size_t t = 0; t < config.trials; ++t) {
      const auto& slot = trials[t].per_k[ki];
      n_c[t] = static_cast<double>(slot.n_c);
      epsilon[t] =
          (slot.candidate_norm - trials[t].full_norm) / trials[t].full_norm;
    }
    const double n_c_mean = mean_of(n_c);
    const double eps_mean = mean_of(epsilon);

    for (const double snr_db : config.snr_db) {
      const double snr = std::pow(10.0, snr_db / 10.0);
      for (std::size_t t = 0; t < config.trials; ++t) {
        const auto& trial = trials[t];
        const auto& slot = trial.per_k[ki];
        r_full[t] = sum_rate(trial.full_norm, snr, 1.0, n_u);
        r_s[t] = sum_rate(slot.greedy_norm, snr, 1.0, n_u);
        r_s_pre[t] = sum_rate(slot.pre_greedy_norm, snr, 1.0, n_u);
        bound9[t] = sum_rate(
            selection_norm_bound(n_b, n_u, k, trial.full_norm), snr, 1.0,
            n_u);
        bound17[t] =
            rate_lower_bound(slot.n_c, n_u, k, slot.candidate_norm, snr, 1.0);
      }

      SweepCell cell;
      cell.k = k;
      cell.snr_db = snr_db;
      cell.r_full_mean = mean_of(r_full);
      cell.r_full_std = stddev_of(r_full, cell.r_full_mean);
      cell.r_s_mean = mean_of(r_s);
      cell.r_s_std = stddev_of(r_s, cell.r_s_mean);
      cell.r_s_pre_mean = mean_of(r_s_pre);
      cell.bound_eq9_rate = mean_of(bound9);
      cell.bound_eq17_mean = mean_of(bound17);
      cell.n_c_mean = n_c_mean;
      cell.epsilon_mean = eps_mean;
      result.cells.push_back(cell);
    }
  }
  return result;
}

}  // namespace beamsel
