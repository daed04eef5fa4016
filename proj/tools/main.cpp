// Command line front end: channel fixture generation, beam selection runs,
// bound profiles, Monte Carlo SNR sweeps and the self-check suite.
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure,
// 3 invariant violation.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beamsel/channel.hpp"
#include "beamsel/io.hpp"
#include "beamsel/precoding.hpp"
#include "beamsel/selection.hpp"
#include "beamsel/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitInvariant = 3;

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

struct GenOptions {
  beamsel::ChannelParams params;
  std::uint32_t trial = 0;
  std::string out;
};

int run_gen(const GenOptions& opt) {
  const auto h = beamsel::generate_beamspace_channel(opt.params, opt.trial);
  beamsel::save_channel(h.matrix, opt.out);
  std::cerr << "wrote " << opt.params.n_u << "x" << opt.params.n_b
            << " beamspace channel to " << opt.out << "\n";
  return kExitOk;
}

struct SelectOptions {
  std::string channel_file;
  std::size_t k = 0;
  bool naive = false;
  std::string preselect_mode;  // empty = no pre-selection
  double oversample = 1.0;
  std::uint64_t seed = 0;
  std::optional<double> snr_db;
  std::string out;
};

int run_select(const SelectOptions& opt) {
  const auto h = beamsel::load_channel(opt.channel_file);
  const double full_norm = beamsel::pinv_fro_norm_sq(h);

  nlohmann::json out;
  std::optional<std::pair<std::size_t, double>> candidate;

  beamsel::SelectionResult result;
  if (opt.preselect_mode.empty()) {
    result = opt.naive ? beamsel::decremental_select_naive(h, opt.k)
                       : beamsel::decremental_select(h, opt.k);
  } else {
    const auto mode = beamsel::preselect_mode_from_name(opt.preselect_mode);
    beamsel::RandomStream rng(
        opt.seed, beamsel::stream_id(beamsel::StreamPurpose::kPreselect, 0, 0));
    const auto pre = beamsel::preselect(h, opt.k, mode, opt.oversample, rng);
    const double cand_norm = beamsel::pinv_fro_norm_sq(pre.candidates);
    candidate = {pre.indices.size(), cand_norm};

    auto local = opt.naive
                     ? beamsel::decremental_select_naive(pre.candidates, opt.k)
                     : beamsel::decremental_select(pre.candidates, opt.k);
    // map candidate-local column indices back onto the input channel
    result = local;
    for (auto& idx : result.selected) idx = pre.indices[idx];
    for (auto& idx : result.eliminated) idx = pre.indices[idx];
    // beams dropped by pre-selection count as eliminated up front
    std::vector<std::size_t> pre_dropped;
    std::vector<bool> kept(h.cols(), false);
    for (const auto idx : pre.indices) kept[idx] = true;
    for (std::size_t c = 0; c < h.cols(); ++c) {
      if (!kept[c]) pre_dropped.push_back(c);
    }
    out["preselect"] = {{"mode", opt.preselect_mode},
                        {"oversample", opt.oversample},
                        {"n_c", pre.indices.size()},
                        {"candidates", pre.indices},
                        {"dropped", pre_dropped},
                        {"candidate_norm_sq", cand_norm}};
  }

  out["selection"] = beamsel::to_json(result);
  out["bounds"] = beamsel::to_json(beamsel::make_bound_report(
      h.cols(), h.rows(), opt.k, full_norm, candidate, opt.snr_db));
  if (opt.snr_db) {
    const double snr = std::pow(10.0, *opt.snr_db / 10.0);
    out["achieved_rate"] =
        beamsel::sum_rate(result.final_norm_sq, snr, 1.0, h.rows());
  }
  write_output(out.dump(2) + "\n", opt.out);
  return kExitOk;
}

struct BoundOptions {
  std::size_t n_b = 0;
  std::size_t n_u = 0;
  std::string out;
};

int run_bound(const BoundOptions& opt) {
  const auto profile = beamsel::hyperbola_profile(opt.n_b, opt.n_u);
  write_output(beamsel::hyperbola_to_csv(profile), opt.out);
  return kExitOk;
}

struct SweepOptions {
  std::string config_file;
  beamsel::SweepConfig config;
  std::string format = "csv";
  std::string out;
};

int run_sweep_cmd(beamsel::SweepConfig config, const std::string& format,
                  const std::string& out_path) {
  const auto result = beamsel::run_sweep(config);
  if (format == "csv") {
    write_output(beamsel::sweep_to_csv(result), out_path);
  } else if (format == "json") {
    write_output(beamsel::to_json(result).dump(2) + "\n", out_path);
  } else {
    throw CLI::ValidationError("--format must be csv or json");
  }
  return kExitOk;
}

struct VerifyOptions {
  beamsel::ChannelParams params{16, 4, 2, 1.0, 0.1, 0};
  std::size_t count = 100;
  double tolerance = 1e-9;
  bool inject_bound_violation = false;
};

int run_verify(const VerifyOptions& opt) {
  // test hook: shrink the bound factor so violations must be reported
  const double sabotage = opt.inject_bound_violation ? 0.5 : 1.0;
  std::size_t failures = 0;
  auto check = [&](bool ok, const std::string& name) {
    if (!ok) {
      ++failures;
      std::cout << "FAIL  " << name << "\n";
    }
  };
  auto rel_ok = [&](double observed, double expected) {
    return std::abs(observed - expected) <=
           opt.tolerance * std::max(1.0, std::abs(expected));
  };

  // Hand fixture with exactly known identity values.
  const beamsel::ComplexMatrix fixture{{1.0, 0.0, 1.0}, {0.0, 1.0, 1.0}};
  const auto fix = beamsel::selection_identities(fixture);
  std::cout << "fixture: projector_trace = " << fix.projector_trace
            << ", pinv_energy = " << fix.pinv_energy
            << ", weighted_removal_sum = " << fix.weighted_removal_sum
            << ", min_removal_cost = " << fix.min_removal_cost
            << " (bound " << fix.min_removal_bound << ")\n";
  check(rel_ok(fix.projector_trace, 2.0), "fixture projector-trace");
  check(rel_ok(fix.pinv_energy, 4.0 / 3.0), "fixture pinv-energy");
  check(rel_ok(fix.weighted_removal_sum, 8.0 / 3.0),
        "fixture weighted-removal-sum");
  check(fix.min_removal_cost <= fix.min_removal_bound + opt.tolerance,
        "fixture min-removal-bound");

  std::size_t identity_checked = 0;
  std::size_t bound_checked = 0;
  for (std::size_t trial = 0; trial < opt.count; ++trial) {
    const auto h =
        beamsel::generate_beamspace_channel(opt.params,
                                            static_cast<std::uint32_t>(trial))
            .matrix;

    const auto rep = beamsel::selection_identities(h);
    check(rel_ok(rep.projector_trace, static_cast<double>(opt.params.n_u)),
          "identity projector-trace, trial " + std::to_string(trial));
    check(rel_ok(rep.pinv_energy, rep.full_norm_sq),
          "identity pinv-energy, trial " + std::to_string(trial));
    if (rep.weighted_sum_evaluable) {
      const double expected =
          static_cast<double>(opt.params.n_b - opt.params.n_u + 1) *
          rep.full_norm_sq;
      check(rel_ok(rep.weighted_removal_sum, expected),
            "identity weighted-removal-sum, trial " + std::to_string(trial));
      check(rep.min_removal_cost <=
                rep.min_removal_bound * sabotage + opt.tolerance,
            "single-step bound, trial " + std::to_string(trial));
      ++identity_checked;
    }

    const double full_norm = beamsel::pinv_fro_norm_sq(h);
    const auto deep = beamsel::decremental_select(h, opt.params.n_u);
    for (std::size_t k = opt.params.n_u; k <= opt.params.n_b; ++k) {
      const auto at = beamsel::selection_at(deep, opt.params.n_b, k, full_norm);
      const double bound =
          beamsel::selection_norm_bound(opt.params.n_b, opt.params.n_u, k,
                                        full_norm) *
          sabotage;
      check(at.final_norm_sq <= bound + opt.tolerance,
            "selection norm bound, trial " + std::to_string(trial) +
                ", K = " + std::to_string(k));
      ++bound_checked;
    }
  }

  std::cout << "checked " << identity_checked << " identity suites and "
            << bound_checked << " bound points over " << opt.count
            << " channels\n";
  if (failures != 0) {
    std::cout << "verify: " << failures << " violation(s)\n";
    return kExitInvariant;
  }
  std::cout << "verify: all checks passed\n";
  return kExitOk;
}

void add_channel_flags(CLI::App* cmd, beamsel::ChannelParams& params) {
  cmd->add_option("--n-b", params.n_b, "number of beams");
  cmd->add_option("--n-u", params.n_u, "number of users");
  cmd->add_option("--paths,-L", params.n_paths,
                  "reflected paths per user (on top of the direct path)");
  cmd->add_option("--los-var", params.los_var, "direct-path gain variance");
  cmd->add_option("--nlos-var", params.nlos_var,
                  "reflected-path gain variance");
  cmd->add_option("--seed", params.seed, "RNG seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Beamspace MIMO beam selection: greedy decremental selection, "
      "zero-forcing sum rates and their guarantees"};
  app.require_subcommand(1);

  GenOptions gen;
  gen.params = {64, 8, 2, 1.0, 0.1, 0};
  auto* cmd_gen = app.add_subcommand("gen", "generate a channel fixture");
  add_channel_flags(cmd_gen, gen.params);
  cmd_gen->add_option("--trial", gen.trial, "trial index for the substream");
  cmd_gen->add_option("-o,--out", gen.out, "output JSON path")->required();

  SelectOptions sel;
  auto* cmd_select =
      app.add_subcommand("select", "run beam selection on a channel fixture");
  cmd_select->add_option("channel", sel.channel_file, "channel JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_select->add_option("-k,--k", sel.k, "beams to keep")->required();
  cmd_select->add_flag("--naive", sel.naive,
                       "use the from-scratch reference path");
  cmd_select->add_option("--preselect", sel.preselect_mode,
                         "candidate pre-selection mode (top|bernoulli)");
  cmd_select->add_option("--oversample", sel.oversample,
                         "pre-selection oversampling factor");
  cmd_select->add_option("--seed", sel.seed,
                         "seed for Bernoulli pre-selection");
  double sel_snr = 0.0;
  auto* sel_snr_opt = cmd_select->add_option(
      "--snr-db", sel_snr, "report the guaranteed rate at this SNR");
  cmd_select->add_option("-o,--out", sel.out, "output path (default stdout)");

  BoundOptions bnd;
  auto* cmd_bound = app.add_subcommand(
      "bound", "norm inflation factor profile over K, with vertex");
  cmd_bound->add_option("n_b", bnd.n_b, "number of beams")->required();
  cmd_bound->add_option("n_u", bnd.n_u, "number of users")->required();
  cmd_bound->add_option("-o,--out", bnd.out, "output path (default stdout)");

  SweepOptions swp;
  swp.config.channel = {256, 32, 2, 1.0, 0.1, 0};
  swp.config.snr_db = beamsel::SweepConfig::default_snr_grid();
  auto* cmd_sweep =
      app.add_subcommand("sweep", "Monte Carlo sum-rate sweep over SNR");
  cmd_sweep->add_option("--config", swp.config_file,
                        "JSON config file (flags override it)");
  beamsel::ChannelParams sweep_ch = swp.config.channel;
  auto* cmd_sweep_nb = cmd_sweep->add_option("--n-b", sweep_ch.n_b,
                                             "number of beams");
  auto* cmd_sweep_nu = cmd_sweep->add_option("--n-u", sweep_ch.n_u,
                                             "number of users");
  auto* cmd_sweep_l = cmd_sweep->add_option("--paths,-L", sweep_ch.n_paths,
                                            "reflected paths per user");
  auto* cmd_sweep_los =
      cmd_sweep->add_option("--los-var", sweep_ch.los_var,
                            "direct-path gain variance");
  auto* cmd_sweep_nlos =
      cmd_sweep->add_option("--nlos-var", sweep_ch.nlos_var,
                            "reflected-path gain variance");
  auto* cmd_sweep_seed =
      cmd_sweep->add_option("--seed", sweep_ch.seed, "RNG seed");
  std::vector<std::size_t> sweep_k;
  auto* cmd_sweep_k =
      cmd_sweep->add_option("-k,--k", sweep_k, "K values (repeatable)");
  std::vector<double> sweep_snr;
  auto* cmd_sweep_snr = cmd_sweep->add_option("--snr-db", sweep_snr,
                                              "SNR grid in dB (repeatable)");
  std::size_t sweep_trials = 0;
  auto* cmd_sweep_trials =
      cmd_sweep->add_option("--trials", sweep_trials, "Monte Carlo trials");
  std::string sweep_mode;
  auto* cmd_sweep_mode = cmd_sweep->add_option(
      "--preselect", sweep_mode, "pre-selection mode (top|bernoulli)");
  double sweep_oversample = 0.0;
  auto* cmd_sweep_oversample = cmd_sweep->add_option(
      "--oversample", sweep_oversample, "pre-selection oversampling factor");
  cmd_sweep->add_option("--workers", swp.config.workers,
                        "worker threads (output independent of this)");
  cmd_sweep->add_option("--format", swp.format, "csv or json");
  cmd_sweep->add_option("-o,--out", swp.out, "output path (default stdout)");

  VerifyOptions ver;
  auto* cmd_verify = app.add_subcommand(
      "verify", "identity and bound self-checks over random channels");
  add_channel_flags(cmd_verify, ver.params);
  cmd_verify->add_option("--count", ver.count, "number of random channels");
  cmd_verify->add_option("--tolerance", ver.tolerance, "relative tolerance");
  cmd_verify
      ->add_flag("--inject-bound-violation", ver.inject_bound_violation,
                 "self-test hook: deliberately break the bound factor")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);

    if (cmd_gen->parsed()) return run_gen(gen);
    if (cmd_select->parsed()) {
      if (sel_snr_opt->count() > 0) sel.snr_db = sel_snr;
      return run_select(sel);
    }
    if (cmd_bound->parsed()) return run_bound(bnd);
    if (cmd_sweep->parsed()) {
      beamsel::SweepConfig config = swp.config;
      if (!swp.config_file.empty()) {
        std::ifstream in(swp.config_file);
        if (!in) {
          throw std::runtime_error("cannot open " + swp.config_file);
        }
        nlohmann::json j;
        in >> j;
        config = beamsel::sweep_config_from_json(j);
        config.workers = swp.config.workers;
      }
      if (cmd_sweep_nb->count()) config.channel.n_b = sweep_ch.n_b;
      if (cmd_sweep_nu->count()) config.channel.n_u = sweep_ch.n_u;
      if (cmd_sweep_l->count()) config.channel.n_paths = sweep_ch.n_paths;
      if (cmd_sweep_los->count()) config.channel.los_var = sweep_ch.los_var;
      if (cmd_sweep_nlos->count()) {
        config.channel.nlos_var = sweep_ch.nlos_var;
      }
      if (cmd_sweep_seed->count()) config.channel.seed = sweep_ch.seed;
      if (cmd_sweep_k->count()) config.k_values = sweep_k;
      if (cmd_sweep_snr->count()) config.snr_db = sweep_snr;
      if (cmd_sweep_trials->count()) config.trials = sweep_trials;
      if (cmd_sweep_mode->count()) {
        config.preselect_mode = beamsel::preselect_mode_from_name(sweep_mode);
      }
      if (cmd_sweep_oversample->count()) config.oversample = sweep_oversample;
      return run_sweep_cmd(std::move(config), swp.format, swp.out);
    }
    if (cmd_verify->parsed()) return run_verify(ver);
    return kExitValidation;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  } catch (const beamsel::SingularGram& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const beamsel::NumericalFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const beamsel::InfeasibleSelection& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
