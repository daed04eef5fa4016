#include "beamsel/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace beamsel {

namespace {

using nlohmann::json;

double finite_number(const json& j, const char* what) {
  if (!j.is_number()) {
    throw std::invalid_argument(std::string(what) + " must be a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
  return v;
}

}  // namespace

nlohmann::json channel_to_json(const ComplexMatrix& h) {
  json entries = json::array();
  for (std::size_t r = 0; r < h.rows(); ++r) {
    for (std::size_t c = 0; c < h.cols(); ++c) {
      const auto& z = h(r, c);
      entries.push_back(json::array({z.real(), z.imag()}));
    }
  }
  return json{{"n_U", h.rows()}, {"n_B", h.cols()}, {"entries", entries}};
}

ComplexMatrix channel_from_json(const nlohmann::json& j) {
  if (!j.contains("n_U") || !j.contains("n_B") || !j.contains("entries")) {
    throw std::invalid_argument("channel JSON needs n_U, n_B and entries");
  }
  const auto n_u = j.at("n_U").get<std::size_t>();
  const auto n_b = j.at("n_B").get<std::size_t>();
  const auto& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != n_u * n_b) {
    throw std::invalid_argument("entries must hold n_U * n_B [re, im] pairs");
  }
  std::vector<cdouble> data;
  data.reserve(entries.size());
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 2) {
      throw std::invalid_argument("each entry must be an [re, im] pair");
    }
    data.emplace_back(finite_number(e[0], "entry"),
                      finite_number(e[1], "entry"));
  }
  return ComplexMatrix(n_u, n_b, std::move(data));
}

void save_channel(const ComplexMatrix& h, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << channel_to_json(h).dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

ComplexMatrix load_channel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json j;
  in >> j;
  return channel_from_json(j);
}

nlohmann::json to_json(const SelectionResult& result) {
  return json{{"selected", result.selected},
              {"eliminated", result.eliminated},
              {"step_costs", result.step_costs},
              {"final_norm_sq", result.final_norm_sq}};
}

nlohmann::json to_json(const BoundReport& report) {
  json j{{"n_B", report.n_b},
         {"n_U", report.n_u},
         {"K", report.k},
         {"full_norm_sq", report.full_norm_sq},
         {"theorem1_bound", report.theorem1_bound}};
  if (report.n_c) j["n_c"] = *report.n_c;
  if (report.candidate_norm_sq) {
    j["candidate_norm_sq"] = *report.candidate_norm_sq;
  }
  if (report.improved_bound) j["improved_bound"] = *report.improved_bound;
  if (report.rate_lower_bound) {
    j["rate_lower_bound"] = *report.rate_lower_bound;
  }
  if (report.snr_db) j["snr_db"] = *report.snr_db;
  return j;
}

std::string preselect_mode_name(PreselectMode mode) {
  return mode == PreselectMode::kBernoulli ? "bernoulli" : "top";
}

PreselectMode preselect_mode_from_name(const std::string& name) {
  if (name == "bernoulli") return PreselectMode::kBernoulli;
  if (name == "top") return PreselectMode::kTop;
  throw std::invalid_argument("unknown preselect mode: " + name);
}

nlohmann::json to_json(const SweepConfig& config) {
  return json{{"n_B", config.channel.n_b},
              {"n_U", config.channel.n_u},
              {"L", config.channel.n_paths},
              {"los_var", config.channel.los_var},
              {"nlos_var", config.channel.nlos_var},
              {"seed", config.channel.seed},
              {"K", config.k_values},
              {"snr_db", config.snr_db},
              {"trials", config.trials},
              {"preselect", preselect_mode_name(config.preselect_mode)},
              {"oversample", config.oversample}};
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig config;
  config.snr_db = SweepConfig::default_snr_grid();
  if (j.contains("n_B")) config.channel.n_b = j.at("n_B").get<std::size_t>();
  if (j.contains("n_U")) config.channel.n_u = j.at("n_U").get<std::size_t>();
  if (j.contains("L")) config.channel.n_paths = j.at("L").get<std::size_t>();
  if (j.contains("los_var")) config.channel.los_var = j.at("los_var");
  if (j.contains("nlos_var")) config.channel.nlos_var = j.at("nlos_var");
  if (j.contains("seed")) config.channel.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("K")) {
    config.k_values = j.at("K").get<std::vector<std::size_t>>();
  }
  if (j.contains("snr_db")) {
    config.snr_db = j.at("snr_db").get<std::vector<double>>();
  }
  if (j.contains("trials")) config.trials = j.at("trials").get<std::size_t>();
  if (j.contains("preselect")) {
    config.preselect_mode =
        preselect_mode_from_name(j.at("preselect").get<std::string>());
  }
  if (j.contains("oversample")) config.oversample = j.at("oversample");
  return config;
}

nlohmann::json to_json(const SweepResult& result) {
  json cells = json::array();
  for (const auto& c : result.cells) {
    cells.push_back(json{{"K", c.k},
                         {"snr_db", c.snr_db},
                         {"r_full_mean", c.r_full_mean},
                         {"r_full_std", c.r_full_std},
                         {"r_s_mean", c.r_s_mean},
                         {"r_s_std", c.r_s_std},
                         {"r_s_pre_mean", c.r_s_pre_mean},
                         {"bound_eq9_rate", c.bound_eq9_rate},
                         {"bound_eq17_mean", c.bound_eq17_mean},
                         {"n_c_mean", c.n_c_mean},
                         {"epsilon_mean", c.epsilon_mean}});
  }
  return json{{"config", to_json(result.config)}, {"cells", cells}};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "K,snr_db,r_full_mean,r_full_std,r_s_mean,r_s_std,r_s_pre_mean,"
         "bound_eq9_rate,bound_eq17_mean,n_c_mean,epsilon_mean\n";
  for (const auto& c : result.cells) {
    out << c.k << ',' << format_double(c.snr_db) << ','
        << format_double(c.r_full_mean) << ',' << format_double(c.r_full_std)
        << ',' << format_double(c.r_s_mean) << ',' << format_double(c.r_s_std)
        << ',' << format_double(c.r_s_pre_mean) << ','
        << format_double(c.bound_eq9_rate) << ','
        << format_double(c.bound_eq17_mean) << ','
        << format_double(c.n_c_mean) << ',' << format_double(c.epsilon_mean)
        << '\n';
  }
  return out.str();
}

std::string hyperbola_to_csv(const HyperbolaProfile& profile) {
  std::ostringstream out;
  out << "K,factor\n";
  for (const auto& [k, factor] : profile.factors) {
    out << k << ',' << format_double(factor) << '\n';
  }
  out << "# vertex," << format_double(profile.vertex_k) << ','
      << format_double(profile.vertex_factor) << '\n';
  return out.str();
}

}  // namespace beamsel
