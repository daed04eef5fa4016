#pragma once
//
// JSON / CSV serialization: channel fixtures, selection results, bound
// reports and sweep outputs. Field names are stable interfaces.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "beamsel/linalg.hpp"
#include "beamsel/selection.hpp"
#include "beamsel/sweep.hpp"

namespace beamsel {

// Channel fixture: {"n_U": ..., "n_B": ..., "entries": [[re, im], ...]} with
// entries row-major.
nlohmann::json channel_to_json(const ComplexMatrix& h);
ComplexMatrix channel_from_json(const nlohmann::json& j);
void save_channel(const ComplexMatrix& h, const std::filesystem::path& path);
ComplexMatrix load_channel(const std::filesystem::path& path);

nlohmann::json to_json(const SelectionResult& result);
nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const SweepConfig& config);
nlohmann::json to_json(const SweepResult& result);

std::string preselect_mode_name(PreselectMode mode);
PreselectMode preselect_mode_from_name(const std::string& name);

SweepConfig sweep_config_from_json(const nlohmann::json& j);

// CSV with header
// K,snr_db,r_full_mean,r_full_std,r_s_mean,r_s_std,r_s_pre_mean,bound_eq9_rate,bound_eq17_mean,n_c_mean,epsilon_mean
std::string sweep_to_csv(const SweepResult& result);

// CSV with header K,factor followed by one row per K and a trailing
// "# vertex,<K>,<factor>" comment line.
std::string hyperbola_to_csv(const HyperbolaProfile& profile);

// Locale-independent shortest-ish formatting used by the CSV writers.
std::string format_double(double v);

}  // namespace beamsel
