#pragma once

// Run configuration: a single flat JSON object with unit-suffixed keys.
// Every key is optional; missing keys take the reference parameter set.
//
//   {
//     "g_ma_over_kappa_m": 0.8,
//     "axis1_name": "delta_m", "axis1_min": -2, "axis1_max": 2, "axis1_points": 801,
//     "outputs": ["g2_analytic", "g2_numeric"]
//   }
//
// Unknown keys are rejected.

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "magblock/lindblad.hpp"
#include "magblock/model.hpp"

namespace magblock {

struct AxisSpec {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  std::size_t points = 2;
};

enum class OutputKind { g2_analytic, g2_numeric, eigenvalues, probabilities, spectrum };

const char* to_string(OutputKind kind) noexcept;
OutputKind output_kind_from_string(std::string_view name);

struct SweepSpec {
  AxisSpec axis1{"delta_m", -2.0, 2.0, 801};
  std::optional<AxisSpec> axis2;
  std::vector<OutputKind> outputs{OutputKind::g2_analytic};
  MasterEquationOptions master_equation;
  bool tie_detunings = true;  // sweeping delta_m moves delta_a along
};

struct RunConfig {
  SystemParams params;
  SweepSpec sweep;
  std::optional<std::string> preset;
  int threads = 1;
  double kappa_m_over_2pi_mhz = 1.0;  // absolute scale, metadata only
  std::set<std::string> explicit_keys;  // keys present in the source document
};

/// Axis names a sweep may vary.
const std::vector<std::string>& sweepable_parameters();

/// Sets a named parameter; delta_m also moves delta_a when `tie` is set.
void set_parameter(SystemParams& p, std::string_view name, double value, bool tie);
double get_parameter(const SystemParams& p, std::string_view name);

/// Throws ValidationError listing the violated invariant.
void validate_sweep(const SweepSpec& spec);

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// The complete resolved configuration as a flat document that parse_config
/// accepts and that reproduces the same run.
nlohmann::ordered_json resolved_config(const RunConfig& cfg);

}  // namespace magblock
