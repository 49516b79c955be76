#include "magblock/config.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include "magblock/errors.hpp"

namespace magblock {

namespace {

using json = nlohmann::json;

// Scalar parameter keys and where they land in SystemParams.
const std::map<std::string, double SystemParams::*>& scalar_keys() {
  static const std::map<std::string, double SystemParams::*> keys = {
      {"omega_b_over_kappa_m", &SystemParams::omega_b},
      {"delta_m_over_kappa_m", &SystemParams::delta_m},
      {"delta_a_over_kappa_m", &SystemParams::delta_a},
      {"g_ma_over_kappa_m", &SystemParams::g_ma},
      {"g_mb_over_kappa_m", &SystemParams::g_mb},
      {"kerr_over_kappa_m", &SystemParams::kerr_k},
      {"drive_over_kappa_m", &SystemParams::drive_omega},
      {"kappa_a_over_kappa_m", &SystemParams::kappa_a},
      {"gamma_b_over_kappa_m", &SystemParams::gamma_b},
      {"n_th", &SystemParams::n_th},
  };
  return keys;
}

const std::set<std::string>& other_keys() {
  static const std::set<std::string> keys = {
      "preset",       "kappa_m_over_2pi_mhz", "tie_detunings",        "omega_a_over_kappa_m", "omega_m_over_kappa_m",
      "omega_l_over_kappa_m", "axis1_name",   "axis1_min",            "axis1_max",            "axis1_points",
      "axis2_name",   "axis2_min",            "axis2_max",            "axis2_points",         "outputs",
      "gain_mode",    "cutoff_a",             "cutoff_m",             "cutoff_b",             "reduced_model",
      "threads",
  };
  return keys;
}

double number_at(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number()) throw ValidationError("config key '" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError("config key '" + key + "' must be finite");
  return x;
}

int integer_at(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer()) throw ValidationError("config key '" + key + "' must be an integer");
  return v.get<int>();
}

std::string string_at(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_string()) throw ValidationError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

std::optional<AxisSpec> axis_from(const json& doc, const std::string& prefix, std::optional<AxisSpec> fallback) {
  const std::string name_key = prefix + "_name";
  const bool any = doc.contains(name_key) || doc.contains(prefix + "_min") || doc.contains(prefix + "_max") ||
                   doc.contains(prefix + "_points");
  if (!any) return fallback;
  AxisSpec axis = fallback.value_or(AxisSpec{});
  if (doc.contains(name_key)) {
    axis.name = string_at(doc, name_key);
  } else if (!fallback) {
    throw ValidationError("config: " + name_key + " is required when other " + prefix + " keys are given");
  }
  if (doc.contains(prefix + "_min")) axis.min = number_at(doc, prefix + "_min");
  if (doc.contains(prefix + "_max")) axis.max = number_at(doc, prefix + "_max");
  if (doc.contains(prefix + "_points")) {
    const int points = integer_at(doc, prefix + "_points");
    if (points < 2) throw ValidationError("config: " + prefix + "_points must be >= 2");
    axis.points = static_cast<std::size_t>(points);
  }
  return axis;
}

void validate_axis(const AxisSpec& axis, const char* which) {
  const auto& names = sweepable_parameters();
  if (std::find(names.begin(), names.end(), axis.name) == names.end()) {
    throw ValidationError(std::string(which) + ": unknown parameter '" + axis.name + "'");
  }
  if (axis.points < 2) throw ValidationError(std::string(which) + ": points must be >= 2");
  if (!(axis.max > axis.min)) throw ValidationError(std::string(which) + ": max must exceed min");
}

}  // namespace

const char* to_string(OutputKind kind) noexcept {
  switch (kind) {
    case OutputKind::g2_analytic:
      return "g2_analytic";
    case OutputKind::g2_numeric:
      return "g2_numeric";
    case OutputKind::eigenvalues:
      return "eigenvalues";
    case OutputKind::probabilities:
      return "probabilities";
    case OutputKind::spectrum:
      return "spectrum";
  }
  return "unknown";
}

OutputKind output_kind_from_string(std::string_view name) {
  for (OutputKind k : {OutputKind::g2_analytic, OutputKind::g2_numeric, OutputKind::eigenvalues,
                       OutputKind::probabilities, OutputKind::spectrum}) {
    if (name == to_string(k)) return k;
  }
  throw ValidationError("unknown output '" + std::string(name) + "'");
}

const std::vector<std::string>& sweepable_parameters() {
  static const std::vector<std::string> names = {"delta_m", "delta_a", "g_ma",    "g_mb",    "kerr_k",
                                                 "drive_omega", "kappa_a", "gamma_b", "omega_b", "n_th"};
  return names;
}

void set_parameter(SystemParams& p, std::string_view name, double value, bool tie) {
  if (name == "delta_m") {
    p.delta_m = value;
    if (tie) p.delta_a = value;
  } else if (name == "delta_a") {
    p.delta_a = value;
  } else if (name == "g_ma") {
    p.g_ma = value;
  } else if (name == "g_mb") {
    p.g_mb = value;
  } else if (name == "kerr_k") {
    p.kerr_k = value;
  } else if (name == "drive_omega") {
    p.drive_omega = value;
  } else if (name == "kappa_a") {
    p.kappa_a = value;
  } else if (name == "gamma_b") {
    p.gamma_b = value;
  } else if (name == "omega_b") {
    p.omega_b = value;
  } else if (name == "n_th") {
    p.n_th = value;
  } else {
    throw ValidationError("unknown parameter '" + std::string(name) + "'");
  }
  // A swept point no longer corresponds to the supplied lab-frame set.
  p.absolute.reset();
}

double get_parameter(const SystemParams& p, std::string_view name) {
  if (name == "delta_m") return p.delta_m;
  if (name == "delta_a") return p.delta_a;
  if (name == "g_ma") return p.g_ma;
  if (name == "g_mb") return p.g_mb;
  if (name == "kerr_k") return p.kerr_k;
  if (name == "drive_omega") return p.drive_omega;
  if (name == "kappa_a") return p.kappa_a;
  if (name == "gamma_b") return p.gamma_b;
  if (name == "omega_b") return p.omega_b;
  if (name == "n_th") return p.n_th;
  throw ValidationError("unknown parameter '" + std::string(name) + "'");
}

void validate_sweep(const SweepSpec& spec) {
  validate_axis(spec.axis1, "axis1");
  if (spec.axis2) {
    validate_axis(*spec.axis2, "axis2");
    if (spec.axis2->name == spec.axis1.name) throw ValidationError("axis1 and axis2 must differ");
  }
  if (spec.outputs.empty()) throw ValidationError("outputs must not be empty");
  const auto& me = spec.master_equation;
  if (me.cutoff_a < 2 || me.cutoff_m < 2) throw ValidationError("cavity and magnon cutoffs must be >= 2");
  if (me.cutoff_b < 1) throw ValidationError("phonon cutoff must be >= 1");
}

RunConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  RunConfig cfg;
  for (const auto& item : doc.items()) {
    if (!scalar_keys().contains(item.key()) && !other_keys().contains(item.key())) {
      throw ValidationError("unknown config key '" + item.key() + "'");
    }
    cfg.explicit_keys.insert(item.key());
  }

  for (const auto& [key, field] : scalar_keys()) {
    if (doc.contains(key)) cfg.params.*field = number_at(doc, key);
  }
  if (doc.contains("kappa_m_over_2pi_mhz")) {
    cfg.kappa_m_over_2pi_mhz = number_at(doc, "kappa_m_over_2pi_mhz");
    if (!(cfg.kappa_m_over_2pi_mhz > 0.0)) throw ValidationError("kappa_m_over_2pi_mhz must be > 0");
  }

  const bool delta_a_given = doc.contains("delta_a_over_kappa_m");
  cfg.sweep.tie_detunings = !delta_a_given;
  if (doc.contains("tie_detunings")) {
    if (!doc.at("tie_detunings").is_boolean()) throw ValidationError("tie_detunings must be a boolean");
    cfg.sweep.tie_detunings = doc.at("tie_detunings").get<bool>();
  }

  const int absolute_count = int(doc.contains("omega_a_over_kappa_m")) + int(doc.contains("omega_m_over_kappa_m")) +
                             int(doc.contains("omega_l_over_kappa_m"));
  if (absolute_count != 0 && absolute_count != 3) {
    throw ValidationError("omega_a/omega_m/omega_l must be given together");
  }
  if (absolute_count == 3) {
    const AbsoluteFrequencies freq{number_at(doc, "omega_a_over_kappa_m"), number_at(doc, "omega_m_over_kappa_m"),
                                   number_at(doc, "omega_l_over_kappa_m")};
    const bool delta_m_given = doc.contains("delta_m_over_kappa_m");
    SystemParams converted = SystemParams::from_absolute(freq, cfg.params);
    if (delta_m_given) converted.delta_m = cfg.params.delta_m;
    if (delta_a_given) converted.delta_a = cfg.params.delta_a;
    cfg.params = converted;
    if (!doc.contains("tie_detunings")) cfg.sweep.tie_detunings = false;
  } else if (cfg.sweep.tie_detunings) {
    if (delta_a_given && cfg.params.delta_a != cfg.params.delta_m) {
      throw ValidationError("tie_detunings requires delta_a_over_kappa_m == delta_m_over_kappa_m");
    }
    cfg.params.delta_a = cfg.params.delta_m;
  }

  if (doc.contains("preset")) cfg.preset = string_at(doc, "preset");
  if (auto axis1 = axis_from(doc, "axis1", cfg.sweep.axis1)) cfg.sweep.axis1 = *axis1;
  cfg.sweep.axis2 = axis_from(doc, "axis2", std::nullopt);

  if (doc.contains("outputs")) {
    const json& outs = doc.at("outputs");
    if (!outs.is_array()) throw ValidationError("outputs must be an array of strings");
    cfg.sweep.outputs.clear();
    for (const json& o : outs) {
      if (!o.is_string()) throw ValidationError("outputs must be an array of strings");
      cfg.sweep.outputs.push_back(output_kind_from_string(o.get<std::string>()));
    }
  }
  auto& me = cfg.sweep.master_equation;
  if (doc.contains("gain_mode")) {
    try {
      me.gain_mode = gain_mode_from_string(string_at(doc, "gain_mode"));
    } catch (const InvalidConfiguration& e) {
      throw ValidationError(e.what());
    }
  }
  if (doc.contains("cutoff_a")) me.cutoff_a = integer_at(doc, "cutoff_a");
  if (doc.contains("cutoff_m")) me.cutoff_m = integer_at(doc, "cutoff_m");
  if (doc.contains("cutoff_b")) me.cutoff_b = integer_at(doc, "cutoff_b");
  if (doc.contains("reduced_model")) {
    if (!doc.at("reduced_model").is_boolean()) throw ValidationError("reduced_model must be a boolean");
    me.reduced = doc.at("reduced_model").get<bool>();
  }
  if (doc.contains("threads")) {
    cfg.threads = integer_at(doc, "threads");
    if (cfg.threads < 1) throw ValidationError("threads must be >= 1");
  }

  validate(cfg.params);
  if (!polaron_guard_ok(cfg.params)) {
    throw ValidationError("g_mb_over_kappa_m must not exceed omega_b_over_kappa_m / 10 (polaron validity)");
  }
  validate_sweep(cfg.sweep);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

nlohmann::ordered_json resolved_config(const RunConfig& cfg) {
  nlohmann::ordered_json out;
  if (cfg.preset) out["preset"] = *cfg.preset;
  out["kappa_m_over_2pi_mhz"] = cfg.kappa_m_over_2pi_mhz;
  out["omega_b_over_kappa_m"] = cfg.params.omega_b;
  out["delta_m_over_kappa_m"] = cfg.params.delta_m;
  out["delta_a_over_kappa_m"] = cfg.params.delta_a;
  out["tie_detunings"] = cfg.sweep.tie_detunings;
  if (cfg.params.absolute) {
    out["omega_a_over_kappa_m"] = cfg.params.absolute->omega_a;
    out["omega_m_over_kappa_m"] = cfg.params.absolute->omega_m;
    out["omega_l_over_kappa_m"] = cfg.params.absolute->omega_l;
  }
  out["g_ma_over_kappa_m"] = cfg.params.g_ma;
  out["g_mb_over_kappa_m"] = cfg.params.g_mb;
  out["kerr_over_kappa_m"] = cfg.params.kerr_k;
  out["drive_over_kappa_m"] = cfg.params.drive_omega;
  out["kappa_a_over_kappa_m"] = cfg.params.kappa_a;
  out["gamma_b_over_kappa_m"] = cfg.params.gamma_b;
  out["n_th"] = cfg.params.n_th;
  out["axis1_name"] = cfg.sweep.axis1.name;
  out["axis1_min"] = cfg.sweep.axis1.min;
  out["axis1_max"] = cfg.sweep.axis1.max;
  out["axis1_points"] = cfg.sweep.axis1.points;
  if (cfg.sweep.axis2) {
    out["axis2_name"] = cfg.sweep.axis2->name;
    out["axis2_min"] = cfg.sweep.axis2->min;
    out["axis2_max"] = cfg.sweep.axis2->max;
    out["axis2_points"] = cfg.sweep.axis2->points;
  }
  auto outputs = nlohmann::ordered_json::array();
  for (OutputKind k : cfg.sweep.outputs) outputs.push_back(to_string(k));
  out["outputs"] = outputs;
  const auto& me = cfg.sweep.master_equation;
  out["gain_mode"] = to_string(me.gain_mode);
  out["cutoff_a"] = me.cutoff_a;
  out["cutoff_m"] = me.cutoff_m;
  out["cutoff_b"] = me.cutoff_b;
  out["reduced_model"] = me.reduced;
  out["threads"] = cfg.threads;
  return out;
}

}  // namespace magblock
