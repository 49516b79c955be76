#pragma once

// Parameter sweeps and the named figure presets.

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "magblock/config.hpp"

namespace magblock {

struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::ordered_json metadata;  // "config" holds the resolved flat config

  [[nodiscard]] std::size_t column(std::string_view label) const;  // throws if absent
  [[nodiscard]] std::vector<double> column_values(std::string_view label) const;
};

// Bits of the per-row "status" column. A set bit means the matching columns
// hold NaN for that row.
enum StatusBit : unsigned {
  kStatusAnalyticSingular = 1u << 0,
  kStatusNumericFailed = 1u << 1,
  kStatusEigenFailed = 1u << 2,
  kStatusProbabilitySingular = 1u << 3,
  kStatusSpectrumFailed = 1u << 4,
};

/// Runs `count` jobs on `threads` workers. Each job writes only its own slot;
/// the first exception (by index) is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& job);

/// Grid sweep over cfg.sweep. Rows run axis2 outer, axis1 inner. Isolated
/// singular points of the closed form are flagged in "status"; master
/// equation failures propagate.
ResultTable run_sweep(const RunConfig& cfg, const std::string& name = "sweep");

const std::vector<std::string>& preset_names();

/// Preset tables. Explicit config keys override the preset's scalar pins and
/// axes; the per-table lists (the g_ma, K values repeated over) are fixed.
/// Throws UsageError for an unknown name.
std::vector<ResultTable> run_preset(const std::string& preset, const RunConfig& cfg);

/// Dispatches to run_preset when cfg.preset is set, run_sweep otherwise.
std::vector<ResultTable> run(const RunConfig& cfg);

}  // namespace magblock
