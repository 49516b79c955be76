#include "magblock/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "magblock/errors.hpp"
#include "magblock/pt_spectrum.hpp"
#include "magblock/weak_drive.hpp"

namespace magblock {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

AmplitudeVector weak_drive_state(const SystemParams& p) {
  if (p.kappa_a == p.kappa_m && p.delta_a == p.delta_m) return steady_state_amplitudes(p);
  return steady_state_linear_solve(p, Coupling::perturbative);
}

EigenPair eigen_pair(const SystemParams& p) {
  return p.delta_a == p.delta_m ? eigenvalues_closed_form(p) : eigenvalues_numeric(p);
}

std::vector<std::string> output_columns(OutputKind kind) {
  switch (kind) {
    case OutputKind::g2_analytic:
      return {"g2_analytic", "delta_opt"};
    case OutputKind::g2_numeric:
      return {"g2_numeric"};
    case OutputKind::eigenvalues:
      return {"re_xi_plus_shifted", "im_xi_plus_shifted", "re_xi_minus_shifted", "im_xi_minus_shifted",
              "discriminant", "pt_region"};
    case OutputKind::probabilities:
      return {"abs_c10", "abs_c20"};
    case OutputKind::spectrum:
      return {"re_e1_0", "im_e1_0", "re_e1_1", "im_e1_1", "re_e2_0", "im_e2_0",
              "re_e2_1", "im_e2_1", "re_e2_2", "im_e2_2"};
  }
  return {};
}

struct PointResult {
  std::vector<double> values;
  unsigned status = 0;
  EigenPair eigen{};
  bool has_eigen = false;
};

PointResult evaluate_point(const SystemParams& p, const SweepSpec& spec) {
  validate(p);
  if (!polaron_guard_ok(p)) {
    throw ValidationError("sweep point violates g_mb <= omega_b / 10 (polaron validity)");
  }
  PointResult out;
  for (OutputKind kind : spec.outputs) {
    switch (kind) {
      case OutputKind::g2_analytic: {
        double g2 = kNaN;
        try {
          g2 = g2_analytic(weak_drive_state(p)).g2;
        } catch (const SingularDenominator&) {
          out.status |= kStatusAnalyticSingular;
        } catch (const DivisionByZero&) {
          out.status |= kStatusAnalyticSingular;
        }
        out.values.push_back(g2);
        out.values.push_back(optimal_detuning(p));
        break;
      }
      case OutputKind::g2_numeric: {
        double g2 = magnon_correlation(p, spec.master_equation).g2;
        if (!std::isfinite(g2)) {
          out.status |= kStatusNumericFailed;
          g2 = kNaN;
        }
        out.values.push_back(g2);
        break;
      }
      case OutputKind::eigenvalues: {
        out.eigen = eigen_pair(p);
        out.has_eigen = true;
        const cplx plus = out.eigen.xi_plus - p.delta_m;
        const cplx minus = out.eigen.xi_minus - p.delta_m;
        out.values.insert(out.values.end(), {plus.real(), plus.imag(), minus.real(), minus.imag(),
                                             out.eigen.discriminant,
                                             static_cast<double>(static_cast<int>(classify(out.eigen.discriminant)))});
        break;
      }
      case OutputKind::probabilities: {
        try {
          const AmplitudeVector c = weak_drive_state(p);
          out.values.push_back(std::abs(c.c10));
          out.values.push_back(std::abs(c.c20));
        } catch (const SingularDenominator&) {
          out.status |= kStatusProbabilitySingular;
          out.values.insert(out.values.end(), {kNaN, kNaN});
        }
        break;
      }
      case OutputKind::spectrum: {
        const auto manifolds = excitation_spectrum(p, 2);
        for (const auto& m : manifolds) {
          if (m.total_excitations == 0) continue;
          for (cplx e : m.eigenvalues) {
            out.values.push_back(e.real());
            out.values.push_back(e.imag());
          }
        }
        break;
      }
    }
  }
  return out;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

RunConfig without_preset(RunConfig cfg) {
  cfg.preset.reset();
  return cfg;
}

nlohmann::ordered_json table_metadata(const std::string& name, const RunConfig& cfg) {
  nlohmann::ordered_json meta;
  meta["name"] = name;
  meta["version"] = MAGBLOCK_VERSION;
  meta["config"] = resolved_config(without_preset(cfg));
  return meta;
}

}  // namespace

std::size_t ResultTable::column(std::string_view label) const {
  const auto it = std::find(columns.begin(), columns.end(), label);
  if (it == columns.end()) throw InvalidConfiguration("table '" + name + "' has no column '" + std::string(label) + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> ResultTable::column_values(std::string_view label) const {
  const std::size_t j = column(label);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[j]);
  return out;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& job) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mutex;
  std::size_t failed_index = count;
  std::exception_ptr error;

  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (i < failed_index) {
          failed_index = i;
          error = std::current_exception();
        }
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ResultTable run_sweep(const RunConfig& cfg, const std::string& name) {
  const auto start = std::chrono::steady_clock::now();
  const SweepSpec& spec = cfg.sweep;
  validate_sweep(spec);

  const std::vector<double> grid1 = linspace(spec.axis1.min, spec.axis1.max, spec.axis1.points);
  const std::vector<double> grid2 =
      spec.axis2 ? linspace(spec.axis2->min, spec.axis2->max, spec.axis2->points) : std::vector<double>{kNaN};
  const std::size_t n1 = grid1.size();
  const std::size_t count = n1 * grid2.size();

  ResultTable table;
  table.name = name;
  table.columns.push_back(spec.axis1.name);
  if (spec.axis2) table.columns.push_back(spec.axis2->name);
  for (OutputKind kind : spec.outputs) {
    for (auto& c : output_columns(kind)) table.columns.push_back(std::move(c));
  }
  table.columns.push_back("status");

  std::vector<PointResult> points(count);
  parallel_for(count, cfg.threads, [&](std::size_t i) {
    SystemParams p = cfg.params;
    if (spec.axis2) set_parameter(p, spec.axis2->name, grid2[i / n1], spec.tie_detunings);
    set_parameter(p, spec.axis1.name, grid1[i % n1], spec.tie_detunings);
    points[i] = evaluate_point(p, spec);
  });

  // Branch continuation of the eigenvalue labels along axis1.
  const auto eigen_it = std::find(spec.outputs.begin(), spec.outputs.end(), OutputKind::eigenvalues);
  if (eigen_it != spec.outputs.end()) {
    std::size_t offset = 0;
    for (auto it = spec.outputs.begin(); it != eigen_it; ++it) offset += output_columns(*it).size();
    for (std::size_t i = 0; i < count; ++i) {
      if (i % n1 == 0) continue;
      PointResult& cur = points[i];
      const EigenPair paired = pair_to(points[i - 1].eigen, cur.eigen);
      if (paired.xi_plus != cur.eigen.xi_plus) {
        std::swap(cur.values[offset], cur.values[offset + 2]);
        std::swap(cur.values[offset + 1], cur.values[offset + 3]);
        cur.eigen = paired;
      }
    }
  }

  table.rows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> row;
    row.reserve(table.columns.size());
    row.push_back(grid1[i % n1]);
    if (spec.axis2) row.push_back(grid2[i / n1]);
    row.insert(row.end(), points[i].values.begin(), points[i].values.end());
    row.push_back(static_cast<double>(points[i].status));
    table.rows.push_back(std::move(row));
  }

  table.metadata = table_metadata(name, cfg);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  table.metadata["wall_time_s"] = elapsed.count();
  return table;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig2a", "fig2b", "fig3", "fig4", "fig5", "fig6", "fig7"};
  return names;
}

namespace {

struct PresetBuilder {
  const RunConfig& base;

  [[nodiscard]] bool given(const std::string& key) const { return base.explicit_keys.contains(key); }

  void pin(RunConfig& cfg, const std::string& key, const std::string& param, double value) const {
    if (!given(key)) set_parameter(cfg.params, param, value, false);
  }

  [[nodiscard]] AxisSpec axis(const std::string& prefix, AxisSpec preset, const AxisSpec& user) const {
    if (given(prefix + "_name")) preset.name = user.name;
    if (given(prefix + "_min")) preset.min = user.min;
    if (given(prefix + "_max")) preset.max = user.max;
    if (given(prefix + "_points")) preset.points = user.points;
    return preset;
  }

  [[nodiscard]] RunConfig make(const AxisSpec& axis1, std::optional<AxisSpec> axis2,
                               std::vector<OutputKind> outputs) const {
    RunConfig cfg = base;
    cfg.preset.reset();
    cfg.sweep.axis1 = axis("axis1", axis1, base.sweep.axis1);
    if (axis2) {
      cfg.sweep.axis2 = axis("axis2", *axis2, base.sweep.axis2.value_or(AxisSpec{}));
    } else if (!given("axis2_name")) {
      cfg.sweep.axis2.reset();
    }
    if (!given("outputs")) cfg.sweep.outputs = std::move(outputs);
    if (cfg.sweep.tie_detunings) cfg.params.delta_a = cfg.params.delta_m;
    return cfg;
  }
};

const AxisSpec kDeltaAxis{"delta_m", -2.0, 2.0, 801};

}  // namespace

std::vector<ResultTable> run_preset(const std::string& preset, const RunConfig& base) {
  const PresetBuilder b{base};
  std::vector<ResultTable> out;

  if (preset == "fig2a") {
    RunConfig cfg = b.make({"g_ma", 0.0, 1.0, 801}, std::nullopt, {OutputKind::eigenvalues});
    b.pin(cfg, "kappa_a_over_kappa_m", "kappa_a", cfg.params.kappa_m);
    out.push_back(run_sweep(cfg, "fig2a"));
  } else if (preset == "fig2b") {
    RunConfig cfg = b.make({"kappa_a", 0.0, 2.0, 801}, std::nullopt, {OutputKind::eigenvalues});
    b.pin(cfg, "g_ma_over_kappa_m", "g_ma", 0.5);
    out.push_back(run_sweep(cfg, "fig2b"));
  } else if (preset == "fig3") {
    RunConfig cfg = b.make(kDeltaAxis, std::nullopt, {OutputKind::g2_analytic, OutputKind::g2_numeric});
    out.push_back(run_sweep(cfg, "fig3"));
  } else if (preset == "fig4" || preset == "fig7") {
    const bool fig4 = preset == "fig4";
    for (double g : {0.0, 0.3, 0.5, 0.8}) {
      RunConfig cfg = b.make(kDeltaAxis, std::nullopt,
                             fig4 ? std::vector{OutputKind::g2_analytic, OutputKind::g2_numeric}
                                  : std::vector{OutputKind::probabilities});
      cfg.params.g_ma = g;
      out.push_back(run_sweep(cfg, preset + "_g_ma_" + format_value(g)));
    }
  } else if (preset == "fig5") {
    for (double k : {0.0, 0.01, 0.1}) {
      RunConfig cfg = b.make({"delta_m", -2.0, 2.0, 201}, AxisSpec{"g_mb", 0.0, 10.0, 201}, {OutputKind::g2_analytic});
      cfg.params.kerr_k = k;
      out.push_back(run_sweep(cfg, "fig5_kerr_" + format_value(k)));
    }
  } else if (preset == "fig6") {
    for (double g : {0.0, 3.0, 6.0}) {
      RunConfig cfg = b.make({"delta_m", -2.0, 2.0, 201}, AxisSpec{"kerr_k", 0.0, 1.0, 201}, {OutputKind::g2_analytic});
      cfg.params.g_ma = g;
      out.push_back(run_sweep(cfg, "fig6_g_ma_" + format_value(g)));
    }
  } else {
    throw UsageError("unknown preset '" + preset + "'");
  }
  return out;
}

std::vector<ResultTable> run(const RunConfig& cfg) {
  if (cfg.preset) return run_preset(*cfg.preset, cfg);
  return {run_sweep(cfg)};
}

}  // namespace magblock
