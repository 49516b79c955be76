// simulate: run a configured sweep or figure preset and write the tables.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "magblock/config.hpp"
#include "magblock/emit.hpp"
#include "magblock/errors.hpp"
#include "magblock/sweep.hpp"

namespace fs = std::filesystem;
using namespace magblock;

int main(int argc, char** argv) {
  CLI::App app{"Weak-drive magnon blockade sweeps"};
  std::string config_path;
  std::optional<std::string> preset;
  std::string out_dir = ".";
  std::string format = "csv";
  std::optional<std::string> gain_mode;
  std::optional<int> cutoff_a, cutoff_m, cutoff_b, threads;

  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--preset", preset, "figure preset (fig2a fig2b fig3 fig4 fig5 fig6 fig7)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--gain-mode", gain_mode, "paper_literal, physical_gain or passive_loss")
      ->check(CLI::IsMember({"paper_literal", "physical_gain", "passive_loss"}));
  app.add_option("--cutoff-a", cutoff_a, "cavity Fock cutoff");
  app.add_option("--cutoff-m", cutoff_m, "magnon Fock cutoff");
  app.add_option("--cutoff-b", cutoff_b, "phonon Fock cutoff");
  app.add_option("--threads", threads, "worker threads (SIM_THREADS overrides)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (preset) cfg.preset = *preset;
    auto& me = cfg.sweep.master_equation;
    if (gain_mode) me.gain_mode = gain_mode_from_string(*gain_mode);
    if (cutoff_a) me.cutoff_a = *cutoff_a;
    if (cutoff_m) me.cutoff_m = *cutoff_m;
    if (cutoff_b) me.cutoff_b = *cutoff_b;
    if (threads) cfg.threads = *threads;
    if (const char* env = std::getenv("SIM_THREADS"); env && *env) {
      try {
        std::size_t used = 0;
        cfg.threads = std::stoi(env, &used);
        if (env[used] != '\0') throw std::invalid_argument(env);
      } catch (const std::logic_error&) {
        throw ValidationError(std::string("SIM_THREADS is not an integer: '") + env + "'");
      }
    }
    if (cfg.threads < 1) throw ValidationError("threads must be >= 1");
    validate_sweep(cfg.sweep);

    const OutputFormat fmt = output_format_from_string(format);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

    for (const ResultTable& table : run(cfg)) {
      const fs::path path = fs::path(out_dir) / (table.name + extension(fmt));
      emit(table, fmt, path);
      std::cout << path.string() << "  " << table.rows.size() << " rows\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "simulate: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}
