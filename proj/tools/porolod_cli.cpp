#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "porolod/experiments.hpp"

namespace {

// "--levels k1..k2" sweeps coarse_cells = 2^k for k in [k1, k2].
std::vector<int> parse_levels(const std::string& spec) {
  const auto pos = spec.find("..");
  if (pos == std::string::npos) {
    throw std::invalid_argument("levels must have the form k1..k2");
  }
  const int k1 = std::stoi(spec.substr(0, pos));
  const int k2 = std::stoi(spec.substr(pos + 2));
  if (k1 < 0 || k2 < k1) throw std::invalid_argument("bad levels range: " + spec);
  std::vector<int> cells;
  for (int k = k1; k <= k2; ++k) cells.push_back(1 << k);
  return cells;
}

int execute(const porolod::ExperimentConfig& config, const std::string& out,
            const std::string& import_basis, const std::string& export_basis) {
  config.validate();
  const porolod::RunRecord record =
      porolod::run_convergence(config, import_basis, export_basis);
  if (!out.empty()) porolod::write_run_outputs(record, out);
  std::printf("# %s: fine=%d eps=%d ell=%d seed=%llu\n", config.name.c_str(),
              config.fine_cells, config.eps_cells, config.ell,
              static_cast<unsigned long long>(config.seed));
  std::printf("%-12s %-14s %-10s\n", "H", "rel_error", "dofs");
  bool failed = false;
  for (const auto& rec : record.report.records) {
    if (rec.diagnostic.empty()) {
      std::printf("%-12.6g %-14.8g %-10d\n", rec.H, rec.rel_error,
                  rec.n_coarse_dofs);
    } else {
      failed = true;
      std::printf("error: level H=%.6g failed: %s\n", rec.H,
                  rec.diagnostic.c_str());
    }
  }
  std::printf("fitted slope: %.4f\n", record.report.slope);
  return failed ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poroelasticity LOD multiscale solver"};
  app.require_subcommand(1);

  std::string config_path, out_csv, preset_name, levels_spec;
  std::string import_basis, export_basis;
  int fine_override = 0, eps_override = 0, ell_override = -2;
  std::uint64_t seed_override = 0;
  bool has_seed = false;

  auto* run = app.add_subcommand("run", "execute a JSON config file");
  run->add_option("--config", config_path, "config file path")->required();
  run->add_option("--out", out_csv, "report CSV output path");
  run->add_option("--export-basis", export_basis, "basis export path prefix");
  run->add_option("--import-basis", import_basis, "basis import path prefix");

  auto* conv = app.add_subcommand("convergence", "sweep a preset over H levels");
  conv->add_option("--preset", preset_name, "exp1|exp2|exp3|exp3d")->required();
  conv->add_option("--levels", levels_spec, "k1..k2: coarse_cells = 2^k");
  conv->add_option("--out", out_csv, "report CSV output path");
  conv->add_option("--fine", fine_override, "override fine cells per side");
  conv->add_option("--eps", eps_override, "override eps cells per side");
  conv->add_option("--ell", ell_override, "override localization layers");
  conv->add_option("--seed", seed_override, "override PRNG seed")
      ->each([&](const std::string&) { has_seed = true; });
  conv->add_option("--export-basis", export_basis, "basis export path prefix");
  conv->add_option("--import-basis", import_basis, "basis import path prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    porolod::ExperimentConfig config;
    if (run->parsed()) {
      config = porolod::load_config(config_path);
    } else {
      config = porolod::preset(preset_name);
      if (!levels_spec.empty()) config.coarse_cells = parse_levels(levels_spec);
      if (fine_override > 0) config.fine_cells = fine_override;
      if (eps_override > 0) config.eps_cells = eps_override;
      if (ell_override >= -1) config.ell = ell_override;
      if (has_seed) config.seed = seed_override;
    }
    return execute(config, out_csv, import_basis, export_basis);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
