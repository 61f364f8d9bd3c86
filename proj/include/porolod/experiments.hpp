#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "porolod/coefficients.hpp"
#include "porolod/errors.hpp"
#include "porolod/fem.hpp"
#include "porolod/interpolation.hpp"
#include "porolod/lod.hpp"
#include "porolod/mesh.hpp"
#include "porolod/timestepping.hpp"

namespace porolod {

inline constexpr const char* kVersion = "porolod 0.1.0";

struct ExperimentConfig {
  std::string name = "custom";
  int dim = 2;
  int fine_cells = 0;
  int eps_cells = 0;
  std::vector<int> coarse_cells;
  double tau = 0.01;
  double T = 1.0;
  std::uint64_t seed = 1234;
  std::optional<std::uint64_t> alpha_seed;
  int ell = 2;  // kGlobalCorrectors for untruncated correctors
  std::vector<int> bc_u, bc_p;  // Dirichlet face tags per field
  std::string p0 = "zero";  // zero | poly_product | sqrt_profile | bubble_x2
  SourceTerm f;
  CoefficientBounds bounds;
  double M = 1.0;
  double nu = 1.0;

  int steps() const;
  // Throws with every violated invariant listed.
  void validate() const;
};

// Presets for the reference experiments: exp1, exp2, exp3 (2D), exp3d (3D).
ExperimentConfig preset(const std::string& name);

ScalarFunction initial_pressure_function(const ExperimentConfig& config);

std::string config_to_json_string(const ExperimentConfig& config);
ExperimentConfig config_from_json_string(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Fine-scale reference problem, assembled once per run.
struct FineSetup {
  ExperimentConfig config;
  Mesh fine_mesh;
  Mesh eps_mesh;
  CoefficientField field;
  FineParams params;
  FeSpace u_space, p_space;
  AssembledForms forms;
  Vec p0, u0, load;
  TimeGrid grid;
};

std::unique_ptr<FineSetup> build_fine_setup(const ExperimentConfig& config);
TimeSeriesSolution solve_fine(const FineSetup& setup);

// One coarse level: interpolation operators, multiscale bases, coarse
// system, and coarse initial data / load.
struct MsLevel {
  Mesh coarse_mesh;
  FeSpace u_space, p_space;
  InterpolationOperator interp_u, interp_p;
  MsBasis basis_u, basis_p;
  CoarseSystem system;
  Vec p0, u0, load;
};

std::unique_ptr<MsLevel> build_ms_level(
    const FineSetup& setup, int coarse_cells, int ell,
    const std::string& import_basis_prefix = "",
    const std::string& export_basis_prefix = "");
TimeSeriesSolution solve_ms(const FineSetup& setup, const MsLevel& level);
// Prolongs a coarse multiscale series to fine DOFs via the bases.
TimeSeriesSolution prolong_series(const MsLevel& level,
                                  const TimeSeriesSolution& ms);

struct LevelTiming {
  int coarse_cells = 0;
  double corrector_s = 0.0;
  double online_s = 0.0;
};

struct RunRecord {
  ExperimentConfig config;
  std::string version = kVersion;
  ErrorReport report;
  std::vector<LevelTiming> timings;
};

RunRecord run_convergence(const ExperimentConfig& config,
                          const std::string& import_basis_prefix = "",
                          const std::string& export_basis_prefix = "");

// CSV per the report schema plus a JSON sidecar (<path>.json) with the full
// RunRecord.
void write_run_outputs(const RunRecord& record, const std::string& csv_path);

}  // namespace porolod
