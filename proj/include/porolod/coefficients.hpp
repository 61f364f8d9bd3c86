#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "porolod/mesh.hpp"

namespace porolod {

struct ParamBounds {
  double lo = 0.0;
  double hi = 1.0;
};

struct CoefficientBounds {
  ParamBounds kappa{0.1, 0.12};
  ParamBounds mu{32.2, 62.2};
  ParamBounds lambda{40.98, 60.98};
  ParamBounds alpha{0.5, 1.0};
};

// Piecewise-constant material parameters on the eps-mesh, one independent
// uniform draw per element per parameter.
struct CoefficientField {
  Mesh eps_mesh;
  std::vector<double> kappa, mu, lambda, alpha;
  double biot_modulus = 1.0;  // M
  double viscosity = 1.0;     // nu
  std::uint64_t seed = 0;
};

// Per-fine-element parameter arrays after restriction.
struct FineParams {
  std::vector<double> kappa, mu, lambda, alpha;
  double biot_modulus = 1.0;
  double viscosity = 1.0;
};

// Each parameter is drawn from its own substream of `seed`, so alpha can be
// resampled (via alpha_seed) without touching kappa, mu, lambda.
CoefficientField sample_field(const Mesh& eps_mesh,
                              const CoefficientBounds& bounds, double M,
                              double nu, std::uint64_t seed,
                              std::optional<std::uint64_t> alpha_seed = {});

FineParams restrict_to_fine(const CoefficientField& field,
                            const Mesh& fine_mesh);

void export_field_csv(const CoefficientField& field, const std::string& path);
CoefficientField import_field_csv(const Mesh& eps_mesh, const std::string& path,
                                  double M, double nu);

}  // namespace porolod
