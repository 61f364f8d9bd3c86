#pragma once

#include <map>
#include <string>
#include <vector>

#include "porolod/fem.hpp"
#include "porolod/interpolation.hpp"
#include "porolod/linalg.hpp"
#include "porolod/mesh.hpp"

namespace porolod {

// layers value marking global (untruncated) correctors
inline constexpr int kGlobalCorrectors = -1;

// Multiscale basis for one elliptic form: column z holds the fine
// coefficients of (1 - C_f) lambda_z.
struct MsBasis {
  SpMat basis;  // fine free DOFs x coarse free DOFs
  char form_id = 'a';
  int layers = kGlobalCorrectors;
  std::vector<double> residuals;  // per-column KKT residual norms
};

// Corrector C_f(target) on one patch: minimizes the form-energy mismatch
// over functions vanishing outside the patch and on its relative boundary,
// subject to I_H q = 0 enforced by Lagrange multipliers on the coarse nodes
// whose hat support intersects the patch.
Vec solve_corrector(const SpMat& form_matrix,
                    const InterpolationOperator& interp, const Patch& patch,
                    const Vec& target_column, double* kkt_residual = nullptr);

// One corrector solve per coarse free node; columns ordered by coarse DOF.
MsBasis build_ms_basis(const SpMat& form_matrix,
                       const InterpolationOperator& interp, char form_id,
                       int layers);

struct CoarseSystem {
  SpMat A, B, C, D;
  const MsBasis* basis_u = nullptr;
  const MsBasis* basis_p = nullptr;
};

CoarseSystem assemble_coarse_system(const AssembledForms& forms,
                                    const MsBasis& basis_u,
                                    const MsBasis& basis_p);

Vec prolong(const MsBasis& basis, const Vec& coarse_vec);

void export_ms_basis(const MsBasis& basis, const std::string& path,
                     const std::map<std::string, std::string>& metadata = {});
MsBasis import_ms_basis(const std::string& path,
                        std::map<std::string, std::string>* metadata = nullptr);

}  // namespace porolod
