#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "porolod/coefficients.hpp"
#include "porolod/linalg.hpp"
#include "porolod/mesh.hpp"

namespace porolod {

enum class FieldKind { Scalar, Vector };

// P1 space with homogeneous Dirichlet constraints on the listed faces.
// Vertices on a constrained face are fixed in all components.
struct FeSpace {
  const Mesh* mesh = nullptr;
  FieldKind kind = FieldKind::Scalar;
  std::vector<int> dirichlet_faces;
  int components = 1;
  std::vector<char> vertex_constrained;  // per vertex
  std::vector<int> dof_map;              // vertex*components+comp -> dof or -1
  int n_free = 0;

  int dof(int vertex, int comp) const {
    return dof_map[vertex * components + comp];
  }
};

FeSpace build_space(const Mesh& mesh, FieldKind kind,
                    std::vector<int> dirichlet_faces);

struct AssembledForms {
  SpMat A;   // elasticity form a on displacement free DOFs
  SpMat B;   // Darcy form b on pressure free DOFs
  SpMat C;   // scaled mass form c on pressure free DOFs
  SpMat D;   // coupling form d: rows = pressure DOFs, cols = displacement DOFs
  SpMat Gu;  // unit-coefficient gradient Gram on displacement DOFs
  SpMat Gp;  // unit-coefficient gradient Gram on pressure DOFs
};

AssembledForms assemble_forms(const FeSpace& u_space, const FeSpace& p_space,
                              const FineParams& params);

struct SourceTerm {
  enum class Kind { Zero, Constant, RandomNodal };
  Kind kind = Kind::Zero;
  double value = 0.0;        // Constant
  std::uint64_t seed = 0;    // RandomNodal, values uniform in [0,1)
};

// Nodal values of the source on every mesh vertex (P1 representation).
std::vector<double> source_nodal_values(const Mesh& mesh, const SourceTerm& f);

// Load vector (f, phi_z) over free pressure DOFs, with f the P1 interpolant
// given by its nodal values.
Vec assemble_load(const FeSpace& p_space, const SourceTerm& f);
Vec assemble_load_from_nodal(const FeSpace& p_space,
                             const std::vector<double>& nodal);

using ScalarFunction = std::function<double(double, double, double)>;

// Nodal interpolation of g on the free vertices of a scalar space. Rejects
// data that does not vanish on the Dirichlet faces.
Vec interpolate_nodal(const FeSpace& space, const ScalarFunction& g);

double energy_norm(const Vec& vec, const SpMat& form);

// Constant P1 basis gradients and signed volume of one element.
void p1_gradients(const Mesh& mesh, int e, double grads[4][3], double& volume);

void export_matrix_csv(const SpMat& m, const std::string& path);

}  // namespace porolod
