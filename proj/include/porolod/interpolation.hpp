#pragma once

#include "porolod/fem.hpp"
#include "porolod/linalg.hpp"
#include "porolod/mesh.hpp"

namespace porolod {

// Sparse quasi-interpolation I_H = E_H o Pi_H mapping fine free DOFs to
// coarse free DOFs. Projective: applying it to the fine representation of a
// coarse P1 function recovers that function's coarse coefficients.
struct InterpolationOperator {
  const FeSpace* fine_space = nullptr;
  const FeSpace* coarse_space = nullptr;
  SpMat matrix;  // coarse free DOFs x fine free DOFs
};

// Elementwise L2 projection onto discontinuous P1(T_H). Rows are the
// (element, local vertex) coefficients in coarse element order, columns are
// the free DOFs of the scalar fine space.
SpMat piecewise_l2_projection(const FeSpace& fine_scalar_space,
                              const Mesh& coarse_mesh);

// Nodal averaging from discontinuous P1(T_H) onto the free nodes of the
// scalar coarse space: value at z = mean of the incident element-local
// values. Constrained nodes are dropped.
SpMat averaging_operator(const FeSpace& coarse_scalar_space);

InterpolationOperator quasi_interpolation(const FeSpace& fine_space,
                                          const FeSpace& coarse_space);

// Nodal embedding of the coarse space into the fine space (fine free DOFs x
// coarse free DOFs); exact for nested structured meshes.
SpMat nodal_prolongation(const FeSpace& coarse_space, const FeSpace& fine_space);

}  // namespace porolod
