#include "porolod/interpolation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>

namespace porolod {

namespace {

void check_nested(const Mesh& fine, const Mesh& coarse) {
  if (fine.dim != coarse.dim ||
      fine.cells_per_side % coarse.cells_per_side != 0) {
    throw std::invalid_argument("meshes are not nested");
  }
}

// Barycentric coordinates of point x in coarse element e.
void barycentric(const Mesh& mesh, int e, const std::array<double, 3>& x,
                 double lambda[4]) {
  double grads[4][3], vol;
  p1_gradients(mesh, e, grads, vol);
  const auto& y0 = mesh.vertices[mesh.elements[e][0]];
  for (int k = 0; k < mesh.dim + 1; ++k) {
    lambda[k] = (k == 0 ? 1.0 : 0.0);
    for (int c = 0; c < mesh.dim; ++c) lambda[k] += grads[k][c] * (x[c] - y0[c]);
  }
}

// Expands a scalar-node operator to act component-wise on vector DOFs.
SpMat expand_components(const SpMat& scalar_op, int components) {
  if (components == 1) return scalar_op;
  std::vector<Triplet> t;
  t.reserve(scalar_op.nonZeros() * components);
  for (int k = 0; k < scalar_op.outerSize(); ++k) {
    for (SpMat::InnerIterator it(scalar_op, k); it; ++it) {
      for (int c = 0; c < components; ++c) {
        t.emplace_back(it.row() * components + c, it.col() * components + c,
                       it.value());
      }
    }
  }
  SpMat out(scalar_op.rows() * components, scalar_op.cols() * components);
  out.setFromTriplets(t.begin(), t.end());
  out.makeCompressed();
  return out;
}

}  // namespace

SpMat piecewise_l2_projection(const FeSpace& fine_scalar_space,
                              const Mesh& coarse_mesh) {
  const Mesh& fine = *fine_scalar_space.mesh;
  check_nested(fine, coarse_mesh);
  const int dim = fine.dim;
  const int nloc = dim + 1;
  // Right-hand sides r_{K,i} = int_K v lambda_i accumulated from the fine
  // elements contained in K; both factors are P1 on each fine element.
  std::vector<Triplet> rhs_t;
  for (int fe = 0; fe < fine.n_elements(); ++fe) {
    const int ce = coarse_element_of(fine, fe, coarse_mesh);
    const auto& el = fine.elements[fe];
    const double vol = fine.element_volume(fe);
    double lam[4][4];  // lam[m][i] = lambda_i^K at fine vertex m
    for (int m = 0; m < nloc; ++m) {
      barycentric(coarse_mesh, ce, fine.vertices[el[m]], lam[m]);
    }
    for (int m = 0; m < nloc; ++m) {
      const int col = fine_scalar_space.dof(el[m], 0);
      if (col < 0) continue;
      for (int i = 0; i < nloc; ++i) {
        double acc = 0.0;
        for (int j = 0; j < nloc; ++j) {
          acc += (m == j ? 2.0 : 1.0) * lam[j][i];
        }
        rhs_t.emplace_back(ce * nloc + i, col,
                           vol * acc / ((dim + 1) * (dim + 2)));
      }
    }
  }
  SpMat rhs(coarse_mesh.n_elements() * nloc, fine_scalar_space.n_free);
  rhs.setFromTriplets(rhs_t.begin(), rhs_t.end());
  // Block-diagonal inverse of the coarse local mass matrices.
  std::vector<Triplet> inv_t;
  for (int ce = 0; ce < coarse_mesh.n_elements(); ++ce) {
    const double vol = coarse_mesh.element_volume(ce);
    Eigen::MatrixXd mass(nloc, nloc);
    for (int i = 0; i < nloc; ++i) {
      for (int j = 0; j < nloc; ++j) {
        mass(i, j) = vol * (i == j ? 2.0 : 1.0) / ((dim + 1) * (dim + 2));
      }
    }
    const Eigen::MatrixXd inv = mass.inverse();
    for (int i = 0; i < nloc; ++i) {
      for (int j = 0; j < nloc; ++j) {
        inv_t.emplace_back(ce * nloc + i, ce * nloc + j, inv(i, j));
      }
    }
  }
  SpMat inv_mass(coarse_mesh.n_elements() * nloc,
                 coarse_mesh.n_elements() * nloc);
  inv_mass.setFromTriplets(inv_t.begin(), inv_t.end());
  SpMat proj = inv_mass * rhs;
  proj.makeCompressed();
  return proj;
}

SpMat averaging_operator(const FeSpace& coarse_scalar_space) {
  const Mesh& coarse = *coarse_scalar_space.mesh;
  const int nloc = coarse.dim + 1;
  std::vector<int> card(coarse.n_vertices(), 0);
  for (int e = 0; e < coarse.n_elements(); ++e) {
    for (int k = 0; k < nloc; ++k) card[coarse.elements[e][k]] += 1;
  }
  std::vector<Triplet> t;
  for (int e = 0; e < coarse.n_elements(); ++e) {
    for (int k = 0; k < nloc; ++k) {
      const int v = coarse.elements[e][k];
      const int row = coarse_scalar_space.dof(v, 0);
      if (row < 0) continue;
      t.emplace_back(row, e * nloc + k, 1.0 / card[v]);
    }
  }
  SpMat avg(coarse_scalar_space.n_free, coarse.n_elements() * nloc);
  avg.setFromTriplets(t.begin(), t.end());
  avg.makeCompressed();
  return avg;
}

InterpolationOperator quasi_interpolation(const FeSpace& fine_space,
                                          const FeSpace& coarse_space) {
  if (fine_space.kind != coarse_space.kind) {
    throw std::invalid_argument("spaces have different kinds");
  }
  auto faces_f = fine_space.dirichlet_faces;
  auto faces_c = coarse_space.dirichlet_faces;
  std::sort(faces_f.begin(), faces_f.end());
  std::sort(faces_c.begin(), faces_c.end());
  if (faces_f != faces_c) {
    throw std::invalid_argument("incompatible Dirichlet masks");
  }
  check_nested(*fine_space.mesh, *coarse_space.mesh);
  // Scalar operator on matching masks; vector spaces act component-wise.
  const FeSpace fine_scalar =
      build_space(*fine_space.mesh, FieldKind::Scalar, faces_f);
  const FeSpace coarse_scalar =
      build_space(*coarse_space.mesh, FieldKind::Scalar, faces_c);
  const SpMat proj = piecewise_l2_projection(fine_scalar, *coarse_space.mesh);
  const SpMat avg = averaging_operator(coarse_scalar);
  SpMat scalar_ih = avg * proj;
  scalar_ih.prune(0.0, 1e-14);
  scalar_ih.makeCompressed();
  InterpolationOperator op;
  op.fine_space = &fine_space;
  op.coarse_space = &coarse_space;
  op.matrix = expand_components(scalar_ih, fine_space.components);
  return op;
}

SpMat nodal_prolongation(const FeSpace& coarse_space,
                         const FeSpace& fine_space) {
  const Mesh& fine = *fine_space.mesh;
  const Mesh& coarse = *coarse_space.mesh;
  check_nested(fine, coarse);
  const int n = coarse.cells_per_side;
  const FeSpace fine_scalar =
      build_space(fine, FieldKind::Scalar, fine_space.dirichlet_faces);
  const FeSpace coarse_scalar =
      build_space(coarse, FieldKind::Scalar, coarse_space.dirichlet_faces);
  std::vector<Triplet> t;
  for (int v = 0; v < fine.n_vertices(); ++v) {
    const int row = fine_scalar.dof(v, 0);
    if (row < 0) continue;
    const auto& x = fine.vertices[v];
    int cell[3] = {0, 0, 0};
    double frac[3] = {0.0, 0.0, 0.0};
    for (int c = 0; c < coarse.dim; ++c) {
      int i = static_cast<int>(x[c] * n);
      if (i >= n) i = n - 1;
      cell[c] = i;
      frac[c] = x[c] * n - i;
    }
    int ce;
    if (coarse.dim == 2) {
      const int local = frac[1] <= frac[0] ? 0 : 1;
      ce = 2 * (cell[1] * n + cell[0]) + local;
    } else {
      int order[3] = {0, 1, 2};
      std::sort(order, order + 3,
                [&](int a, int b) {
                  return frac[a] != frac[b] ? frac[a] > frac[b] : a < b;
                });
      static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                          {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
      int local = 0;
      for (int p = 0; p < 6; ++p) {
        if (perms[p][0] == order[0] && perms[p][1] == order[1]) local = p;
      }
      ce = 6 * ((cell[2] * n + cell[1]) * n + cell[0]) + local;
    }
    double lam[4];
    barycentric(coarse, ce, x, lam);
    for (int k = 0; k < coarse.dim + 1; ++k) {
      const int col = coarse_scalar.dof(coarse.elements[ce][k], 0);
      if (col < 0 || std::abs(lam[k]) < 1e-14) continue;
      t.emplace_back(row, col, lam[k]);
    }
  }
  SpMat scalar_prolong(fine_scalar.n_free, coarse_scalar.n_free);
  scalar_prolong.setFromTriplets(t.begin(), t.end());
  scalar_prolong.makeCompressed();
  return expand_components(scalar_prolong, fine_space.components);
}

}  // namespace porolod
