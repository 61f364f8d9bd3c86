#include "porolod/fem.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "porolod/rng.hpp"

namespace porolod {

namespace {

struct ElementGeometry {
  double volume;
  double grad[4][3];  // gradient of P1 basis function per local vertex
};

ElementGeometry element_geometry(const Mesh& mesh, int e) {
  ElementGeometry g{};
  const auto& el = mesh.elements[e];
  const auto& v0 = mesh.vertices[el[0]];
  if (mesh.dim == 2) {
    double J[2][2];
    for (int k = 0; k < 2; ++k) {
      J[0][k] = mesh.vertices[el[k + 1]][0] - v0[0];
      J[1][k] = mesh.vertices[el[k + 1]][1] - v0[1];
    }
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    g.volume = 0.5 * det;
    // gradient of barycentric function k+1 = k-th row of J^{-1}
    const double inv[2][2] = {{J[1][1] / det, -J[0][1] / det},
                              {-J[1][0] / det, J[0][0] / det}};
    for (int k = 0; k < 2; ++k) {
      g.grad[k + 1][0] = inv[k][0];
      g.grad[k + 1][1] = inv[k][1];
    }
  } else {
    double J[3][3];
    for (int k = 0; k < 3; ++k) {
      for (int c = 0; c < 3; ++c) {
        J[c][k] = mesh.vertices[el[k + 1]][c] - v0[c];
      }
    }
    const double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                       J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                       J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
    g.volume = det / 6.0;
    double inv[3][3];
    inv[0][0] = (J[1][1] * J[2][2] - J[1][2] * J[2][1]) / det;
    inv[0][1] = (J[0][2] * J[2][1] - J[0][1] * J[2][2]) / det;
    inv[0][2] = (J[0][1] * J[1][2] - J[0][2] * J[1][1]) / det;
    inv[1][0] = (J[1][2] * J[2][0] - J[1][0] * J[2][2]) / det;
    inv[1][1] = (J[0][0] * J[2][2] - J[0][2] * J[2][0]) / det;
    inv[1][2] = (J[0][2] * J[1][0] - J[0][0] * J[1][2]) / det;
    inv[2][0] = (J[1][0] * J[2][1] - J[1][1] * J[2][0]) / det;
    inv[2][1] = (J[0][1] * J[2][0] - J[0][0] * J[2][1]) / det;
    inv[2][2] = (J[0][0] * J[1][1] - J[0][1] * J[1][0]) / det;
    // gradient of barycentric function k+1 = k-th row of J^{-1}
    for (int k = 0; k < 3; ++k) {
      for (int c = 0; c < 3; ++c) g.grad[k + 1][c] = inv[k][c];
    }
  }
  for (int c = 0; c < 3; ++c) {
    g.grad[0][c] = 0.0;
    for (int k = 1; k <= mesh.dim; ++k) g.grad[0][c] -= g.grad[k][c];
  }
  return g;
}

}  // namespace

FeSpace build_space(const Mesh& mesh, FieldKind kind,
                    std::vector<int> dirichlet_faces) {
  for (int tag : dirichlet_faces) {
    if (tag < 0 || tag >= 2 * mesh.dim) {
      throw std::invalid_argument("face tag out of range for mesh dimension");
    }
  }
  FeSpace space;
  space.mesh = &mesh;
  space.kind = kind;
  space.dirichlet_faces = std::move(dirichlet_faces);
  space.components = kind == FieldKind::Scalar ? 1 : mesh.dim;
  space.vertex_constrained.assign(mesh.n_vertices(), 0);
  std::vector<char> face_listed(2 * mesh.dim, 0);
  for (int tag : space.dirichlet_faces) face_listed[tag] = 1;
  for (const auto& facet : mesh.boundary_facets) {
    if (!face_listed[facet.face_tag]) continue;
    for (int v : facet.vertices) {
      if (v >= 0) space.vertex_constrained[v] = 1;
    }
  }
  space.dof_map.assign(mesh.n_vertices() * space.components, -1);
  int next = 0;
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (space.vertex_constrained[v]) continue;
    for (int c = 0; c < space.components; ++c) {
      space.dof_map[v * space.components + c] = next++;
    }
  }
  space.n_free = next;
  return space;
}

AssembledForms assemble_forms(const FeSpace& u_space, const FeSpace& p_space,
                              const FineParams& params) {
  const Mesh& mesh = *u_space.mesh;
  if (p_space.mesh != u_space.mesh) {
    throw std::invalid_argument("spaces must share one mesh");
  }
  if (static_cast<int>(params.kappa.size()) != mesh.n_elements() ||
      static_cast<int>(params.mu.size()) != mesh.n_elements() ||
      static_cast<int>(params.lambda.size()) != mesh.n_elements() ||
      static_cast<int>(params.alpha.size()) != mesh.n_elements()) {
    throw std::invalid_argument("parameter array length mismatch");
  }
  const int dim = mesh.dim;
  const int nv = dim + 1;
  std::vector<Triplet> tA, tB, tC, tD, tGu, tGp;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto geo = element_geometry(mesh, e);
    const auto& el = mesh.elements[e];
    const double vol = geo.volume;
    const double kap = params.kappa[e] / params.viscosity;
    const double invM = 1.0 / params.biot_modulus;
    const double mu = params.mu[e];
    const double lam = params.lambda[e];
    const double alp = params.alpha[e];
    for (int i = 0; i < nv; ++i) {
      const int pi = p_space.dof(el[i], 0);
      for (int j = 0; j < nv; ++j) {
        const int pj = p_space.dof(el[j], 0);
        double gg = 0.0;
        for (int c = 0; c < dim; ++c) gg += geo.grad[i][c] * geo.grad[j][c];
        // exact simplex mass: int phi_i phi_j = vol * (1+delta)/((d+1)(d+2))
        const double mass = vol * (i == j ? 2.0 : 1.0) / ((dim + 1) * (dim + 2));
        if (pi >= 0 && pj >= 0) {
          tB.emplace_back(pi, pj, kap * vol * gg);
          tC.emplace_back(pi, pj, invM * mass);
          tGp.emplace_back(pi, pj, vol * gg);
        }
        for (int a = 0; a < dim; ++a) {
          const int ui = u_space.dof(el[i], a);
          if (ui < 0) continue;
          for (int b = 0; b < dim; ++b) {
            const int uj = u_space.dof(el[j], b);
            if (uj < 0) continue;
            const double eps_contr =
                (a == b ? gg : 0.0) + geo.grad[i][b] * geo.grad[j][a];
            const double val =
                vol * (mu * eps_contr + lam * geo.grad[i][a] * geo.grad[j][b]);
            tA.emplace_back(ui, uj, val);
            if (a == b) tGu.emplace_back(ui, uj, vol * gg);
          }
        }
        // d(u,q): alpha * div(phi_j e_b) * phi_i; int_K phi_i = vol/(d+1)
        if (pi >= 0) {
          for (int b = 0; b < dim; ++b) {
            const int uj = u_space.dof(el[j], b);
            if (uj < 0) continue;
            tD.emplace_back(pi, uj, alp * geo.grad[j][b] * vol / (dim + 1));
          }
        }
      }
    }
  }
  AssembledForms forms;
  const auto build = [](std::vector<Triplet>& t, int rows, int cols) {
    SpMat m(rows, cols);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
  };
  forms.A = build(tA, u_space.n_free, u_space.n_free);
  forms.B = build(tB, p_space.n_free, p_space.n_free);
  forms.C = build(tC, p_space.n_free, p_space.n_free);
  forms.D = build(tD, p_space.n_free, u_space.n_free);
  forms.Gu = build(tGu, u_space.n_free, u_space.n_free);
  forms.Gp = build(tGp, p_space.n_free, p_space.n_free);
  return forms;
}

std::vector<double> source_nodal_values(const Mesh& mesh, const SourceTerm& f) {
  std::vector<double> nodal(mesh.n_vertices(), 0.0);
  switch (f.kind) {
    case SourceTerm::Kind::Zero:
      break;
    case SourceTerm::Kind::Constant:
      for (auto& v : nodal) v = f.value;
      break;
    case SourceTerm::Kind::RandomNodal: {
      SplitMix64 gen(f.seed);
      for (auto& v : nodal) v = gen.next_double();
      break;
    }
  }
  return nodal;
}

Vec assemble_load_from_nodal(const FeSpace& p_space,
                             const std::vector<double>& nodal) {
  const Mesh& mesh = *p_space.mesh;
  if (static_cast<int>(nodal.size()) != mesh.n_vertices()) {
    throw std::invalid_argument("nodal value length mismatch");
  }
  const int dim = mesh.dim;
  const int nv = dim + 1;
  Vec load = Vec::Zero(p_space.n_free);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& el = mesh.elements[e];
    const double vol = mesh.element_volume(e);
    for (int i = 0; i < nv; ++i) {
      const int pi = p_space.dof(el[i], 0);
      if (pi < 0) continue;
      double acc = 0.0;
      for (int j = 0; j < nv; ++j) {
        acc += (i == j ? 2.0 : 1.0) * nodal[el[j]];
      }
      load[pi] += vol * acc / ((dim + 1) * (dim + 2));
    }
  }
  return load;
}

Vec assemble_load(const FeSpace& p_space, const SourceTerm& f) {
  return assemble_load_from_nodal(p_space, source_nodal_values(*p_space.mesh, f));
}

Vec interpolate_nodal(const FeSpace& space, const ScalarFunction& g) {
  if (space.kind != FieldKind::Scalar) {
    throw std::invalid_argument("interpolate_nodal expects a scalar space");
  }
  const Mesh& mesh = *space.mesh;
  Vec out = Vec::Zero(space.n_free);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const auto& x = mesh.vertices[v];
    const double value = g(x[0], x[1], x[2]);
    const int dof = space.dof(v, 0);
    if (dof >= 0) {
      out[dof] = value;
    } else if (std::abs(value) > 1e-12) {
      throw std::invalid_argument(
          "initial data does not vanish on a Dirichlet face");
    }
  }
  return out;
}

double energy_norm(const Vec& vec, const SpMat& form) {
  const double q = vec.dot(form * vec);
  if (q < -1e-12 * std::max(1.0, vec.squaredNorm())) {
    throw std::runtime_error("energy_norm: negative quadratic form");
  }
  return std::sqrt(std::max(q, 0.0));
}

void p1_gradients(const Mesh& mesh, int e, double grads[4][3], double& volume) {
  const auto geo = element_geometry(mesh, e);
  volume = geo.volume;
  for (int k = 0; k < 4; ++k) {
    for (int c = 0; c < 3; ++c) grads[k][c] = geo.grad[k][c];
  }
}

void export_matrix_csv(const SpMat& m, const std::string& path) {
  std::ofstream f(path);
  f.precision(17);
  f << "row,col,value\n";
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      f << it.row() << "," << it.col() << "," << it.value() << "\n";
    }
  }
}

}  // namespace porolod
