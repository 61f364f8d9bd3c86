#include "porolod/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace porolod {

std::string face_tag_name(int tag) {
  const int axis = tag / 2 + 1;
  const int side = tag % 2;
  return "x" + std::to_string(axis) + "=" + std::to_string(side);
}

int face_tag_from_name(const std::string& name) {
  for (int tag = 0; tag < 6; ++tag) {
    if (face_tag_name(tag) == name) return tag;
  }
  throw std::invalid_argument("unknown face tag: " + name);
}

double Mesh::element_volume(int e) const {
  const auto& el = elements[e];
  const auto& v0 = vertices[el[0]];
  if (dim == 2) {
    const auto& v1 = vertices[el[1]];
    const auto& v2 = vertices[el[2]];
    const double ax = v1[0] - v0[0], ay = v1[1] - v0[1];
    const double bx = v2[0] - v0[0], by = v2[1] - v0[1];
    return 0.5 * (ax * by - ay * bx);
  }
  double m[3][3];
  for (int k = 0; k < 3; ++k) {
    for (int c = 0; c < 3; ++c) m[k][c] = vertices[el[k + 1]][c] - v0[c];
  }
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return det / 6.0;
}

std::array<double, 3> Mesh::barycenter(int e) const {
  std::array<double, 3> bc = {0.0, 0.0, 0.0};
  const int nv = verts_per_element();
  for (int k = 0; k < nv; ++k) {
    const auto& v = vertices[elements[e][k]];
    for (int c = 0; c < 3; ++c) bc[c] += v[c];
  }
  for (int c = 0; c < 3; ++c) bc[c] /= nv;
  return bc;
}

namespace {

// The six permutations of (0,1,2) in lexicographic order, with parity.
constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                              {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
constexpr int kPermSign[6] = {1, -1, -1, 1, 1, -1};

void build_2d(Mesh& mesh, int n) {
  const double h = 1.0 / n;
  const auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  mesh.vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.vertices.push_back({i * h, j * h, 0.0});
    }
  }
  mesh.elements.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.elements.push_back({v00, v10, v11, -1});  // lower (y <= x locally)
      mesh.elements.push_back({v00, v11, v01, -1});  // upper
    }
  }
  for (int j = 0; j < n; ++j) {
    mesh.boundary_facets.push_back({{vid(0, j), vid(0, j + 1), -1}, X1_MIN});
    mesh.boundary_facets.push_back({{vid(n, j), vid(n, j + 1), -1}, X1_MAX});
  }
  for (int i = 0; i < n; ++i) {
    mesh.boundary_facets.push_back({{vid(i, 0), vid(i + 1, 0), -1}, X2_MIN});
    mesh.boundary_facets.push_back({{vid(i, n), vid(i + 1, n), -1}, X2_MAX});
  }
  mesh.mesh_size = std::sqrt(2.0) * h;
}

void build_3d(Mesh& mesh, int n) {
  const double h = 1.0 / n;
  const auto vid = [n](int i, int j, int k) {
    return (k * (n + 1) + j) * (n + 1) + i;
  };
  mesh.vertices.reserve((n + 1) * (n + 1) * (n + 1));
  for (int k = 0; k <= n; ++k) {
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= n; ++i) {
        mesh.vertices.push_back({i * h, j * h, k * h});
      }
    }
  }
  mesh.elements.reserve(6 * n * n * n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const int base[3] = {i, j, k};
        for (int p = 0; p < 6; ++p) {
          // Kuhn tetrahedron: walk from the cube corner to the opposite
          // corner adding one unit step per permuted axis.
          int corner[4][3];
          for (int c = 0; c < 3; ++c) corner[0][c] = base[c];
          for (int step = 0; step < 3; ++step) {
            for (int c = 0; c < 3; ++c) corner[step + 1][c] = corner[step][c];
            corner[step + 1][kPerms[p][step]] += 1;
          }
          std::array<int, 4> el;
          for (int v = 0; v < 4; ++v) {
            el[v] = vid(corner[v][0], corner[v][1], corner[v][2]);
          }
          if (kPermSign[p] < 0) std::swap(el[1], el[2]);  // keep volume positive
          mesh.elements.push_back(el);
        }
      }
    }
  }
  // Boundary triangles: the two Kuhn-compatible triangles per boundary
  // square, split by the diagonal from the low corner to the high corner.
  const auto add_face = [&](int axis, int side) {
    const int tag = 2 * axis + side;
    const int fixed = side == 0 ? 0 : n;
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a < n; ++a) {
        int q[4][3];  // square corners (a,b),(a+1,b),(a,b+1),(a+1,b+1)
        for (int s = 0; s < 4; ++s) {
          int uv[2] = {a + (s & 1), b + (s >> 1)};
          int idx = 0;
          for (int c = 0; c < 3; ++c) {
            q[s][c] = (c == axis) ? fixed : uv[idx++];
          }
        }
        const auto V = [&](int s) { return vid(q[s][0], q[s][1], q[s][2]); };
        mesh.boundary_facets.push_back({{V(0), V(1), V(3)}, tag});
        mesh.boundary_facets.push_back({{V(0), V(3), V(2)}, tag});
      }
    }
  };
  for (int axis = 0; axis < 3; ++axis) {
    for (int side = 0; side < 2; ++side) add_face(axis, side);
  }
  mesh.mesh_size = std::sqrt(3.0) * h;
}

}  // namespace

Mesh build_structured_mesh(int dim, int cells_per_side) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("dim must be 2 or 3");
  }
  if (cells_per_side < 1) {
    throw std::invalid_argument("cells_per_side must be positive");
  }
  Mesh mesh;
  mesh.dim = dim;
  mesh.cells_per_side = cells_per_side;
  if (dim == 2) {
    build_2d(mesh, cells_per_side);
  } else {
    build_3d(mesh, cells_per_side);
  }
  return mesh;
}

int coarse_element_of(const Mesh& fine, int fine_element, const Mesh& coarse) {
  if (fine.dim != coarse.dim) {
    throw std::invalid_argument("meshes have different dimension");
  }
  if (fine.cells_per_side % coarse.cells_per_side != 0) {
    throw std::invalid_argument("meshes are not nested");
  }
  const int n = coarse.cells_per_side;
  const auto bc = fine.barycenter(fine_element);
  int cell[3] = {0, 0, 0};
  double frac[3] = {0.0, 0.0, 0.0};
  for (int c = 0; c < coarse.dim; ++c) {
    int i = static_cast<int>(bc[c] * n);
    if (i >= n) i = n - 1;
    cell[c] = i;
    frac[c] = bc[c] * n - i;
  }
  if (coarse.dim == 2) {
    const int cell_index = cell[1] * n + cell[0];
    const int local = frac[1] <= frac[0] ? 0 : 1;
    return 2 * cell_index + local;
  }
  const int cell_index = (cell[2] * n + cell[1]) * n + cell[0];
  // The containing Kuhn tetrahedron is determined by the descending order
  // of the fractional coordinates.
  int order[3] = {0, 1, 2};
  std::sort(order, order + 3,
            [&](int a, int b) { return frac[a] > frac[b]; });
  for (int p = 0; p < 6; ++p) {
    if (kPerms[p][0] == order[0] && kPerms[p][1] == order[1]) {
      return 6 * cell_index + p;
    }
  }
  return -1;  // unreachable
}

Patch node_patch(const Mesh& coarse, int node, int layers) {
  if (node < 0 || node >= coarse.n_vertices()) {
    throw std::invalid_argument("node out of range");
  }
  if (layers < 0) throw std::invalid_argument("layers must be nonnegative");
  // vertex -> incident elements
  std::vector<std::vector<int>> incident(coarse.n_vertices());
  for (int e = 0; e < coarse.n_elements(); ++e) {
    for (int k = 0; k < coarse.verts_per_element(); ++k) {
      incident[coarse.elements[e][k]].push_back(e);
    }
  }
  std::set<int> elems(incident[node].begin(), incident[node].end());
  for (int l = 0; l < layers; ++l) {
    if (static_cast<int>(elems.size()) == coarse.n_elements()) break;
    std::set<int> verts;
    for (int e : elems) {
      for (int k = 0; k < coarse.verts_per_element(); ++k) {
        verts.insert(coarse.elements[e][k]);
      }
    }
    std::set<int> next = elems;
    for (int v : verts) {
      for (int e : incident[v]) next.insert(e);
    }
    elems.swap(next);
  }
  Patch patch;
  patch.center_node = node;
  patch.layers = layers;
  patch.elements.assign(elems.begin(), elems.end());
  return patch;
}

void populate_fine_elements(Patch& patch, const Mesh& fine,
                            const Mesh& coarse) {
  std::vector<char> in_patch(coarse.n_elements(), 0);
  for (int e : patch.elements) in_patch[e] = 1;
  patch.fine_elements.clear();
  for (int fe = 0; fe < fine.n_elements(); ++fe) {
    if (in_patch[coarse_element_of(fine, fe, coarse)]) {
      patch.fine_elements.push_back(fe);
    }
  }
}

void export_mesh_csv(const Mesh& mesh, const std::string& vertex_path,
                     const std::string& element_path) {
  std::ofstream vf(vertex_path);
  vf << "index,x1,x2,x3\n";
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    vf << v << "," << mesh.vertices[v][0] << "," << mesh.vertices[v][1] << ","
       << mesh.vertices[v][2] << "\n";
  }
  std::ofstream ef(element_path);
  ef << "index,v0,v1,v2,v3\n";
  for (int e = 0; e < mesh.n_elements(); ++e) {
    ef << e;
    for (int k = 0; k < 4; ++k) ef << "," << mesh.elements[e][k];
    ef << "\n";
  }
}

}  // namespace porolod
