#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace porolod {

// Boundary face tags for the unit square/cube: 2*i + 0 for x_{i+1}=0,
// 2*i + 1 for x_{i+1}=1.
enum FaceTag : int {
  X1_MIN = 0,
  X1_MAX = 1,
  X2_MIN = 2,
  X2_MAX = 3,
  X3_MIN = 4,
  X3_MAX = 5,
};

std::string face_tag_name(int tag);
int face_tag_from_name(const std::string& name);

struct BoundaryFacet {
  std::array<int, 3> vertices;  // vertices[2] = -1 in 2D
  int face_tag;
};

// Structured simplicial mesh of [0,1]^dim. In 2D every grid square is split
// by the diagonal from (i,j) to (i+1,j+1); in 3D every cube is split into
// the six Kuhn tetrahedra. Connectivity is deterministic (lexicographic by
// grid index).
struct Mesh {
  int dim = 2;
  int cells_per_side = 0;
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 4>> elements;  // element[3] = -1 in 2D
  std::vector<BoundaryFacet> boundary_facets;
  double mesh_size = 0.0;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  int verts_per_element() const { return dim + 1; }

  double element_volume(int e) const;
  std::array<double, 3> barycenter(int e) const;
};

Mesh build_structured_mesh(int dim, int cells_per_side);

// Index of the unique coarse element whose closure contains the barycenter
// of the given fine element. Pure arithmetic, valid for nested structured
// meshes (coarse cells_per_side divides fine cells_per_side).
int coarse_element_of(const Mesh& fine, int fine_element, const Mesh& coarse);

struct Patch {
  int center_node = -1;
  int layers = 0;
  std::vector<int> elements;       // coarse element indices, sorted
  std::vector<int> fine_elements;  // filled by populate_fine_elements
};

// Layer-0 patch = coarse elements containing the node; each further layer
// adds every element sharing at least one vertex with the current set.
Patch node_patch(const Mesh& coarse, int node, int layers);

void populate_fine_elements(Patch& patch, const Mesh& fine, const Mesh& coarse);

// Debug export of connectivity (vertex table and element table).
void export_mesh_csv(const Mesh& mesh, const std::string& vertex_path,
                     const std::string& element_path);

}  // namespace porolod
