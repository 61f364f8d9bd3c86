#include "porolod/lod.hpp"

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace porolod {

namespace {

// KKT machinery for one patch: form restricted to the patch-interior free
// DOFs, with Lagrange multipliers on the interpolation rows that touch the
// patch.
class PatchSolver {
 public:
  PatchSolver(const SpMat& form, const InterpolationOperator& interp,
              const std::vector<int>& patch_fine_elements) {
    const FeSpace& fs = *interp.fine_space;
    const Mesh& fine = *fs.mesh;
    // A fine vertex belongs to the patch interior iff every element
    // containing it lies in the patch (homogeneous Dirichlet truncation on
    // the relative boundary; vertices on the domain boundary keep their
    // free/constrained status from the space).
    std::vector<int> incident(fine.n_vertices(), 0), inside(fine.n_vertices(), 0);
    for (int e = 0; e < fine.n_elements(); ++e) {
      for (int k = 0; k < fine.verts_per_element(); ++k) {
        incident[fine.elements[e][k]] += 1;
      }
    }
    for (int e : patch_fine_elements) {
      for (int k = 0; k < fine.verts_per_element(); ++k) {
        inside[fine.elements[e][k]] += 1;
      }
    }
    for (int v = 0; v < fine.n_vertices(); ++v) {
      if (inside[v] == 0 || inside[v] != incident[v]) continue;
      for (int c = 0; c < fs.components; ++c) {
        const int dof = fs.dof(v, c);
        if (dof >= 0) patch_dofs_.push_back(dof);
      }
    }
    build(form, interp.matrix);
  }

  // Global variant: all fine free DOFs, all interpolation rows.
  PatchSolver(const SpMat& form, const InterpolationOperator& interp) {
    patch_dofs_.resize(form.rows());
    for (int i = 0; i < form.rows(); ++i) patch_dofs_[i] = i;
    build(form, interp.matrix);
  }

  // Solves for the corrector of `target` (full fine vector) and scatters it
  // back to a full fine vector.
  Vec solve(const SpMat& form, const Vec& target, double* residual) const {
    const int np = static_cast<int>(patch_dofs_.size());
    const int nr = static_cast<int>(constraint_rows_.size());
    Vec rhs = Vec::Zero(np + nr);
    const Vec st = form * target;
    for (int i = 0; i < np; ++i) rhs[i] = st[patch_dofs_[i]];
    const Vec x = fact_->solve(rhs);
    if (residual != nullptr) {
      *residual = (kkt_ * x - rhs).norm();
    }
    Vec corrector = Vec::Zero(form.rows());
    for (int i = 0; i < np; ++i) corrector[patch_dofs_[i]] = x[i];
    return corrector;
  }

 private:
  void build(const SpMat& form, const SpMat& interp_matrix) {
    const int np = static_cast<int>(patch_dofs_.size());
    std::vector<int> local(form.rows(), -1);
    for (int i = 0; i < np; ++i) local[patch_dofs_[i]] = i;
    std::vector<Triplet> t;
    for (int j : patch_dofs_) {
      for (SpMat::InnerIterator it(form, j); it; ++it) {
        const int li = local[it.row()];
        if (li >= 0) t.emplace_back(li, local[j], it.value());
      }
    }
    // Constraint rows: coarse free DOFs whose interpolation row has support
    // inside the patch.
    std::vector<char> row_used(interp_matrix.rows(), 0);
    for (int j : patch_dofs_) {
      for (SpMat::InnerIterator it(interp_matrix, j); it; ++it) {
        row_used[it.row()] = 1;
      }
    }
    std::vector<int> row_local(interp_matrix.rows(), -1);
    for (int r = 0; r < interp_matrix.rows(); ++r) {
      if (row_used[r]) {
        row_local[r] = static_cast<int>(constraint_rows_.size());
        constraint_rows_.push_back(r);
      }
    }
    const int nr = static_cast<int>(constraint_rows_.size());
    for (int j : patch_dofs_) {
      for (SpMat::InnerIterator it(interp_matrix, j); it; ++it) {
        const int lr = row_local[it.row()];
        t.emplace_back(np + lr, local[j], it.value());
        t.emplace_back(local[j], np + lr, it.value());
      }
    }
    kkt_.resize(np + nr, np + nr);
    kkt_.setFromTriplets(t.begin(), t.end());
    kkt_.makeCompressed();
    fact_ = std::make_unique<Factorization>(kkt_, FactorKind::SymmetricIndefinite);
  }

  std::vector<int> patch_dofs_;
  std::vector<int> constraint_rows_;
  SpMat kkt_;
  std::unique_ptr<Factorization> fact_;
};

}  // namespace

Vec solve_corrector(const SpMat& form_matrix,
                    const InterpolationOperator& interp, const Patch& patch,
                    const Vec& target_column, double* kkt_residual) {
  if (patch.fine_elements.empty()) {
    throw std::invalid_argument("patch has no fine elements; call populate_fine_elements");
  }
  PatchSolver solver(form_matrix, interp, patch.fine_elements);
  return solver.solve(form_matrix, target_column, kkt_residual);
}

MsBasis build_ms_basis(const SpMat& form_matrix,
                       const InterpolationOperator& interp, char form_id,
                       int layers) {
  const FeSpace& fs = *interp.fine_space;
  const FeSpace& cs = *interp.coarse_space;
  const Mesh& fine = *fs.mesh;
  const Mesh& coarse = *cs.mesh;
  const SpMat prolongation = nodal_prolongation(cs, fs);

  MsBasis result;
  result.form_id = form_id;
  result.layers = layers;
  result.residuals.assign(cs.n_free, 0.0);
  std::vector<Triplet> triplets;
  std::unique_ptr<PatchSolver> global_solver;  // shared by saturated patches
  const auto ensure_global = [&]() -> PatchSolver& {
    if (!global_solver) {
      global_solver = std::make_unique<PatchSolver>(form_matrix, interp);
    }
    return *global_solver;
  };

  for (int node = 0; node < coarse.n_vertices(); ++node) {
    if (cs.vertex_constrained[node]) continue;
    std::unique_ptr<PatchSolver> local_solver;
    PatchSolver* solver = nullptr;
    if (layers == kGlobalCorrectors) {
      solver = &ensure_global();
    } else {
      Patch patch = node_patch(coarse, node, layers);
      if (static_cast<int>(patch.elements.size()) == coarse.n_elements()) {
        solver = &ensure_global();
      } else {
        populate_fine_elements(patch, fine, coarse);
        try {
          local_solver = std::make_unique<PatchSolver>(form_matrix, interp,
                                                       patch.fine_elements);
        } catch (const std::exception& e) {
          throw std::runtime_error("corrector solve failed at coarse node " +
                                   std::to_string(node) + ": " + e.what());
        }
        solver = local_solver.get();
      }
    }
    for (int comp = 0; comp < cs.components; ++comp) {
      const int zdof = cs.dof(node, comp);
      const Vec target = prolongation.col(zdof);
      double residual = 0.0;
      const Vec corrector = solver->solve(form_matrix, target, &residual);
      result.residuals[zdof] = residual;
      const Vec column = target - corrector;
      for (int i = 0; i < column.size(); ++i) {
        if (column[i] != 0.0) triplets.emplace_back(i, zdof, column[i]);
      }
    }
  }
  result.basis.resize(fs.n_free, cs.n_free);
  result.basis.setFromTriplets(triplets.begin(), triplets.end());
  result.basis.makeCompressed();
  return result;
}

CoarseSystem assemble_coarse_system(const AssembledForms& forms,
                                    const MsBasis& basis_u,
                                    const MsBasis& basis_p) {
  if (basis_u.basis.rows() != forms.A.rows() ||
      basis_p.basis.rows() != forms.B.rows()) {
    throw std::invalid_argument("basis/form dimension mismatch");
  }
  CoarseSystem sys;
  sys.basis_u = &basis_u;
  sys.basis_p = &basis_p;
  const SpMat but = basis_u.basis.transpose();
  const SpMat bpt = basis_p.basis.transpose();
  sys.A = but * forms.A * basis_u.basis;
  sys.B = bpt * forms.B * basis_p.basis;
  sys.C = bpt * forms.C * basis_p.basis;
  sys.D = bpt * forms.D * basis_u.basis;
  return sys;
}

Vec prolong(const MsBasis& basis, const Vec& coarse_vec) {
  if (coarse_vec.size() != basis.basis.cols()) {
    throw std::invalid_argument("prolong: length mismatch");
  }
  return basis.basis * coarse_vec;
}

void export_ms_basis(const MsBasis& basis, const std::string& path,
                     const std::map<std::string, std::string>& metadata) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open basis file for write: " + path);
  f.precision(17);
  f << "# porolod ms basis v1\n";
  f << "form_id," << basis.form_id << "\n";
  f << "layers," << basis.layers << "\n";
  f << "rows," << basis.basis.rows() << "\n";
  f << "cols," << basis.basis.cols() << "\n";
  for (const auto& [key, value] : metadata) {
    f << "meta," << key << "," << value << "\n";
  }
  f << "residuals";
  for (double r : basis.residuals) f << "," << r;
  f << "\n";
  f << "row,col,value\n";
  for (int k = 0; k < basis.basis.outerSize(); ++k) {
    for (SpMat::InnerIterator it(basis.basis, k); it; ++it) {
      f << it.row() << "," << it.col() << "," << std::hexfloat << it.value()
        << std::defaultfloat << "\n";
    }
  }
}

MsBasis import_ms_basis(const std::string& path,
                        std::map<std::string, std::string>* metadata) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open basis file: " + path);
  std::string line;
  std::getline(f, line);
  if (line.rfind("# porolod ms basis", 0) != 0) {
    throw std::runtime_error("not a porolod basis file: " + path);
  }
  MsBasis basis;
  int rows = -1, cols = -1;
  while (std::getline(f, line)) {
    if (line.rfind("row,col,value", 0) == 0) break;
    std::istringstream ss(line);
    std::string key;
    std::getline(ss, key, ',');
    if (key == "form_id") {
      std::string v;
      std::getline(ss, v, ',');
      basis.form_id = v.empty() ? 'a' : v[0];
    } else if (key == "layers") {
      std::string v;
      std::getline(ss, v, ',');
      basis.layers = std::stoi(v);
    } else if (key == "rows") {
      std::string v;
      std::getline(ss, v, ',');
      rows = std::stoi(v);
    } else if (key == "cols") {
      std::string v;
      std::getline(ss, v, ',');
      cols = std::stoi(v);
    } else if (key == "meta") {
      std::string k, v;
      std::getline(ss, k, ',');
      std::getline(ss, v);
      if (metadata != nullptr) (*metadata)[k] = v;
    } else if (key == "residuals") {
      std::string v;
      while (std::getline(ss, v, ',')) basis.residuals.push_back(std::stod(v));
    }
  }
  if (rows < 0 || cols < 0) {
    throw std::runtime_error("basis file missing dimensions: " + path);
  }
  std::vector<Triplet> t;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b, c;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, c, ',');
    t.emplace_back(std::stoi(a), std::stoi(b), std::strtod(c.c_str(), nullptr));
  }
  basis.basis.resize(rows, cols);
  basis.basis.setFromTriplets(t.begin(), t.end());
  basis.basis.makeCompressed();
  return basis;
}

}  // namespace porolod
