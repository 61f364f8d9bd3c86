#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <memory>
#include <stdexcept>

namespace porolod {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
using Triplet = Eigen::Triplet<double>;

enum class FactorKind {
  SPD,
  SymmetricIndefinite,
  General,
};

// Reusable sparse direct factorization. SPD systems use a Cholesky-type
// factorization; indefinite saddle systems and the nonsymmetric time-step
// block use sparse LU with a deterministic fill-reducing ordering.
class Factorization {
 public:
  Factorization(const SpMat& matrix, FactorKind kind) : kind_(kind) {
    if (matrix.rows() != matrix.cols()) {
      throw std::invalid_argument("factor: matrix must be square");
    }
    n_ = matrix.rows();
    if (kind == FactorKind::SPD) {
      ldlt_ = std::make_unique<Eigen::SimplicialLDLT<SpMat>>();
      ldlt_->compute(matrix);
      if (ldlt_->info() != Eigen::Success) {
        throw std::runtime_error("SPD factorization failed");
      }
      if ((ldlt_->vectorD().array() <= 0.0).any()) {
        throw std::runtime_error("matrix is not positive definite");
      }
    } else {
      lu_ = std::make_unique<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>>();
      lu_->compute(matrix);
      if (lu_->info() != Eigen::Success) {
        throw std::runtime_error("sparse LU factorization failed (singular system?)");
      }
    }
  }

  Vec solve(const Vec& rhs) const {
    if (rhs.size() != n_) {
      throw std::invalid_argument("solve: dimension mismatch");
    }
    return ldlt_ ? Vec(ldlt_->solve(rhs)) : Vec(lu_->solve(rhs));
  }

  FactorKind kind() const { return kind_; }
  Eigen::Index size() const { return n_; }

 private:
  FactorKind kind_;
  Eigen::Index n_ = 0;
  std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt_;
  std::unique_ptr<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>> lu_;
};

inline double max_abs(const SpMat& m) {
  double v = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      v = std::max(v, std::abs(it.value()));
    }
  }
  return v;
}

inline double symmetry_defect(const SpMat& m) {
  SpMat d = SpMat(m.transpose()) - m;
  return max_abs(d);
}

}  // namespace porolod
