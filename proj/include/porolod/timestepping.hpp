#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "porolod/linalg.hpp"

namespace porolod {

struct TimeGrid {
  double tau = 0.0;
  int steps = 0;  // N; t_n = n*tau, T = N*tau
  double final_time() const { return tau * steps; }
};

struct TimeSeriesSolution {
  TimeGrid grid;
  std::vector<Vec> u;  // N+1 entries, index 0 = initial data
  std::vector<Vec> p;
  std::string space_tag;  // "fine" | "ms"
};

// u0 from a(u0, v) = d(v, p0).
Vec consistent_initial_displacement(const SpMat& A, const SpMat& D,
                                    const Vec& p0);

// Backward Euler stepper for the coupled block system
//   [A, -D^T; D, C + tau*B] [u^n; p^n] = [0; tau*f^n + D u^{n-1} + C p^{n-1}],
// factored once and reused across all steps (tau is constant).
class BlockStepper {
 public:
  BlockStepper(const SpMat& A, const SpMat& B, const SpMat& C, const SpMat& D,
               double tau);

  std::pair<Vec, Vec> step(const Vec& u_prev, const Vec& p_prev,
                           const Vec& load) const;

  const SpMat& block_matrix() const { return block_; }
  double tau() const { return tau_; }

 private:
  Eigen::Index nu_, np_;
  double tau_;
  SpMat block_;
  const SpMat D_;
  const SpMat C_;
  Factorization fact_;
};

// Sequential run from consistent initial data. load_at(n) must return the
// assembled source vector (f^n, q) for step n in {1..N}.
TimeSeriesSolution run_time_stepping(const SpMat& A, const SpMat& B,
                                     const SpMat& C, const SpMat& D,
                                     const Vec& u0, const Vec& p0,
                                     const std::function<Vec(int)>& load_at,
                                     const TimeGrid& grid,
                                     const std::string& space_tag = "fine");

// Relative residual of the per-step identity
//   a(u^n, u^n - u^{n-1}) + c(p^n - p^{n-1}, p^n) + tau b(p^n, p^n)
//     = tau (f^n, p^n),
// the defining algebraic property of each backward Euler step.
double energy_identity_residual(const SpMat& A, const SpMat& B, const SpMat& C,
                                const Vec& load, const Vec& u_prev,
                                const Vec& u, const Vec& p_prev, const Vec& p,
                                double tau);

}  // namespace porolod
