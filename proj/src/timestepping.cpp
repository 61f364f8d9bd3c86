#include "porolod/timestepping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace porolod {

Vec consistent_initial_displacement(const SpMat& A, const SpMat& D,
                                    const Vec& p0) {
  Factorization fact(A, FactorKind::SPD);
  return fact.solve(D.transpose() * p0);
}

namespace {

SpMat assemble_block(const SpMat& A, const SpMat& B, const SpMat& C,
                     const SpMat& D, double tau) {
  const Eigen::Index nu = A.rows(), np = B.rows();
  const SpMat CB = C + tau * B;
  std::vector<Triplet> t;
  t.reserve(A.nonZeros() + 2 * D.nonZeros() + CB.nonZeros());
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      t.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int k = 0; k < D.outerSize(); ++k) {
    for (SpMat::InnerIterator it(D, k); it; ++it) {
      t.emplace_back(nu + it.row(), it.col(), it.value());    // D
      t.emplace_back(it.col(), nu + it.row(), -it.value());   // -D^T
    }
  }
  for (int k = 0; k < CB.outerSize(); ++k) {
    for (SpMat::InnerIterator it(CB, k); it; ++it) {
      t.emplace_back(nu + it.row(), nu + it.col(), it.value());
    }
  }
  SpMat block(nu + np, nu + np);
  block.setFromTriplets(t.begin(), t.end());
  block.makeCompressed();
  return block;
}

}  // namespace

BlockStepper::BlockStepper(const SpMat& A, const SpMat& B, const SpMat& C,
                           const SpMat& D, double tau)
    : nu_(A.rows()),
      np_(B.rows()),
      tau_(tau),
      block_(assemble_block(A, B, C, D, tau)),
      D_(D),
      C_(C),
      fact_(block_, FactorKind::General) {
  if (tau <= 0.0) throw std::invalid_argument("tau must be positive");
}

std::pair<Vec, Vec> BlockStepper::step(const Vec& u_prev, const Vec& p_prev,
                                       const Vec& load) const {
  if (u_prev.size() != nu_ || p_prev.size() != np_ || load.size() != np_) {
    throw std::invalid_argument("step: dimension mismatch");
  }
  Vec rhs = Vec::Zero(nu_ + np_);
  rhs.tail(np_) = tau_ * load + D_ * u_prev + C_ * p_prev;
  const Vec x = fact_.solve(rhs);
  return {x.head(nu_), x.tail(np_)};
}

TimeSeriesSolution run_time_stepping(const SpMat& A, const SpMat& B,
                                     const SpMat& C, const SpMat& D,
                                     const Vec& u0, const Vec& p0,
                                     const std::function<Vec(int)>& load_at,
                                     const TimeGrid& grid,
                                     const std::string& space_tag) {
  TimeSeriesSolution sol;
  sol.grid = grid;
  sol.space_tag = space_tag;
  sol.u.reserve(grid.steps + 1);
  sol.p.reserve(grid.steps + 1);
  sol.u.push_back(u0);
  sol.p.push_back(p0);
  if (grid.steps == 0) return sol;
  BlockStepper stepper(A, B, C, D, grid.tau);
  for (int n = 1; n <= grid.steps; ++n) {
    auto [un, pn] = stepper.step(sol.u.back(), sol.p.back(), load_at(n));
    sol.u.push_back(std::move(un));
    sol.p.push_back(std::move(pn));
  }
  return sol;
}

double energy_identity_residual(const SpMat& A, const SpMat& B, const SpMat& C,
                                const Vec& load, const Vec& u_prev,
                                const Vec& u, const Vec& p_prev, const Vec& p,
                                double tau) {
  const double term_a = u.dot(A * (u - u_prev));
  const double term_c = (p - p_prev).dot(C * p);
  const double term_b = tau * p.dot(B * p);
  const double rhs = tau * load.dot(p);
  const double scale = std::max(
      {1e-300, std::abs(term_a), std::abs(term_c), std::abs(term_b), std::abs(rhs)});
  return std::abs(term_a + term_c + term_b - rhs) / scale;
}

}  // namespace porolod
