#include <doctest.h>

#include "porolod/coefficients.hpp"
#include "porolod/errors.hpp"
#include "porolod/fem.hpp"
#include "porolod/timestepping.hpp"

using namespace porolod;

namespace {

struct Problem {
  Mesh mesh;
  FeSpace u_space, p_space;
  AssembledForms forms;
};

Problem make_problem(int n, std::uint64_t seed) {
  Problem pr;
  pr.mesh = build_structured_mesh(2, n);
  pr.u_space = build_space(pr.mesh, FieldKind::Vector, {X2_MIN, X2_MAX});
  pr.p_space = build_space(pr.mesh, FieldKind::Scalar,
                           {X1_MIN, X1_MAX, X2_MIN, X2_MAX});
  const auto field = sample_field(pr.mesh, CoefficientBounds{}, 1.0, 1.0, seed);
  pr.forms = assemble_forms(pr.u_space, pr.p_space, restrict_to_fine(field, pr.mesh));
  return pr;
}

}  // namespace

TEST_CASE("zero data stays zero") {
  auto pr = make_problem(4, 31);
  const Vec p0 = Vec::Zero(pr.p_space.n_free);
  const Vec u0 = consistent_initial_displacement(pr.forms.A, pr.forms.D, p0);
  CHECK(u0.norm() == 0.0);
  const TimeGrid grid{0.1, 5};
  const auto sol = run_time_stepping(
      pr.forms.A, pr.forms.B, pr.forms.C, pr.forms.D, u0, p0,
      [&](int) { return Vec::Zero(pr.p_space.n_free); }, grid);
  REQUIRE(sol.u.size() == 6);
  for (const Vec& v : sol.u) CHECK(v.norm() == 0.0);
  for (const Vec& v : sol.p) CHECK(v.norm() == 0.0);
}

TEST_CASE("consistent initial displacement solves the elasticity equation") {
  auto pr = make_problem(6, 32);
  const Vec p0 = interpolate_nodal(pr.p_space, [](double x, double y, double) {
    return (1 - x) * x * (1 - y) * y;
  });
  const Vec u0 = consistent_initial_displacement(pr.forms.A, pr.forms.D, p0);
  const Vec res = pr.forms.A * u0 - pr.forms.D.transpose() * p0;
  CHECK(res.norm() <= 1e-10 * (pr.forms.D.transpose() * p0).norm());
}

TEST_CASE("every step satisfies the discrete energy identity") {
  auto pr = make_problem(8, 33);
  const Vec p0 = interpolate_nodal(pr.p_space, [](double x, double y, double) {
    return (1 - x) * x * (1 - y) * y;
  });
  const Vec u0 = consistent_initial_displacement(pr.forms.A, pr.forms.D, p0);
  const Vec load = assemble_load(pr.p_space, {SourceTerm::Kind::Constant, 1.0, 0});
  const TimeGrid grid{0.01, 20};
  const auto sol = run_time_stepping(pr.forms.A, pr.forms.B, pr.forms.C,
                                     pr.forms.D, u0, p0,
                                     [&](int) { return load; }, grid);
  for (int n = 1; n <= grid.steps; ++n) {
    const double r = energy_identity_residual(
        pr.forms.A, pr.forms.B, pr.forms.C, load, sol.u[n - 1], sol.u[n],
        sol.p[n - 1], sol.p[n], grid.tau);
    CHECK(r <= 1e-10);
  }
}

TEST_CASE("with f = 0 the coupled energy is non-increasing") {
  auto pr = make_problem(8, 34);
  const Vec p0 = interpolate_nodal(pr.p_space, [](double x, double y, double) {
    return (1 - x) * x * (1 - y) * y;
  });
  const Vec u0 = consistent_initial_displacement(pr.forms.A, pr.forms.D, p0);
  const TimeGrid grid{0.05, 20};
  const auto sol = run_time_stepping(
      pr.forms.A, pr.forms.B, pr.forms.C, pr.forms.D, u0, p0,
      [&](int) { return Vec::Zero(pr.p_space.n_free); }, grid);
  double prev = -1.0;
  for (int n = 0; n <= grid.steps; ++n) {
    const double e = sol.u[n].dot(pr.forms.A * sol.u[n]) +
                     sol.p[n].dot(pr.forms.C * sol.p[n]);
    if (prev >= 0.0) CHECK(e <= prev * (1.0 + 1e-12));
    prev = e;
  }
  // dissipation drives the homogeneous solution toward zero
  CHECK(sol.p.back().norm() <= 0.5 * sol.p.front().norm());
}

TEST_CASE("constant-in-time source approaches a steady state") {
  auto pr = make_problem(6, 35);
  const Vec p0 = Vec::Zero(pr.p_space.n_free);
  const Vec u0 = Vec::Zero(pr.u_space.n_free);
  const Vec load = assemble_load(pr.p_space, {SourceTerm::Kind::Constant, 1.0, 0});
  const TimeGrid grid{0.5, 60};
  const auto sol = run_time_stepping(pr.forms.A, pr.forms.B, pr.forms.C,
                                     pr.forms.D, u0, p0,
                                     [&](int) { return load; }, grid);
  // steady state: B p_inf = load with u slaved through the elasticity solve
  Factorization fb(pr.forms.B, FactorKind::SPD);
  const Vec p_inf = fb.solve(load);
  CHECK((sol.p.back() - p_inf).norm() <= 1e-8 * p_inf.norm());
}

TEST_CASE("block stepper rejects inconsistent dimensions") {
  auto pr = make_problem(4, 36);
  BlockStepper stepper(pr.forms.A, pr.forms.B, pr.forms.C, pr.forms.D, 0.1);
  CHECK_THROWS(stepper.step(Vec::Zero(pr.u_space.n_free + 1),
                            Vec::Zero(pr.p_space.n_free),
                            Vec::Zero(pr.p_space.n_free)));
  CHECK_THROWS(BlockStepper(pr.forms.A, pr.forms.B, pr.forms.C, pr.forms.D, 0.0));
}

TEST_CASE("repeated runs are bit-identical") {
  auto pr = make_problem(5, 37);
  const Vec p0 = interpolate_nodal(pr.p_space, [](double x, double y, double) {
    return (1 - x) * x * (1 - y) * y;
  });
  const Vec u0 = consistent_initial_displacement(pr.forms.A, pr.forms.D, p0);
  const Vec load = assemble_load(pr.p_space, {SourceTerm::Kind::Constant, 1.0, 0});
  const TimeGrid grid{0.01, 10};
  const auto a = run_time_stepping(pr.forms.A, pr.forms.B, pr.forms.C, pr.forms.D,
                                   u0, p0, [&](int) { return load; }, grid);
  const auto b = run_time_stepping(pr.forms.A, pr.forms.B, pr.forms.C, pr.forms.D,
                                   u0, p0, [&](int) { return load; }, grid);
  for (int n = 0; n <= grid.steps; ++n) {
    CHECK((a.u[n] - b.u[n]).norm() == 0.0);
    CHECK((a.p[n] - b.p[n]).norm() == 0.0);
  }
}
