#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "porolod/interpolation.hpp"

using namespace porolod;

namespace {

Vec random_vec(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

int vertex_of_dof(const FeSpace& space, int dof) {
  for (int v = 0; v < space.mesh->n_vertices(); ++v) {
    for (int c = 0; c < space.components; ++c) {
      if (space.dof(v, c) == dof) return v;
    }
  }
  return -1;
}

}  // namespace

TEST_CASE("quasi-interpolation is projective over the prolongation") {
  for (auto kind : {FieldKind::Scalar, FieldKind::Vector}) {
    const Mesh fine = build_structured_mesh(2, 8);
    const Mesh coarse = build_structured_mesh(2, 4);
    const FeSpace fine_space = build_space(fine, kind, {X2_MIN, X2_MAX});
    const FeSpace coarse_space = build_space(coarse, kind, {X2_MIN, X2_MAX});
    const auto ih = quasi_interpolation(fine_space, coarse_space);
    const SpMat prolong = nodal_prolongation(coarse_space, fine_space);
    const Vec v = random_vec(coarse_space.n_free, 1);
    const Vec back = ih.matrix * (prolong * v);
    CHECK((back - v).norm() <= 1e-12 * v.norm());
  }
}

TEST_CASE("quasi-interpolation is idempotent") {
  const Mesh fine = build_structured_mesh(2, 8);
  const Mesh coarse = build_structured_mesh(2, 2);
  const FeSpace fine_space = build_space(fine, FieldKind::Scalar, {X1_MIN});
  const FeSpace coarse_space = build_space(coarse, FieldKind::Scalar, {X1_MIN});
  const auto ih = quasi_interpolation(fine_space, coarse_space);
  const SpMat prolong = nodal_prolongation(coarse_space, fine_space);
  const Vec v = random_vec(fine_space.n_free, 2);
  const Vec once = ih.matrix * v;
  const Vec twice = ih.matrix * (prolong * once);
  CHECK((twice - once).norm() <= 1e-12 * once.norm());
}

TEST_CASE("piecewise projection matches a dense per-element least squares") {
  const Mesh fine = build_structured_mesh(2, 6);
  const Mesh coarse = build_structured_mesh(2, 2);
  const FeSpace fine_space = build_space(fine, FieldKind::Scalar, {});
  const SpMat proj = piecewise_l2_projection(fine_space, coarse);
  const Vec v = random_vec(fine_space.n_free, 3);
  const Vec coeffs = proj * v;

  // midpoint quadrature on fine elements, exact for products of P1 functions
  for (int ce = 0; ce < coarse.n_elements(); ++ce) {
    Eigen::Matrix3d mass = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    Eigen::Matrix3d coarse_vand;
    for (int i = 0; i < 3; ++i) {
      const auto& p = coarse.vertices[coarse.elements[ce][i]];
      coarse_vand.col(i) << 1.0, p[0], p[1];
    }
    const Eigen::Matrix3d to_bary = coarse_vand.inverse();
    for (int fe = 0; fe < fine.n_elements(); ++fe) {
      if (coarse_element_of(fine, fe, coarse) != ce) continue;
      const double vol = fine.element_volume(fe);
      for (int q = 0; q < 3; ++q) {
        const auto& a = fine.vertices[fine.elements[fe][q]];
        const auto& b = fine.vertices[fine.elements[fe][(q + 1) % 3]];
        const Eigen::Vector3d mono(1.0, 0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]));
        const Eigen::Vector3d bary = to_bary * mono;
        const double fv = 0.5 * (v[fine_space.dof(fine.elements[fe][q], 0)] +
                                 v[fine_space.dof(fine.elements[fe][(q + 1) % 3], 0)]);
        mass += (vol / 3.0) * bary * bary.transpose();
        rhs += (vol / 3.0) * fv * bary;
      }
    }
    const Eigen::Vector3d local = mass.ldlt().solve(rhs);
    for (int i = 0; i < 3; ++i) {
      CHECK(coeffs[ce * 3 + i] == doctest::Approx(local[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("averaging takes the mean of incident element values") {
  const Mesh coarse = build_structured_mesh(2, 2);
  const FeSpace space = build_space(coarse, FieldKind::Scalar, {});
  const SpMat avg = averaging_operator(space);
  const int center = 4;  // vertex (0.5, 0.5), six incident triangles
  Vec dg = Vec::Zero(coarse.n_elements() * 3);
  std::vector<double> vals;
  double expected = 0.0;
  int hit = 0;
  for (int e = 0; e < coarse.n_elements(); ++e) {
    for (int i = 0; i < 3; ++i) {
      if (coarse.elements[e][i] == center) {
        const double v = 1.0 + hit;
        dg[e * 3 + i] = v;
        expected += v;
        ++hit;
      }
    }
  }
  REQUIRE(hit == 6);
  expected /= 6.0;
  const Vec nodal = avg * dg;
  CHECK(nodal[space.dof(center, 0)] == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("averaging drops constrained nodes") {
  const Mesh coarse = build_structured_mesh(2, 2);
  const FeSpace space = build_space(coarse, FieldKind::Scalar,
                                    {X1_MIN, X1_MAX, X2_MIN, X2_MAX});
  const SpMat avg = averaging_operator(space);
  CHECK(avg.rows() == 1);
  CHECK(avg.cols() == coarse.n_elements() * 3);
}

TEST_CASE("interpolation is local") {
  const Mesh fine = build_structured_mesh(2, 16);
  const Mesh coarse = build_structured_mesh(2, 4);
  const FeSpace fine_space = build_space(fine, FieldKind::Scalar, {});
  const FeSpace coarse_space = build_space(coarse, FieldKind::Scalar, {});
  const auto ih = quasi_interpolation(fine_space, coarse_space);
  const double H = 1.0 / coarse.cells_per_side;
  for (int r = 0; r < ih.matrix.outerSize(); ++r) {
    for (SpMat::InnerIterator it(ih.matrix, r); it; ++it) {
      const int cz = vertex_of_dof(coarse_space, static_cast<int>(it.row()));
      const int fz = vertex_of_dof(fine_space, static_cast<int>(it.col()));
      const auto& a = coarse.vertices[cz];
      const auto& b = fine.vertices[fz];
      const double dist = std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
      // hat support plus one averaging layer
      CHECK(dist <= 2.0 * H + 1e-12);
    }
  }
}

TEST_CASE("sup-norm stability across refinement levels") {
  const Vec probe = Vec::Ones(1);
  for (int nc : {2, 4, 8}) {
    const Mesh fine = build_structured_mesh(2, 32);
    const Mesh coarse = build_structured_mesh(2, nc);
    const FeSpace fine_space = build_space(fine, FieldKind::Scalar, {});
    const FeSpace coarse_space = build_space(coarse, FieldKind::Scalar, {});
    const auto ih = quasi_interpolation(fine_space, coarse_space);
    const Vec v = random_vec(fine_space.n_free, 40 + nc);
    const Vec w = ih.matrix * v;
    CHECK(w.cwiseAbs().maxCoeff() <= 10.0 * v.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("prolongation reproduces linear functions exactly") {
  const Mesh fine = build_structured_mesh(2, 12);
  const Mesh coarse = build_structured_mesh(2, 3);
  const FeSpace fine_space = build_space(fine, FieldKind::Scalar, {});
  const FeSpace coarse_space = build_space(coarse, FieldKind::Scalar, {});
  const SpMat prolong = nodal_prolongation(coarse_space, fine_space);
  const auto linear = [](double x, double y, double) { return 2 * x - 3 * y + 1; };
  const Vec cv = interpolate_nodal(coarse_space, linear);
  const Vec fv = interpolate_nodal(fine_space, linear);
  CHECK((prolong * cv - fv).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("3D prolongation and projectivity") {
  const Mesh fine = build_structured_mesh(3, 4);
  const Mesh coarse = build_structured_mesh(3, 2);
  const FeSpace fine_space = build_space(fine, FieldKind::Vector, {X3_MAX});
  const FeSpace coarse_space = build_space(coarse, FieldKind::Vector, {X3_MAX});
  const auto ih = quasi_interpolation(fine_space, coarse_space);
  const SpMat prolong = nodal_prolongation(coarse_space, fine_space);
  const Vec v = random_vec(coarse_space.n_free, 7);
  CHECK((ih.matrix * (prolong * v) - v).norm() <= 1e-11 * v.norm());
}
