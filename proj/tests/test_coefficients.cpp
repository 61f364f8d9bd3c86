#include <doctest.h>

#include <cstdio>
#include <numeric>

#include "porolod/coefficients.hpp"

using namespace porolod;

TEST_CASE("values stay inside the sampling bounds") {
  const Mesh eps = build_structured_mesh(2, 8);
  const CoefficientField f = sample_field(eps, CoefficientBounds{}, 1.0, 1.0, 7);
  for (double v : f.kappa) {
    CHECK(v >= 0.1);
    CHECK(v <= 0.12);
  }
  for (double v : f.mu) {
    CHECK(v >= 32.2);
    CHECK(v <= 62.2);
  }
  for (double v : f.lambda) {
    CHECK(v >= 40.98);
    CHECK(v <= 60.98);
  }
  for (double v : f.alpha) {
    CHECK(v >= 0.5);
    CHECK(v <= 1.0);
  }
  CHECK(f.kappa.size() == static_cast<std::size_t>(eps.n_elements()));
}

TEST_CASE("same seed gives identical fields") {
  const Mesh eps = build_structured_mesh(2, 4);
  const auto a = sample_field(eps, CoefficientBounds{}, 1.0, 1.0, 42);
  const auto b = sample_field(eps, CoefficientBounds{}, 1.0, 1.0, 42);
  CHECK(a.kappa == b.kappa);
  CHECK(a.mu == b.mu);
  CHECK(a.lambda == b.lambda);
  CHECK(a.alpha == b.alpha);
}

TEST_CASE("alpha substream is independent of the others") {
  const Mesh eps = build_structured_mesh(2, 4);
  const auto a = sample_field(eps, CoefficientBounds{}, 1.0, 1.0, 42);
  const auto b = sample_field(eps, CoefficientBounds{}, 1.0, 1.0, 42, 43);
  CHECK(a.kappa == b.kappa);
  CHECK(a.mu == b.mu);
  CHECK(a.lambda == b.lambda);
  CHECK(a.alpha != b.alpha);
}

TEST_CASE("sampler Monte Carlo mean") {
  // 2*71^2 = 10082 kappa samples, mean should be near 0.11
  const Mesh eps = build_structured_mesh(2, 71);
  const auto f = sample_field(eps, CoefficientBounds{}, 1.0, 1.0, 99);
  const double mean =
      std::accumulate(f.kappa.begin(), f.kappa.end(), 0.0) / f.kappa.size();
  CHECK(mean == doctest::Approx(0.11).epsilon(0.001 / 0.11));
}

TEST_CASE("rejects degenerate bounds and parameters") {
  const Mesh eps = build_structured_mesh(2, 2);
  CoefficientBounds bad;
  bad.kappa = {0.12, 0.1};
  CHECK_THROWS(sample_field(eps, bad, 1.0, 1.0, 1));
  CHECK_THROWS(sample_field(eps, CoefficientBounds{}, 0.0, 1.0, 1));
  CHECK_THROWS(sample_field(eps, CoefficientBounds{}, 1.0, -1.0, 1));
}

TEST_CASE("restriction to the same mesh is the identity") {
  const Mesh eps = build_structured_mesh(2, 4);
  const auto f = sample_field(eps, CoefficientBounds{}, 1.0, 1.0, 5);
  const auto fine = restrict_to_fine(f, eps);
  CHECK(fine.kappa == f.kappa);
  CHECK(fine.alpha == f.alpha);
}

TEST_CASE("restriction repeats each value (ratio)^dim times") {
  const Mesh eps = build_structured_mesh(2, 2);
  const Mesh fine = build_structured_mesh(2, 8);
  const auto f = sample_field(eps, CoefficientBounds{}, 1.0, 1.0, 5);
  const auto fp = restrict_to_fine(f, fine);
  for (int e = 0; e < eps.n_elements(); ++e) {
    int count = 0;
    for (double v : fp.kappa) {
      if (v == f.kappa[e]) ++count;
    }
    CHECK(count == 16);
  }
}

TEST_CASE("restriction rejects non-nested meshes") {
  const Mesh eps = build_structured_mesh(2, 4);
  const Mesh fine = build_structured_mesh(2, 6);
  const auto f = sample_field(eps, CoefficientBounds{}, 1.0, 1.0, 5);
  CHECK_THROWS(restrict_to_fine(f, fine));
}

TEST_CASE("csv export/import round trip") {
  const Mesh eps = build_structured_mesh(2, 3);
  const auto f = sample_field(eps, CoefficientBounds{}, 2.0, 3.0, 11);
  const std::string path = "field_roundtrip.csv";
  export_field_csv(f, path);
  const auto g = import_field_csv(eps, path, 2.0, 3.0);
  for (int e = 0; e < eps.n_elements(); ++e) {
    CHECK(g.kappa[e] == doctest::Approx(f.kappa[e]).epsilon(1e-15));
    CHECK(g.alpha[e] == doctest::Approx(f.alpha[e]).epsilon(1e-15));
  }
  std::remove(path.c_str());
}
