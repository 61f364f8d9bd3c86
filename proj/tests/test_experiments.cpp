#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "porolod/experiments.hpp"

using namespace porolod;

TEST_CASE("preset parameters") {
  const auto e1 = preset("exp1");
  CHECK(e1.dim == 2);
  CHECK(e1.fine_cells == 128);
  CHECK(e1.eps_cells == 32);
  CHECK(e1.tau == 0.01);
  CHECK(e1.T == 1.0);
  CHECK(e1.steps() == 100);
  CHECK(e1.coarse_cells == std::vector<int>{2, 4, 8, 16, 32});
  CHECK(e1.f.kind == SourceTerm::Kind::Constant);
  CHECK(e1.f.value == 1.0);
  CHECK(e1.p0 == "poly_product");
  CHECK(e1.bc_p == std::vector<int>{X1_MIN, X1_MAX, X2_MIN, X2_MAX});
  CHECK(e1.bc_u == std::vector<int>{X2_MIN, X2_MAX});

  const auto e2 = preset("exp2");
  CHECK(e2.f.kind == SourceTerm::Kind::Zero);
  CHECK(e2.p0 == "sqrt_profile");
  CHECK(e2.bc_u == std::vector<int>{X2_MAX});
  CHECK(e2.bc_p == std::vector<int>{X2_MAX});

  const auto e3 = preset("exp3");
  CHECK(e3.f.kind == SourceTerm::Kind::RandomNodal);
  CHECK(e3.p0 == "bubble_x2");

  const auto e3d = preset("exp3d");
  CHECK(e3d.dim == 3);
  CHECK(e3d.fine_cells == 12);
  CHECK(e3d.eps_cells == 6);
  CHECK(e3d.tau == 0.05);
  CHECK(e3d.steps() == 20);
  CHECK(e3d.coarse_cells == std::vector<int>{2, 3, 6});
  CHECK(e3d.bc_u == std::vector<int>{X3_MAX});
  CHECK(e3d.bc_p == std::vector<int>{X3_MAX});

  CHECK_THROWS(preset("exp9"));
}

TEST_CASE("validate flags every violation at once") {
  ExperimentConfig c = preset("exp1");
  c.eps_cells = 5;       // does not divide fine_cells
  c.tau = -1.0;
  c.coarse_cells = {5};  // does not divide fine_cells either
  try {
    c.validate();
    FAIL("expected validate to throw");
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    CHECK(msg.find("fine_cells") != std::string::npos);
    CHECK(msg.find("tau") != std::string::npos);
    CHECK(msg.find("coarse") != std::string::npos);
  }
}

TEST_CASE("json round trip preserves the config") {
  ExperimentConfig c = preset("exp3");
  c.fine_cells = 16;
  c.eps_cells = 8;
  c.coarse_cells = {2, 4};
  c.alpha_seed = 77;
  c.ell = 3;
  const std::string text = config_to_json_string(c);
  const ExperimentConfig d = config_from_json_string(text);
  CHECK(d.name == c.name);
  CHECK(d.dim == c.dim);
  CHECK(d.fine_cells == 16);
  CHECK(d.eps_cells == 8);
  CHECK(d.coarse_cells == c.coarse_cells);
  CHECK(d.tau == c.tau);
  CHECK(d.T == c.T);
  CHECK(d.seed == c.seed);
  REQUIRE(d.alpha_seed.has_value());
  CHECK(*d.alpha_seed == 77);
  CHECK(d.ell == 3);
  CHECK(d.bc_u == c.bc_u);
  CHECK(d.bc_p == c.bc_p);
  CHECK(d.p0 == c.p0);
  CHECK(d.f.kind == c.f.kind);
  CHECK(d.bounds.kappa.lo == c.bounds.kappa.lo);
  CHECK(d.M == c.M);
  CHECK(d.nu == c.nu);
}

TEST_CASE("load_config reads a file and rejects bad input") {
  const std::string path = "config_io_test.json";
  {
    std::ofstream out(path);
    out << config_to_json_string(preset("exp2"));
  }
  const auto c = load_config(path);
  CHECK(c.name == "exp2");
  std::remove(path.c_str());
  CHECK_THROWS(load_config("missing_config.json"));
  CHECK_THROWS(config_from_json_string("not json"));
}

TEST_CASE("initial pressure functions") {
  const auto c1 = preset("exp1");
  const auto f1 = initial_pressure_function(c1);
  CHECK(f1(0.5, 0.5, 0.0) == doctest::Approx(0.0625));
  CHECK(f1(0.0, 0.5, 0.0) == doctest::Approx(0.0));
  const auto f2 = initial_pressure_function(preset("exp2"));
  CHECK(f2(0.3, 0.75, 0.0) == doctest::Approx(0.5));
  const auto f3 = initial_pressure_function(preset("exp3"));
  CHECK(f3(0.9, 0.5, 0.0) == doctest::Approx(0.25));
  const auto f3d = initial_pressure_function(preset("exp3d"));
  CHECK(f3d(0.5, 0.5, 0.5) == doctest::Approx(0.015625));
}

TEST_CASE("coarse space equal to fine space reproduces the reference solution") {
  ExperimentConfig c = preset("exp1");
  c.fine_cells = 8;
  c.eps_cells = 4;
  c.coarse_cells = {8};
  c.tau = 0.05;
  c.T = 0.25;
  c.ell = kGlobalCorrectors;
  const auto record = run_convergence(c);
  REQUIRE(record.report.records.size() == 1);
  CHECK(record.report.records[0].diagnostic.empty());
  CHECK(record.report.records[0].rel_error <= 1e-9);
}

TEST_CASE("error decreases over a small two-level sweep") {
  ExperimentConfig c = preset("exp1");
  c.fine_cells = 16;
  c.eps_cells = 8;
  c.coarse_cells = {2, 4};
  c.tau = 0.05;
  c.T = 0.25;
  c.ell = 2;
  const auto record = run_convergence(c);
  REQUIRE(record.report.records.size() == 2);
  const auto& r = record.report.records;
  CHECK(r[0].H > r[1].H);
  CHECK(r[1].rel_error < r[0].rel_error);
  CHECK(r[0].rel_error > 0.0);
  CHECK(record.report.slope > 0.0);
  CHECK(r[0].n_coarse_dofs < r[1].n_coarse_dofs);
}

TEST_CASE("runs are deterministic and outputs match the schema") {
  ExperimentConfig c = preset("exp3");
  c.fine_cells = 8;
  c.eps_cells = 4;
  c.coarse_cells = {2, 4};
  c.tau = 0.1;
  c.T = 0.3;
  c.ell = 1;
  const auto a = run_convergence(c);
  const auto b = run_convergence(c);
  REQUIRE(a.report.records.size() == b.report.records.size());
  for (std::size_t i = 0; i < a.report.records.size(); ++i) {
    CHECK(a.report.records[i].rel_error == b.report.records[i].rel_error);
  }
  const std::string path = "exp_outputs.csv";
  write_run_outputs(a, path);
  std::ifstream in(path);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "H,rel_error,n_coarse_dofs,wall_time_s,slope_so_far");
  std::ifstream sidecar(path + ".json");
  CHECK(sidecar.good());
  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
}

TEST_CASE("basis export and import round trip through a run") {
  ExperimentConfig c = preset("exp2");
  c.fine_cells = 8;
  c.eps_cells = 4;
  c.coarse_cells = {4};
  c.tau = 0.1;
  c.T = 0.3;
  c.ell = 1;
  const auto direct = run_convergence(c, "", "basis_run");
  const auto reloaded = run_convergence(c, "basis_run", "");
  REQUIRE(direct.report.records.size() == 1);
  REQUIRE(reloaded.report.records.size() == 1);
  CHECK(reloaded.report.records[0].rel_error ==
        direct.report.records[0].rel_error);
  std::remove("basis_run_H4_u.csv");
  std::remove("basis_run_H4_p.csv");
}
