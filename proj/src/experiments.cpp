#include "porolod/experiments.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "porolod/rng.hpp"

namespace porolod {

using nlohmann::json;

int ExperimentConfig::steps() const {
  return static_cast<int>(std::llround(T / tau));
}

void ExperimentConfig::validate() const {
  std::vector<std::string> errors;
  if (dim != 2 && dim != 3) errors.push_back("dim must be 2 or 3");
  if (fine_cells < 1) errors.push_back("fine_cells must be positive");
  if (eps_cells < 1) errors.push_back("eps_cells must be positive");
  if (eps_cells >= 1 && fine_cells >= 1 && fine_cells % eps_cells != 0) {
    errors.push_back("eps_cells must divide fine_cells");
  }
  if (coarse_cells.empty()) errors.push_back("coarse_cells must be nonempty");
  for (int c : coarse_cells) {
    if (c < 1 || (fine_cells >= 1 && fine_cells % c != 0)) {
      errors.push_back("coarse_cells entry " + std::to_string(c) +
                       " must divide fine_cells");
    }
  }
  if (tau <= 0.0) errors.push_back("tau must be positive");
  if (T <= 0.0) errors.push_back("T must be positive");
  if (tau > 0.0 && T > 0.0 &&
      std::abs(T / tau - std::llround(T / tau)) > 1e-9) {
    errors.push_back("T must be an integer multiple of tau");
  }
  if (ell < 0 && ell != kGlobalCorrectors) {
    errors.push_back("ell must be nonnegative (or -1 for global correctors)");
  }
  for (int tag : bc_u) {
    if (tag < 0 || tag >= 2 * dim) errors.push_back("bc_u tag out of range");
  }
  for (int tag : bc_p) {
    if (tag < 0 || tag >= 2 * dim) errors.push_back("bc_p tag out of range");
  }
  if (p0 != "zero" && p0 != "poly_product" && p0 != "sqrt_profile" &&
      p0 != "bubble_x2") {
    errors.push_back("unknown p0 descriptor: " + p0);
  }
  for (const auto* b : {&bounds.kappa, &bounds.mu, &bounds.lambda, &bounds.alpha}) {
    if (!(b->lo < b->hi)) errors.push_back("coefficient bounds must have lo < hi");
  }
  if (M <= 0.0) errors.push_back("M must be positive");
  if (nu <= 0.0) errors.push_back("nu must be positive");
  if (!errors.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw std::invalid_argument(msg);
  }
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "exp1" || name == "exp2" || name == "exp3") {
    c.dim = 2;
    c.fine_cells = 128;  // desk scale, one level below the reference runs
    c.eps_cells = 32;
    c.coarse_cells = {2, 4, 8, 16, 32};
    c.tau = 0.01;
    c.T = 1.0;
    c.ell = 2;
    if (name == "exp1") {
      c.bc_u = {X2_MIN, X2_MAX};
      c.bc_p = {X1_MIN, X1_MAX, X2_MIN, X2_MAX};
      c.p0 = "poly_product";
      c.f = {SourceTerm::Kind::Constant, 1.0, 0};
    } else {
      c.bc_u = {X2_MAX};
      c.bc_p = {X2_MAX};
      if (name == "exp2") {
        c.p0 = "sqrt_profile";
        c.f = {SourceTerm::Kind::Zero, 0.0, 0};
      } else {
        c.p0 = "bubble_x2";
        c.f = {SourceTerm::Kind::RandomNodal, 0.0, 0};  // seed derived from c.seed
      }
    }
  } else if (name == "exp3d") {
    c.dim = 3;
    c.fine_cells = 12;
    c.eps_cells = 6;
    c.coarse_cells = {2, 3, 6};
    c.tau = 0.05;
    c.T = 1.0;
    c.ell = 2;
    c.bc_u = {X3_MAX};
    c.bc_p = {X3_MAX};
    c.p0 = "poly_product";
    c.f = {SourceTerm::Kind::Zero, 0.0, 0};
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return c;
}

ScalarFunction initial_pressure_function(const ExperimentConfig& config) {
  const int dim = config.dim;
  if (config.p0 == "zero") {
    return [](double, double, double) { return 0.0; };
  }
  if (config.p0 == "poly_product") {
    return [dim](double x, double y, double z) {
      double v = (1.0 - x) * x * (1.0 - y) * y;
      if (dim == 3) v *= (1.0 - z) * z;
      return v;
    };
  }
  if (config.p0 == "sqrt_profile") {
    return [](double, double y, double) { return std::sqrt(1.0 - y); };
  }
  if (config.p0 == "bubble_x2") {
    return [](double, double y, double) { return (1.0 - y) * y; };
  }
  throw std::invalid_argument("unknown p0 descriptor: " + config.p0);
}

namespace {

json bounds_to_json(const CoefficientBounds& b) {
  return json{{"kappa", {b.kappa.lo, b.kappa.hi}},
              {"mu", {b.mu.lo, b.mu.hi}},
              {"lambda", {b.lambda.lo, b.lambda.hi}},
              {"alpha", {b.alpha.lo, b.alpha.hi}}};
}

CoefficientBounds bounds_from_json(const json& j) {
  CoefficientBounds b;
  const auto get = [&](const char* key, ParamBounds& out) {
    if (j.contains(key)) {
      out.lo = j.at(key).at(0).get<double>();
      out.hi = j.at(key).at(1).get<double>();
    }
  };
  get("kappa", b.kappa);
  get("mu", b.mu);
  get("lambda", b.lambda);
  get("alpha", b.alpha);
  return b;
}

json source_to_json(const SourceTerm& f) {
  switch (f.kind) {
    case SourceTerm::Kind::Zero:
      return json{{"kind", "zero"}};
    case SourceTerm::Kind::Constant:
      return json{{"kind", "constant"}, {"value", f.value}};
    case SourceTerm::Kind::RandomNodal:
      return json{{"kind", "random_nodal"}, {"seed", f.seed}};
  }
  return {};
}

SourceTerm source_from_json(const json& j) {
  SourceTerm f;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") {
    f.kind = SourceTerm::Kind::Zero;
  } else if (kind == "constant") {
    f.kind = SourceTerm::Kind::Constant;
    f.value = j.at("value").get<double>();
  } else if (kind == "random_nodal") {
    f.kind = SourceTerm::Kind::RandomNodal;
    f.seed = j.value("seed", std::uint64_t{0});
  } else {
    throw std::invalid_argument("unknown source kind: " + kind);
  }
  return f;
}

std::vector<std::string> tags_to_names(const std::vector<int>& tags) {
  std::vector<std::string> out;
  for (int t : tags) out.push_back(face_tag_name(t));
  return out;
}

std::vector<int> names_to_tags(const json& j) {
  std::vector<int> out;
  for (const auto& name : j) out.push_back(face_tag_from_name(name.get<std::string>()));
  return out;
}

json config_to_json(const ExperimentConfig& c) {
  json j{{"name", c.name},
         {"dim", c.dim},
         {"fine_cells", c.fine_cells},
         {"eps_cells", c.eps_cells},
         {"coarse_cells", c.coarse_cells},
         {"tau", c.tau},
         {"T", c.T},
         {"seed", c.seed},
         {"ell", c.ell},
         {"bc_u", tags_to_names(c.bc_u)},
         {"bc_p", tags_to_names(c.bc_p)},
         {"p0", c.p0},
         {"f", source_to_json(c.f)},
         {"bounds", bounds_to_json(c.bounds)},
         {"M", c.M},
         {"nu", c.nu}};
  if (c.alpha_seed) j["alpha_seed"] = *c.alpha_seed;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  c.name = j.value("name", std::string("custom"));
  c.dim = j.at("dim").get<int>();
  c.fine_cells = j.at("fine_cells").get<int>();
  c.eps_cells = j.at("eps_cells").get<int>();
  c.coarse_cells = j.at("coarse_cells").get<std::vector<int>>();
  c.tau = j.at("tau").get<double>();
  c.T = j.at("T").get<double>();
  c.seed = j.value("seed", std::uint64_t{1234});
  if (j.contains("alpha_seed")) c.alpha_seed = j.at("alpha_seed").get<std::uint64_t>();
  c.ell = j.value("ell", 2);
  if (j.contains("bc_u")) c.bc_u = names_to_tags(j.at("bc_u"));
  if (j.contains("bc_p")) c.bc_p = names_to_tags(j.at("bc_p"));
  c.p0 = j.value("p0", std::string("zero"));
  if (j.contains("f")) c.f = source_from_json(j.at("f"));
  if (j.contains("bounds")) c.bounds = bounds_from_json(j.at("bounds"));
  c.M = j.value("M", 1.0);
  c.nu = j.value("nu", 1.0);
  return c;
}

SourceTerm effective_source(const ExperimentConfig& config) {
  SourceTerm f = config.f;
  if (f.kind == SourceTerm::Kind::RandomNodal && f.seed == 0) {
    f.seed = substream_seed(config.seed, 4);
  }
  return f;
}

}  // namespace

std::string config_to_json_string(const ExperimentConfig& config) {
  return config_to_json(config).dump(2);
}

ExperimentConfig config_from_json_string(const std::string& text) {
  return config_from_json(json::parse(text));
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  json j;
  f >> j;
  return config_from_json(j);
}

std::unique_ptr<FineSetup> build_fine_setup(const ExperimentConfig& config) {
  config.validate();
  auto setup = std::make_unique<FineSetup>();
  setup->config = config;
  setup->fine_mesh = build_structured_mesh(config.dim, config.fine_cells);
  setup->eps_mesh = build_structured_mesh(config.dim, config.eps_cells);
  setup->field = sample_field(setup->eps_mesh, config.bounds, config.M,
                              config.nu, config.seed, config.alpha_seed);
  setup->params = restrict_to_fine(setup->field, setup->fine_mesh);
  setup->u_space = build_space(setup->fine_mesh, FieldKind::Vector, config.bc_u);
  setup->p_space = build_space(setup->fine_mesh, FieldKind::Scalar, config.bc_p);
  setup->forms = assemble_forms(setup->u_space, setup->p_space, setup->params);
  setup->p0 = interpolate_nodal(setup->p_space, initial_pressure_function(config));
  setup->u0 = consistent_initial_displacement(setup->forms.A, setup->forms.D,
                                              setup->p0);
  setup->load = assemble_load(setup->p_space, effective_source(config));
  setup->grid = TimeGrid{config.tau, config.steps()};
  return setup;
}

TimeSeriesSolution solve_fine(const FineSetup& setup) {
  const Vec& load = setup.load;
  return run_time_stepping(setup.forms.A, setup.forms.B, setup.forms.C,
                           setup.forms.D, setup.u0, setup.p0,
                           [&load](int) { return load; }, setup.grid, "fine");
}

std::unique_ptr<MsLevel> build_ms_level(const FineSetup& setup,
                                        int coarse_cells, int ell,
                                        const std::string& import_basis_prefix,
                                        const std::string& export_basis_prefix) {
  auto level = std::make_unique<MsLevel>();
  level->coarse_mesh = build_structured_mesh(setup.config.dim, coarse_cells);
  level->u_space =
      build_space(level->coarse_mesh, FieldKind::Vector, setup.config.bc_u);
  level->p_space =
      build_space(level->coarse_mesh, FieldKind::Scalar, setup.config.bc_p);
  level->interp_u = quasi_interpolation(setup.u_space, level->u_space);
  level->interp_p = quasi_interpolation(setup.p_space, level->p_space);
  const auto basis_path = [&](const std::string& prefix, char which) {
    return prefix + "_H" + std::to_string(coarse_cells) + "_" + which + ".csv";
  };
  if (!import_basis_prefix.empty()) {
    level->basis_u = import_ms_basis(basis_path(import_basis_prefix, 'u'));
    level->basis_p = import_ms_basis(basis_path(import_basis_prefix, 'p'));
    if (level->basis_u.basis.rows() != setup.u_space.n_free ||
        level->basis_u.basis.cols() != level->u_space.n_free ||
        level->basis_p.basis.rows() != setup.p_space.n_free ||
        level->basis_p.basis.cols() != level->p_space.n_free) {
      throw std::runtime_error("imported basis dimensions do not match the run");
    }
  } else {
    level->basis_u = build_ms_basis(setup.forms.A, level->interp_u, 'a', ell);
    level->basis_p = build_ms_basis(setup.forms.B, level->interp_p, 'b', ell);
  }
  if (!export_basis_prefix.empty()) {
    const std::map<std::string, std::string> meta{
        {"seed", std::to_string(setup.config.seed)},
        {"fine_cells", std::to_string(setup.config.fine_cells)},
        {"coarse_cells", std::to_string(coarse_cells)},
        {"ell", std::to_string(ell)}};
    export_ms_basis(level->basis_u, basis_path(export_basis_prefix, 'u'), meta);
    export_ms_basis(level->basis_p, basis_path(export_basis_prefix, 'p'), meta);
  }
  level->system = assemble_coarse_system(setup.forms, level->basis_u,
                                         level->basis_p);
  // p_ms^0 is the b-orthogonal projection of p_h^0 onto Q_ms; u_ms^0 solves
  // the coarse consistency equation.
  Factorization bms(level->system.B, FactorKind::SPD);
  level->p0 = bms.solve(level->basis_p.basis.transpose() * (setup.forms.B * setup.p0));
  Factorization ams(level->system.A, FactorKind::SPD);
  level->u0 = ams.solve(level->system.D.transpose() * level->p0);
  level->load = level->basis_p.basis.transpose() * setup.load;
  return level;
}

TimeSeriesSolution solve_ms(const FineSetup& setup, const MsLevel& level) {
  const Vec& load = level.load;
  return run_time_stepping(level.system.A, level.system.B, level.system.C,
                           level.system.D, level.u0, level.p0,
                           [&load](int) { return load; }, setup.grid, "ms");
}

TimeSeriesSolution prolong_series(const MsLevel& level,
                                  const TimeSeriesSolution& ms) {
  TimeSeriesSolution out;
  out.grid = ms.grid;
  out.space_tag = "ms_on_fine";
  out.u.reserve(ms.u.size());
  out.p.reserve(ms.p.size());
  for (const auto& v : ms.u) out.u.push_back(prolong(level.basis_u, v));
  for (const auto& q : ms.p) out.p.push_back(prolong(level.basis_p, q));
  return out;
}

RunRecord run_convergence(const ExperimentConfig& config,
                          const std::string& import_basis_prefix,
                          const std::string& export_basis_prefix) {
  using clock = std::chrono::steady_clock;
  const auto seconds_since = [](clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };
  RunRecord record;
  record.config = config;
  const auto setup = build_fine_setup(config);
  const TimeSeriesSolution fine_sol = solve_fine(*setup);
  for (int coarse_cells : config.coarse_cells) {
    ErrorRecord rec;
    LevelTiming timing;
    timing.coarse_cells = coarse_cells;
    try {
      const auto t0 = clock::now();
      const auto level =
          build_ms_level(*setup, coarse_cells, config.ell,
                         import_basis_prefix, export_basis_prefix);
      timing.corrector_s = seconds_since(t0);
      const auto t1 = clock::now();
      const TimeSeriesSolution ms_sol = solve_ms(*setup, *level);
      const TimeSeriesSolution ms_fine = prolong_series(*level, ms_sol);
      timing.online_s = seconds_since(t1);
      rec.H = level->coarse_mesh.mesh_size;
      rec.n_coarse_dofs = level->u_space.n_free + level->p_space.n_free;
      rec.rel_error =
          relative_error(ms_fine, fine_sol, setup->forms.Gu, setup->forms.Gp);
      rec.wall_time_s = seconds_since(t0);
    } catch (const std::exception& e) {
      rec.H = std::sqrt(static_cast<double>(config.dim)) / coarse_cells;
      rec.diagnostic = e.what();
    }
    record.report.records.push_back(rec);
    record.timings.push_back(timing);
  }
  try {
    record.report.slope = fit_slope(record.report);
  } catch (const std::invalid_argument&) {
    record.report.slope = 0.0;
  }
  return record;
}

void write_run_outputs(const RunRecord& record, const std::string& csv_path) {
  export_report_csv(record.report, csv_path);
  json j;
  j["version"] = record.version;
  j["config"] = json::parse(config_to_json_string(record.config));
  j["slope"] = record.report.slope;
  json levels = json::array();
  for (std::size_t i = 0; i < record.report.records.size(); ++i) {
    const auto& rec = record.report.records[i];
    json l{{"H", rec.H},
           {"n_coarse_dofs", rec.n_coarse_dofs},
           {"rel_error", rec.rel_error},
           {"wall_time_s", rec.wall_time_s}};
    if (!rec.diagnostic.empty()) l["diagnostic"] = rec.diagnostic;
    if (i < record.timings.size()) {
      l["coarse_cells"] = record.timings[i].coarse_cells;
      l["corrector_s"] = record.timings[i].corrector_s;
      l["online_s"] = record.timings[i].online_s;
    }
    levels.push_back(l);
  }
  j["levels"] = levels;
  std::ofstream f(csv_path + ".json");
  f << j.dump(2) << "\n";
}

}  // namespace porolod
