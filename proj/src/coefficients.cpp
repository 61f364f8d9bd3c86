#include "porolod/coefficients.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "porolod/rng.hpp"

namespace porolod {

namespace {

std::vector<double> draw(const Mesh& mesh, const ParamBounds& b,
                         std::uint64_t stream_seed) {
  if (!(b.lo < b.hi)) {
    throw std::invalid_argument("sampling bounds must satisfy lo < hi");
  }
  SplitMix64 gen(stream_seed);
  std::vector<double> values(mesh.n_elements());
  for (auto& v : values) v = gen.uniform(b.lo, b.hi);
  return values;
}

}  // namespace

CoefficientField sample_field(const Mesh& eps_mesh,
                              const CoefficientBounds& bounds, double M,
                              double nu, std::uint64_t seed,
                              std::optional<std::uint64_t> alpha_seed) {
  if (M <= 0.0 || nu <= 0.0) {
    throw std::invalid_argument("M and nu must be positive");
  }
  CoefficientField field;
  field.eps_mesh = eps_mesh;
  field.biot_modulus = M;
  field.viscosity = nu;
  field.seed = seed;
  field.kappa = draw(eps_mesh, bounds.kappa, substream_seed(seed, 0));
  field.mu = draw(eps_mesh, bounds.mu, substream_seed(seed, 1));
  field.lambda = draw(eps_mesh, bounds.lambda, substream_seed(seed, 2));
  field.alpha = draw(eps_mesh, bounds.alpha,
                     substream_seed(alpha_seed.value_or(seed), 3));
  return field;
}

FineParams restrict_to_fine(const CoefficientField& field,
                            const Mesh& fine_mesh) {
  const Mesh& eps = field.eps_mesh;
  if (fine_mesh.cells_per_side % eps.cells_per_side != 0 ||
      fine_mesh.dim != eps.dim) {
    throw std::invalid_argument("fine mesh is not nested in the eps mesh");
  }
  FineParams out;
  out.biot_modulus = field.biot_modulus;
  out.viscosity = field.viscosity;
  const int n = fine_mesh.n_elements();
  out.kappa.resize(n);
  out.mu.resize(n);
  out.lambda.resize(n);
  out.alpha.resize(n);
  for (int fe = 0; fe < n; ++fe) {
    const int ce = coarse_element_of(fine_mesh, fe, eps);
    out.kappa[fe] = field.kappa[ce];
    out.mu[fe] = field.mu[ce];
    out.lambda[fe] = field.lambda[ce];
    out.alpha[fe] = field.alpha[ce];
  }
  return out;
}

void export_field_csv(const CoefficientField& field, const std::string& path) {
  std::ofstream f(path);
  f.precision(17);
  f << "element,kappa,mu,lambda,alpha\n";
  for (int e = 0; e < field.eps_mesh.n_elements(); ++e) {
    f << e << "," << field.kappa[e] << "," << field.mu[e] << ","
      << field.lambda[e] << "," << field.alpha[e] << "\n";
  }
}

CoefficientField import_field_csv(const Mesh& eps_mesh, const std::string& path,
                                  double M, double nu) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open field csv: " + path);
  CoefficientField field;
  field.eps_mesh = eps_mesh;
  field.biot_modulus = M;
  field.viscosity = nu;
  const int n = eps_mesh.n_elements();
  field.kappa.resize(n);
  field.mu.resize(n);
  field.lambda.resize(n);
  field.alpha.resize(n);
  std::string line;
  std::getline(f, line);  // header
  int count = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    int e;
    std::getline(ss, tok, ',');
    e = std::stoi(tok);
    if (e < 0 || e >= n) throw std::runtime_error("field csv: bad element index");
    std::getline(ss, tok, ',');
    field.kappa[e] = std::stod(tok);
    std::getline(ss, tok, ',');
    field.mu[e] = std::stod(tok);
    std::getline(ss, tok, ',');
    field.lambda[e] = std::stod(tok);
    std::getline(ss, tok, ',');
    field.alpha[e] = std::stod(tok);
    ++count;
  }
  if (count != n) throw std::runtime_error("field csv: wrong row count");
  return field;
}

}  // namespace porolod
