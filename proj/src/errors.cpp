#include "porolod/errors.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace porolod {

double dn_norm(const std::vector<Vec>& u_series,
               const std::vector<Vec>& p_series, const SpMat& Gu,
               const SpMat& Gp, double tau) {
  if (u_series.size() != p_series.size()) {
    throw std::invalid_argument("dn_norm: series length mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 1; i < u_series.size(); ++i) {
    acc += tau * (u_series[i].dot(Gu * u_series[i]) +
                  p_series[i].dot(Gp * p_series[i]));
  }
  return std::sqrt(acc);
}

double relative_error(const TimeSeriesSolution& ms_on_fine,
                      const TimeSeriesSolution& fine, const SpMat& Gu,
                      const SpMat& Gp) {
  if (ms_on_fine.u.size() != fine.u.size()) {
    throw std::invalid_argument("relative_error: series length mismatch");
  }
  const double tau = fine.grid.tau;
  std::vector<Vec> du(fine.u.size()), dp(fine.p.size());
  for (std::size_t i = 0; i < fine.u.size(); ++i) {
    du[i] = ms_on_fine.u[i] - fine.u[i];
    dp[i] = ms_on_fine.p[i] - fine.p[i];
  }
  const double denom = dn_norm(fine.u, fine.p, Gu, Gp, tau);
  if (denom == 0.0) {
    throw std::runtime_error("relative_error: degenerate fine solution (zero norm)");
  }
  return dn_norm(du, dp, Gu, Gp, tau) / denom;
}

double fit_slope(const ErrorReport& report) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const auto& rec : report.records) {
    if (!rec.diagnostic.empty() || rec.rel_error <= 0.0) continue;
    const double x = std::log(rec.H);
    const double y = std::log(rec.rel_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("fit_slope: need at least 2 records");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void export_report_csv(const ErrorReport& report, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open report csv for write: " + path);
  f.precision(12);
  f << "H,rel_error,n_coarse_dofs,wall_time_s,slope_so_far\n";
  ErrorReport partial;
  for (const auto& rec : report.records) {
    partial.records.push_back(rec);
    double slope = 0.0;
    try {
      slope = fit_slope(partial);
    } catch (const std::invalid_argument&) {
      slope = 0.0;
    }
    f << rec.H << "," << rec.rel_error << "," << rec.n_coarse_dofs << ","
      << rec.wall_time_s << "," << slope << "\n";
  }
}

}  // namespace porolod
