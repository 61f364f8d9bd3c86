#pragma once

#include <string>
#include <vector>

#include "porolod/linalg.hpp"
#include "porolod/timestepping.hpp"

namespace porolod {

struct ErrorRecord {
  double H = 0.0;           // coarse mesh size
  int n_coarse_dofs = 0;    // dim(V_ms) + dim(Q_ms)
  double rel_error = 0.0;
  double wall_time_s = 0.0;
  std::string diagnostic;   // nonempty if the level failed
};

struct ErrorReport {
  std::vector<ErrorRecord> records;  // sorted by H descending
  double slope = 0.0;                // fitted log-log slope
};

// Discrete space-time norm sqrt(sum_{i=1..N} tau (|grad u^i|^2 + |grad p^i|^2))
// with plain (unit-coefficient) gradient Gram matrices. Index 0 is excluded.
double dn_norm(const std::vector<Vec>& u_series, const std::vector<Vec>& p_series,
               const SpMat& Gu, const SpMat& Gp, double tau);

// ||ms - fine||_{D,N} / ||fine||_{D,N}; the ms series must already be
// prolonged to fine DOFs.
double relative_error(const TimeSeriesSolution& ms_on_fine,
                      const TimeSeriesSolution& fine, const SpMat& Gu,
                      const SpMat& Gp);

// Least-squares slope of log(error) vs log(H) over the successful records.
double fit_slope(const ErrorReport& report);

void export_report_csv(const ErrorReport& report, const std::string& path);

}  // namespace porolod
