// metrology.hpp
// Phase-sensitivity criteria: standard-quantum-limit and Heisenberg
// precision limits, N-photon fringe precision 1/(VN), the visibility
// threshold 1/sqrt(eta_i N), and a numeric Fisher-style oracle.

#pragma once

#include "mzfringe/interferometer.hpp"

namespace mzfringe {

struct SensitivityReport {
  int n{1};
  double eta_i{1.0};
  double visibility{1.0};
  double v_threshold{1.0};
  double precision{1.0};        // 1/(V N), radians per sqrt(trial)
  double sql_limit{1.0};        // 1/sqrt(N)
  double heisenberg_limit{1.0}; // 1/N
  bool beats_sql{false};        // visibility > v_threshold, strictly
  double margin{0.0};           // visibility - v_threshold
};

struct PrecisionLimits {
  double sql;
  double heisenberg;
};

/// (1/sqrt(n), 1/n); n >= 1.
PrecisionLimits limits(int n);

/// 1/(v n); 0 < v <= 1, n >= 1.
double fringe_precision(double v, int n);

/// 1/sqrt(eta_i n). May exceed 1: such a scheme cannot beat the SQL at
/// any visibility.
double visibility_threshold(int n, double eta_i);

/// Full report; beats_sql compares strictly (v == threshold does not beat).
SensitivityReport assess(double v, int n, double eta_i);

struct PhasePrecision {
  double phi_star;  // phase setting of the minimum
  double dphi;      // minimal phase uncertainty
};

/// Single-fringe error propagation: each trial a Bernoulli draw with
/// p(phi) from the model; dphi(phi) = sqrt(p(1-p)/trials)/|dp/dphi|
/// minimized over a 4096-point grid, skipping stationary points
/// (|dp/dphi| < 1e-9).
PhasePrecision fisher_precision_oracle(const FringeModel& model, long trials);

}  // namespace mzfringe
