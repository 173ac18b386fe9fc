#include "mzfringe/metrology.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mzfringe {

PrecisionLimits limits(int n) {
  if (n < 1) throw DomainError("photon number must be >= 1");
  return {1.0 / std::sqrt(static_cast<double>(n)), 1.0 / n};
}

double fringe_precision(double v, int n) {
  if (n < 1) throw DomainError("photon number must be >= 1");
  if (!(v > 0.0 && v <= 1.0)) throw DomainError("visibility must lie in (0, 1]");
  return 1.0 / (v * n);
}

double visibility_threshold(int n, double eta_i) {
  if (n < 1) throw DomainError("photon number must be >= 1");
  if (!(eta_i > 0.0 && eta_i <= 1.0)) throw DomainError("eta_i must lie in (0, 1]");
  return 1.0 / std::sqrt(eta_i * n);
}

SensitivityReport assess(double v, int n, double eta_i) {
  SensitivityReport r;
  r.n = n;
  r.eta_i = eta_i;
  r.visibility = v;
  r.v_threshold = visibility_threshold(n, eta_i);
  r.precision = fringe_precision(v, n);
  const PrecisionLimits lim = limits(n);
  r.sql_limit = lim.sql;
  r.heisenberg_limit = lim.heisenberg;
  r.margin = v - r.v_threshold;
  r.beats_sql = v > r.v_threshold;
  return r;
}

PhasePrecision fisher_precision_oracle(const FringeModel& model, long trials) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (model.visibility == 0.0) {
    throw NoSensitivityError("fringe model with V = 0 carries no phase information");
  }
  constexpr int kGridPoints = 4096;
  constexpr double kDerivativeFloor = 1e-9;
  double best_dphi = std::numeric_limits<double>::infinity();
  double best_phi = 0.0;
  for (int i = 0; i < kGridPoints; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / kGridPoints;
    const double dp = model.derivative(phi);
    if (std::abs(dp) < kDerivativeFloor) continue;
    const double p = model.probability(phi);
    const double dphi = std::sqrt(p * (1.0 - p) / trials) / std::abs(dp);
    if (dphi < best_dphi) {
      best_dphi = dphi;
      best_phi = phi;
    }
  }
  if (!std::isfinite(best_dphi)) {
    throw NoSensitivityError("no grid point with usable phase response");
  }
  return {best_phi, best_dphi};
}

}  // namespace mzfringe
