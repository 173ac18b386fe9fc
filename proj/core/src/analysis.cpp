#include "mzfringe/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mzfringe {

FitResult fit_fixed_frequency_sinusoid(const FringeDataset& data) {
  std::vector<double> phases, counts;
  phases.reserve(data.records.size());
  counts.reserve(data.records.size());
  for (const CountRecord& r : data.records) {
    phases.push_back(r.setting);
    counts.push_back(static_cast<double>(r.counts));
  }
  return fit_fixed_frequency_sinusoid(phases, counts, data.n_fold);
}

FitResult fit_fixed_frequency_sinusoid(const std::vector<double>& phases,
                                       const std::vector<double>& counts, int n_fold) {
  if (n_fold < 1) throw DomainError("n_fold must be >= 1");
  if (phases.size() != counts.size()) throw DomainError("phase/count length mismatch");
  if (phases.size() < 5) throw DomainError("fit needs at least 5 records");
  double lo = phases.front(), hi = phases.front();
  bool any_signal = false;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    lo = std::min(lo, phases[i]);
    hi = std::max(hi, phases[i]);
    if (counts[i] < 0.0) throw DomainError("counts must be non-negative");
    if (counts[i] > 0.0) any_signal = true;
  }
  const double period = 2.0 * std::numbers::pi / n_fold;
  if (hi - lo < 0.75 * period) {
    throw DomainError("fit needs settings spanning a full fringe period");
  }
  if (!any_signal) throw NoSignalError("all counts are zero");

  Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double w = 1.0 / std::max(counts[i], 1.0);
    const Eigen::Vector3d x{1.0, std::cos(n_fold * phases[i]), std::sin(n_fold * phases[i])};
    s += w * x * x.transpose();
    b += w * counts[i] * x;
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(s);
  if (!lu.isInvertible()) {
    throw IllConditionedFitError("degenerate phase settings: singular design matrix");
  }
  const Eigen::Vector3d theta = lu.solve(b);
  const Eigen::Matrix3d cov = lu.inverse();

  FitResult fit;
  fit.offset = theta(0);
  fit.c_cos = theta(1);
  fit.c_sin = theta(2);
  if (fit.offset <= 0.0) {
    throw IllConditionedFitError("fitted offset is not positive");
  }
  const double amplitude = std::hypot(fit.c_cos, fit.c_sin);
  fit.visibility = amplitude / fit.offset;
  fit.phase_origin = std::atan2(fit.c_sin, fit.c_cos) / n_fold;

  // first-order propagation of V = sqrt(c1^2 + c2^2)/c0
  if (amplitude > 0.0) {
    Eigen::Vector3d g;
    g << -amplitude / (fit.offset * fit.offset), fit.c_cos / (amplitude * fit.offset),
        fit.c_sin / (amplitude * fit.offset);
    fit.sigma_visibility = std::sqrt((g.transpose() * cov * g)(0));
  } else {
    // amplitude gradient direction is undefined at A = 0; quadrature sum
    // of the two amplitude variances
    fit.sigma_visibility = std::sqrt(cov(1, 1) + cov(2, 2)) / fit.offset;
  }

  double chi2 = 0.0;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double w = 1.0 / std::max(counts[i], 1.0);
    const double model = fit.offset + fit.c_cos * std::cos(n_fold * phases[i]) +
                         fit.c_sin * std::sin(n_fold * phases[i]);
    const double resid = counts[i] - model;
    chi2 += w * resid * resid;
  }
  fit.chi_squared = chi2;
  fit.dof = static_cast<int>(phases.size()) - 3;
  return fit;
}

HomResult hom_dip_ratio(const std::vector<CountRecord>& records, double coherence_time_ps) {
  if (records.empty()) throw InsufficientBaselineError("no delay records");
  if (coherence_time_ps <= 0.0) throw DomainError("coherence time must be positive");

  // numerator: record nearest zero delay
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (std::abs(records[i].setting) < std::abs(records[nearest].setting)) nearest = i;
  }
  const double baseline_cut = 3.0 * coherence_time_ps;
  double baseline_sum = 0.0;
  std::size_t baseline_points = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i == nearest) continue;
    if (std::abs(records[i].setting) > baseline_cut) {
      baseline_sum += static_cast<double>(records[i].counts);
      ++baseline_points;
    }
  }
  if (baseline_points == 0) {
    throw InsufficientBaselineError("no records beyond 3 coherence times");
  }
  const double n0 = static_cast<double>(records[nearest].counts);
  const double baseline_mean = baseline_sum / baseline_points;
  if (baseline_mean <= 0.0) {
    throw InsufficientBaselineError("baseline has zero counts");
  }

  HomResult result;
  result.ratio = n0 / baseline_mean;
  // Poisson: var(n0) = max(n0, 1), var(baseline mean) = mean^2 / sum
  const double var_n0 = std::max(n0, 1.0);
  result.sigma_ratio = std::sqrt(var_n0 + n0 * n0 / baseline_sum) / baseline_mean;

  const double lo_band = 2.0 / 3.0;
  const double hi_band = 4.0 / 3.0;
  const double tol = 3.0 * result.sigma_ratio;
  const bool in_lo = std::abs(result.ratio - lo_band) <= tol;
  const bool in_hi = std::abs(result.ratio - hi_band) <= tol;
  if (in_lo && in_hi) {
    result.verdict = HomVerdict::inconclusive;
  } else if (in_lo) {
    result.verdict = HomVerdict::pure_22;
  } else if (in_hi) {
    result.verdict = HomVerdict::pure_1111;
  } else if (result.ratio > lo_band && result.ratio < hi_band) {
    result.verdict = HomVerdict::mixture;
  } else {
    result.verdict = HomVerdict::inconclusive;
  }
  return result;
}

double count_error(std::uint64_t counts) {
  return std::sqrt(static_cast<double>(counts));
}

const char* to_string(HomVerdict v) {
  switch (v) {
    case HomVerdict::pure_22: return "pure_22";
    case HomVerdict::pure_1111: return "pure_1111";
    case HomVerdict::mixture: return "mixture";
    case HomVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

}  // namespace mzfringe
