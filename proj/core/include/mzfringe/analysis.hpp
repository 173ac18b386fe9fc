// analysis.hpp
// Statistical estimation on count data: fixed-frequency sinusoid fits
// yielding fringe visibility with propagated uncertainty, and the
// dip-ratio test discriminating one- from two-temporal-bin four-photon
// input.

#pragma once

#include <vector>

#include "mzfringe/simulator.hpp"

namespace mzfringe {

/// Fringe scan ready for fitting; settings must already be phase radians.
struct FringeDataset {
  std::vector<CountRecord> records;
  int n_fold{1};
};

/// Weighted linear least squares of
///   counts(phi) = c0 + c1 cos(N phi) + c2 sin(N phi)
/// with Poisson weights 1/max(counts, 1).
struct FitResult {
  double offset{0.0};      // c0
  double c_cos{0.0};       // c1
  double c_sin{0.0};       // c2
  double visibility{0.0};  // sqrt(c1^2 + c2^2) / c0
  double phase_origin{0.0};
  double sigma_visibility{0.0};
  double chi_squared{0.0};
  int dof{0};
};

FitResult fit_fixed_frequency_sinusoid(const FringeDataset& data);

/// Same estimator on real-valued count expectations (noiseless model
/// curves, enumeration output); the integer path above delegates here.
FitResult fit_fixed_frequency_sinusoid(const std::vector<double>& phases,
                                       const std::vector<double>& counts, int n_fold);

enum class HomVerdict { pure_22, pure_1111, mixture, inconclusive };

/// ratio = counts nearest zero delay / mean of baseline counts, with
/// Poisson error; verdict bands at 3 sigma around 2/3 and 4/3.
struct HomResult {
  double ratio{0.0};
  double sigma_ratio{0.0};
  HomVerdict verdict{HomVerdict::inconclusive};
};

/// Baseline = records with |delay| > 3 * coherence_time_ps, numerator =
/// record nearest zero delay (excluded from the baseline mean).
HomResult hom_dip_ratio(const std::vector<CountRecord>& records, double coherence_time_ps);

/// Poisson counting error, sqrt(counts).
double count_error(std::uint64_t counts);

const char* to_string(HomVerdict v);

}  // namespace mzfringe
