// interferometer.hpp
// The Mach-Zehnder pipeline (50:50 splitter, phase in arm d, 50:50
// splitter) with exact post-selected fringe probabilities and the
// matching analytic fringe models.

#pragma once

#include "mzfringe/fock.hpp"

namespace mzfringe {

/// Mach-Zehnder run: input on spatial modes {a, b} (any temporal tags),
/// phase applied to every temporal copy of arm d.
struct MZSpec {
  FockStateVector input;
  double phase{0.0};
};

/// P(phi) = eta_i * (1 - V cos(N (phi - phase_origin))) / 2.
struct FringeModel {
  int n_fold{1};
  double eta_i{1.0};
  double visibility{1.0};
  double phase_origin{0.0};

  double probability(double phi) const;
  /// dP/dphi, analytic.
  double derivative(double phi) const;
};

/// Supported interferometer inputs. "delayed" variants put the b-side
/// photons in the second temporal bin.
enum class FringeInput {
  single_photon,        // |10>_ab
  photon_pair,          // |11>_ab
  double_pair,          // |22>_ab
  delayed_pair,         // |1>_{a,t} |1>_{b,t'}
  delayed_double_pair,  // |1111>_{a^t a^t' b^t b^t'}
};

/// Post-selected detection patterns (counts per spatial output label,
/// temporal tags summed over).
enum class FringePattern {
  one_in_e,
  one_in_e_one_in_f,
  three_in_e_one_in_f,
  two_in_e,
};

/// Output state on spatial modes {e, f} with temporal tags preserved.
/// Ports are labeled so that P(1 in e | |10>_ab, phi = 0) = 0.
FockStateVector evolve_mz(const MZSpec& spec);

/// Input ket for a supported fringe case.
FockStateVector fringe_input_state(FringeInput input);

/// Exact post-selected probability, computed by full evolution (not the
/// closed form). Only the five supported (input, pattern) cases.
double fringe_probability(FringeInput input, FringePattern pattern, double phi);

/// The closed-form model of a supported case: (N, eta_i, V = 1,
/// phase_origin = 0).
FringeModel analytic_fringe_model(FringeInput input, FringePattern pattern);

/// eta_i obtained numerically as the maximum of fringe_probability over
/// a 1024-point phase grid.
double intrinsic_efficiency(FringeInput input, FringePattern pattern);

/// Spatial count pattern of a FringePattern, e.g. {(e,3),(f,1)}.
std::vector<std::pair<Spatial, int>> pattern_counts(FringePattern pattern);

}  // namespace mzfringe
