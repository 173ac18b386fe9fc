// fock.hpp
// Exact bosonic Fock-state algebra over labeled optical modes: sparse
// state vectors, beamsplitter / phase-shifter application, tensor
// products and detection-pattern probabilities.

#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mzfringe/errors.hpp"

namespace mzfringe {

using Complex = std::complex<double>;

/// Amplitudes below this magnitude are dropped after each element
/// application; below the double-precision noise floor of the ops here.
inline constexpr double kPruneThreshold = 1e-15;

/// Spatial mode labels of the interferometer layout: inputs a/b,
/// internal arms c/d, outputs e/f.
enum class Spatial : std::uint8_t { a, b, c, d, e, f };

char to_char(Spatial s);

/// One optical mode: a spatial label plus a temporal bin tag
/// (0 = time t, 1 = time t').
struct ModeId {
  Spatial spatial{Spatial::a};
  int temporal{0};

  friend auto operator<=>(const ModeId&, const ModeId&) = default;
};

std::string to_string(const ModeId& m);

/// Photon counts per mode, aligned with a state's canonical mode list.
using OccupationVector = std::vector<int>;

/// Sparse pure state: map from occupation vectors to complex amplitudes
/// over a fixed, canonically ordered mode list.
class FockStateVector {
 public:
  using AmplitudeMap = std::map<OccupationVector, Complex>;

  FockStateVector() = default;

  /// Vacuum on the given modes (sorted into canonical order; duplicates rejected).
  explicit FockStateVector(std::vector<ModeId> modes);

  /// Single basis ket |occ> with amplitude 1. occ is aligned with `modes`
  /// as passed, before canonical reordering.
  static FockStateVector basis(std::vector<ModeId> modes, OccupationVector occ);

  /// State with the given modes and no stored amplitudes.
  static FockStateVector zero(std::vector<ModeId> modes);

  const std::vector<ModeId>& modes() const { return modes_; }
  const AmplitudeMap& amplitudes() const { return amps_; }
  std::size_t mode_count() const { return modes_.size(); }

  bool has_mode(const ModeId& m) const;
  /// Index of `m` in the canonical mode list; throws ModeNotFoundError.
  std::size_t mode_index(const ModeId& m) const;

  /// Amplitude of |occ> (0 if absent). occ must have mode_count entries.
  Complex amplitude(const OccupationVector& occ) const;
  void set_amplitude(const OccupationVector& occ, Complex a);
  void add_amplitude(const OccupationVector& occ, Complex a);

  double norm_squared() const;
  bool is_normalized(double tol = 1e-9) const;

  /// Drop stored amplitudes with |a| < threshold.
  void prune(double threshold = kPruneThreshold);

  /// Rename spatial labels (e.g. {a->c, b->d}); occupations are permuted
  /// into the new canonical order. Labels not in the map are kept.
  FockStateVector relabeled(const std::vector<std::pair<Spatial, Spatial>>& renames) const;

  friend bool operator==(const FockStateVector&, const FockStateVector&) = default;

 private:
  std::vector<ModeId> modes_;
  AmplitudeMap amps_;
};

/// Convenience builder: basis ket from (mode, count) pairs; unlisted
/// counts do not exist (the mode list is exactly the pairs given).
FockStateVector make_basis_state(std::initializer_list<std::pair<ModeId, int>> occupation);

/// One linear-optical element.
struct BeamSplitter {
  ModeId mode1;
  ModeId mode2;
  double transmissivity{0.5};
};

struct PhaseShifter {
  ModeId mode;
  double phase{0.0};
};

/// Two-mode beamsplitter via the rotation-form creation-operator
/// substitution
///   m1+ ->  sqrt(T) m1+ + sqrt(1-T) m2+
///   m2+ -> -sqrt(1-T) m1+ + sqrt(T) m2+
/// so T = 1 is the identity. Both modes must carry the same temporal
/// tag; norm and photon number per temporal tag are preserved.
FockStateVector apply_beamsplitter(const FockStateVector& state, const ModeId& m1,
                                   const ModeId& m2, double transmissivity);

/// Multiplies each basis amplitude by exp(i * n * phi), n the occupation
/// of `mode`.
FockStateVector apply_phase_shift(const FockStateVector& state, const ModeId& mode,
                                  double phi);

FockStateVector apply_element(const FockStateVector& state, const BeamSplitter& bs);
FockStateVector apply_element(const FockStateVector& state, const PhaseShifter& ps);

/// Combined state on the disjoint union of the mode lists.
FockStateVector tensor_product(const FockStateVector& s1, const FockStateVector& s2);

/// Probability of finding exactly `count` photons in each listed mode
/// (marginal over unlisted modes).
double outcome_probability(const FockStateVector& state,
                           const std::vector<std::pair<ModeId, int>>& pattern);

/// Same, but per spatial label with temporal tags summed over: `count`
/// photons total across all temporal copies of the label.
double outcome_probability(const FockStateVector& state,
                           const std::vector<std::pair<Spatial, int>>& spatial_pattern);

/// Marginal distribution of total photon number per spatial label, in
/// `labels` order. Keys are per-label totals, values are probabilities.
std::map<std::vector<int>, double> spatial_occupation_distribution(
    const FockStateVector& state, const std::vector<Spatial>& labels);

/// Total photon count of an occupation vector.
int photon_total(const OccupationVector& occ);

double factorial(int n);
double binomial_coefficient(int n, int k);

}  // namespace mzfringe
