// transition.hpp
// Matrix-permanent transition amplitudes for linear-optical networks.
// Independent of the creation-operator substitution path in fock.hpp;
// the two must agree for any network built from beamsplitters and
// phase shifters, which is what makes this an oracle.

#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "mzfringe/fock.hpp"

namespace mzfringe {

using LinearElement = std::variant<BeamSplitter, PhaseShifter>;

/// Permanent by direct expansion; fine for the <= 6x6 matrices occurring
/// at <= 6 photons.
Complex permanent(const Eigen::MatrixXcd& m);

/// <out| U |in> for an m-mode network with mode unitary U (column j =
/// image of input mode j's creation operator):
///   perm(U[out, in]) / sqrt(prod in_j! prod out_i!)
/// U must be unitary within 1e-10; mismatched photon totals give 0.
Complex transition_amplitude(const Eigen::MatrixXcd& unitary, const OccupationVector& in,
                             const OccupationVector& out);

/// Mode unitary of a single element over the given (canonically ordered)
/// mode list, using the same substitution convention as
/// apply_beamsplitter / apply_phase_shift.
Eigen::MatrixXcd element_unitary(const LinearElement& element,
                                 const std::vector<ModeId>& modes);

/// Composed mode unitary of elements applied in sequence order.
Eigen::MatrixXcd network_unitary(const std::vector<LinearElement>& elements,
                                 const std::vector<ModeId>& modes);

}  // namespace mzfringe
