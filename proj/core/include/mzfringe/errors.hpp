// errors.hpp
// Exception types thrown by the mzfringe core library.

#pragma once

#include <stdexcept>
#include <string>

namespace mzfringe {

/// A mode referenced by an operation is not part of the state's mode list.
class ModeNotFoundError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A linear-optical element is malformed (bad transmissivity, mixed
/// temporal tags on a beamsplitter, ...).
class InvalidElementError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Tensor product of states with overlapping mode sets.
class ModeCollisionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Matrix handed to the transition-amplitude oracle is not unitary.
class InvalidUnitaryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input state handed to the interferometer lives on the wrong modes.
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// (input, detection pattern) combination without a supported fringe case.
class UnsupportedConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside its mathematical domain (n < 1, v <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Fringe model carries no phase information (V = 0).
class NoSensitivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scan configuration inconsistent with the requested simulation mode.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Degenerate design matrix in the sinusoid fit.
class IllConditionedFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fit requested on all-zero counts.
class NoSignalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dip-ratio estimate requested without baseline (large-delay) points.
class InsufficientBaselineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mzfringe
