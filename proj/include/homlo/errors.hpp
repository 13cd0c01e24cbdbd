#pragma once
#include <stdexcept>
#include <string>

namespace homlo {

/// Parameter outside its physical domain (negative probability, M > 1, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent input data (files, tag streams, sweeps).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A quantity is mathematically undefined for the given input
/// (zero mean photon number, zero normalization, ...).
class UndefinedQuantity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Fock-space cutoff too small for the requested coherent amplitude.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fit cannot be carried out (too few points, single abscissa, ...).
class IllConditionedFit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace homlo
