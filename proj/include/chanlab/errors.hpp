#pragma once

#include <stdexcept>
#include <string>

namespace chanlab {

/// Precondition or invariant violated by an argument (bad dimension, non-unit
/// norm, non-Hermitian input, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A requested computation exceeds the configured scalar-operation budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The optimizer produced a non-finite value or no iterate at all.
class OptimizerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sampling loop exhausted its retry cap.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chanlab
