#pragma once

#include <stdexcept>
#include <string>

namespace massey {

/// Caller broke a precondition (dimension mismatch, unknown name, bad arity).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input data is structurally unusable (d∘d ≠ 0, Jacobi failure, ...).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Massey product was requested whose inner composites do not vanish in homology.
class UndefinedMasseyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal identity that must hold by construction failed.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A builder's validation gate rejected the requested construction.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace massey
