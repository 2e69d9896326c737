#pragma once
// Error taxonomy. Construction-time failures (regime, retries) are distinct
// from storing failures (matching, admissibility) so callers can choose
// between falling back to a characteristic vector and resampling a graph.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bitprobe {

class SchemeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters outside the constructible range of a sampling formula.
/// Callers normally fall back to the characteristic-vector scheme.
class FormulaRegimeError : public SchemeError {
 public:
  using SchemeError::SchemeError;
};

/// The resampling budget was exhausted without producing a valid artifact.
class RetriesExhaustedError : public SchemeError {
 public:
  using SchemeError::SchemeError;
};

/// An exhaustive check was asked for more work than its configured budget.
class BudgetExceededError : public SchemeError {
 public:
  using SchemeError::SchemeError;
};

/// Malformed scheme or memory: an address points outside the bit memory,
/// a file header is inconsistent, etc. Never silently mapped to "No".
class CorruptionError : public SchemeError {
 public:
  using SchemeError::SchemeError;
};

/// A stored memory failed the post-store full query check.
class VerificationFailedError : public SchemeError {
 public:
  VerificationFailedError(const std::string& what, std::vector<std::uint64_t> set,
                          std::uint64_t element)
      : SchemeError(what), set(std::move(set)), element(element) {}
  std::vector<std::uint64_t> set;
  std::uint64_t element;
};

/// No system of disjoint representatives exists; carries a Hall violator.
class NoMatchingError : public SchemeError {
 public:
  NoMatchingError(const std::string& what, std::vector<std::uint64_t> violator)
      : SchemeError(what), violator(std::move(violator)) {}
  std::vector<std::uint64_t> violator;
};

/// Peeling got stuck on an oversized residual set; carries the witness set.
class NotAdmissibleError : public SchemeError {
 public:
  NotAdmissibleError(const std::string& what, std::vector<std::uint64_t> witness)
      : SchemeError(what), witness(std::move(witness)) {}
  std::vector<std::uint64_t> witness;
};

/// Parameter combination the module deliberately rejects (e.g. t = 3 in the
/// composed adaptive scheme, which the dedicated three-probe scheme covers).
class UnsupportedParameterError : public SchemeError {
 public:
  using SchemeError::SchemeError;
};

/// force_answer precondition violation: too many uncontrolled tree nodes.
class TooFewControlledError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace bitprobe
