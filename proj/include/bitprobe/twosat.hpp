#pragma once
// 2-SAT over the first-array variables: implication graph + strongly
// connected components. Satisfiable verdicts return the canonical
// SCC-order model; unsatisfiable verdicts carry an implication chain
// from a literal to its negation.

#include <cstdint>
#include <vector>

#include "bitprobe/errors.hpp"

namespace bitprobe::twosat {

struct Literal {
  std::uint32_t var = 0;
  bool negated = false;

  bool operator==(const Literal&) const = default;
};

inline Literal pos(std::uint32_t var) { return {var, false}; }
inline Literal neg(std::uint32_t var) { return {var, true}; }

struct Clause {
  Literal first, second;
};

struct Instance {
  std::size_t num_vars = 0;
  std::vector<Clause> clauses;
};

struct Result {
  bool satisfiable = false;
  /// var -> 0/1; only meaningful when satisfiable.
  std::vector<std::uint8_t> assignment;
  /// Implication path L -> ... -> not L; only meaningful when unsatisfiable.
  std::vector<Literal> contradiction_chain;
};

/// Solve the instance. The returned assignment is re-checked against every
/// clause before being handed back; the chain is a valid implication path.
Result solve(const Instance& instance);

/// Direct evaluation used for the soundness re-check and by tests.
bool satisfies(const Instance& instance, const std::vector<std::uint8_t>& assignment);

/// Thrown by storers when the compiled constraints are unsatisfiable.
class UnsatisfiableError : public SchemeError {
 public:
  UnsatisfiableError(const std::string& what, std::vector<Literal> chain)
      : SchemeError(what), chain(std::move(chain)) {}
  std::vector<Literal> chain;
};

}  // namespace bitprobe::twosat
