#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace arenkit {

/// Variables are 1-based: a literal `+v` means b_v is true, `-v` means false.
struct Clause {
  std::vector<int> literals;
};

/// At least one of `vars` is true (an empty set is a contradiction).
struct AtLeastOneOf {
  std::vector<int> vars;
};

/// If not every variable of `inside` is true, some variable outside `inside`
/// is true. Note this admits `inside` itself; `add_blocking` uses the stronger
/// AtLeastOneOf(complement) form.
struct ImplicationBlock {
  std::vector<int> inside;
};

using BoolConstraint = std::variant<Clause, AtLeastOneOf, ImplicationBlock>;

/// Sorted set of true variables.
struct Assignment {
  std::vector<int> true_vars;
};

struct SatStats {
  std::int64_t decisions = 0;
  std::int64_t solves = 0;
};

/// Maximum-cardinality satisfying assignment over variables 1..universe, or
/// nullopt when the constraints are unsatisfiable. Among maxima the
/// lexicographically smallest true-set is returned. `upper_bound`, when given,
/// caps the cardinality search (callers that only ever add constraints can pass
/// the previous optimum).
std::optional<Assignment> maximize_true(int universe, const std::vector<BoolConstraint>& constraints,
                                        std::optional<int> upper_bound = std::nullopt,
                                        SatStats* stats = nullptr);

/// Appends a constraint forbidding every subset of `solved_set` (itself
/// included): at least one variable outside it must be true.
/// Throws Error{InvalidArgument} on an empty set.
void add_blocking(std::vector<BoolConstraint>& constraints, int universe,
                  const std::vector<int>& solved_set);

/// True iff `true_vars` satisfies every constraint.
bool satisfies(int universe, const std::vector<BoolConstraint>& constraints,
               const std::vector<int>& true_vars);

}  // namespace arenkit
