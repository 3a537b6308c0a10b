#include "arenkit/sat.hpp"

#include "arenkit/error.hpp"

#include <algorithm>
#include <string>

namespace arenkit {

namespace {

using ClauseList = std::vector<std::vector<int>>;

void check_var(int var, int universe) {
  if (var < 1 || var > universe) {
    throw Error(Errc::InvalidArgument,
                "variable " + std::to_string(var) + " outside universe 1.." + std::to_string(universe));
  }
}

ClauseList to_clauses(int universe, const std::vector<BoolConstraint>& constraints) {
  ClauseList clauses;
  for (const auto& constraint : constraints) {
    if (const auto* clause = std::get_if<Clause>(&constraint)) {
      for (int lit : clause->literals) check_var(lit < 0 ? -lit : lit, universe);
      clauses.push_back(clause->literals);
    } else if (const auto* alo = std::get_if<AtLeastOneOf>(&constraint)) {
      for (int v : alo->vars) check_var(v, universe);
      clauses.push_back(alo->vars);
    } else {
      const auto& block = std::get<ImplicationBlock>(constraint);
      std::vector<char> inside(static_cast<std::size_t>(universe) + 1, 0);
      for (int v : block.inside) {
        check_var(v, universe);
        inside[static_cast<std::size_t>(v)] = 1;
      }
      std::vector<int> outside;
      for (int v = 1; v <= universe; ++v) {
        if (!inside[static_cast<std::size_t>(v)]) outside.push_back(v);
      }
      // (all inside) or (some outside)  ==  AND_i (b_i or some outside)
      for (int v : block.inside) {
        std::vector<int> lits = outside;
        lits.push_back(v);
        clauses.push_back(std::move(lits));
      }
    }
  }
  return clauses;
}

// DPLL over a fixed variable order with a ">= target true" side condition.
class CardinalitySearch {
 public:
  CardinalitySearch(int universe, const ClauseList& clauses, SatStats* stats)
      : universe_(universe), clauses_(clauses), stats_(stats) {}

  bool solve(int target, std::vector<int>& true_vars) {
    target_ = target;
    std::vector<signed char> value(static_cast<std::size_t>(universe_) + 1, -1);
    if (!search(value)) return false;
    true_vars.clear();
    for (int v = 1; v <= universe_; ++v) {
      if (value[static_cast<std::size_t>(v)] == 1) true_vars.push_back(v);
    }
    return true;
  }

 private:
  static bool literal_true(const std::vector<signed char>& value, int lit) {
    const signed char val = value[static_cast<std::size_t>(lit < 0 ? -lit : lit)];
    return val >= 0 && (val == 1) == (lit > 0);
  }

  bool propagate(std::vector<signed char>& value) const {
    bool changed = true;
    while (changed) {
      changed = false;
      int trues = 0;
      int open = 0;
      for (int v = 1; v <= universe_; ++v) {
        const signed char val = value[static_cast<std::size_t>(v)];
        trues += val == 1;
        open += val < 0;
      }
      if (trues + open < target_) return false;
      if (open > 0 && trues + open == target_) {
        for (int v = 1; v <= universe_; ++v) {
          if (value[static_cast<std::size_t>(v)] < 0) value[static_cast<std::size_t>(v)] = 1;
        }
        changed = true;
      }
      for (const auto& clause : clauses_) {
        int unassigned = 0;
        int last_open = 0;
        bool satisfied = false;
        for (int lit : clause) {
          if (literal_true(value, lit)) {
            satisfied = true;
            break;
          }
          if (value[static_cast<std::size_t>(lit < 0 ? -lit : lit)] < 0) {
            ++unassigned;
            last_open = lit;
          }
        }
        if (satisfied) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) {
          value[static_cast<std::size_t>(last_open < 0 ? -last_open : last_open)] =
              last_open > 0 ? 1 : 0;
          changed = true;
        }
      }
    }
    return true;
  }

  bool search(std::vector<signed char>& value) {
    if (!propagate(value)) return false;
    int branch = 0;
    for (int v = 1; v <= universe_; ++v) {
      if (value[static_cast<std::size_t>(v)] < 0) {
        branch = v;
        break;
      }
    }
    if (branch == 0) return true;
    if (stats_) ++stats_->decisions;
    for (signed char choice : {1, 0}) {
      std::vector<signed char> trial = value;
      trial[static_cast<std::size_t>(branch)] = choice;
      if (search(trial)) {
        value = std::move(trial);
        return true;
      }
    }
    return false;
  }

  int universe_;
  const ClauseList& clauses_;
  SatStats* stats_;
  int target_ = 0;
};

}  // namespace

std::optional<Assignment> maximize_true(int universe, const std::vector<BoolConstraint>& constraints,
                                        std::optional<int> upper_bound, SatStats* stats) {
  if (universe < 1) throw Error(Errc::InvalidArgument, "universe must be at least 1");
  const ClauseList clauses = to_clauses(universe, constraints);
  if (stats) ++stats->solves;
  for (const auto& clause : clauses) {
    if (clause.empty()) return std::nullopt;
  }
  CardinalitySearch search(universe, clauses, stats);
  const int start = std::clamp(upper_bound.value_or(universe), 0, universe);
  // Linear descent: the first satisfiable bound is the optimum.
  for (int target = start; target >= 0; --target) {
    Assignment found;
    if (search.solve(target, found.true_vars)) return found;
  }
  return std::nullopt;
}

void add_blocking(std::vector<BoolConstraint>& constraints, int universe,
                  const std::vector<int>& solved_set) {
  if (solved_set.empty()) {
    throw Error(Errc::InvalidArgument, "cannot block an empty set");
  }
  std::vector<char> inside(static_cast<std::size_t>(universe) + 1, 0);
  for (int v : solved_set) {
    check_var(v, universe);
    inside[static_cast<std::size_t>(v)] = 1;
  }
  AtLeastOneOf block;
  for (int v = 1; v <= universe; ++v) {
    if (!inside[static_cast<std::size_t>(v)]) block.vars.push_back(v);
  }
  constraints.emplace_back(std::move(block));
}

bool satisfies(int universe, const std::vector<BoolConstraint>& constraints,
               const std::vector<int>& true_vars) {
  std::vector<char> value(static_cast<std::size_t>(universe) + 1, 0);
  for (int v : true_vars) {
    check_var(v, universe);
    value[static_cast<std::size_t>(v)] = 1;
  }
  for (const auto& clause : to_clauses(universe, constraints)) {
    const bool ok = std::any_of(clause.begin(), clause.end(), [&](int lit) {
      return (value[static_cast<std::size_t>(lit < 0 ? -lit : lit)] == 1) == (lit > 0);
    });
    if (!ok) return false;
  }
  return true;
}

}  // namespace arenkit
