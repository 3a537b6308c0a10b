#pragma once

#include "arenkit/bigint.hpp"
#include "arenkit/condense.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

namespace arenkit {

/// Sorted, duplicate-free subset of constraint indices (0-based rows of G).
struct ActiveSet {
  std::vector<int> indices;

  ActiveSet() = default;
  explicit ActiveSet(std::vector<int> idx);

  std::size_t size() const { return indices.size(); }
  bool contains(int index) const;
  bool is_subset_of(const ActiveSet& other) const;
  /// The |alpha| x rho row-selector matrix.
  MatrixXd selector(int rho) const;

  friend bool operator==(const ActiveSet&, const ActiveSet&) = default;
  friend auto operator<=>(const ActiveSet&, const ActiveSet&) = default;
};

/// G H^-1 (rho x omega). Row subset alpha is tested via  rows_alpha * v <= -eps.
MatrixXd feasibility_matrix(const CondensedQp& qp);

struct SubsetCount {
  BigInt value;
  /// False when the family exceeded the inclusion-exclusion threshold and
  /// `value` is min(sum 2^|alpha|, 2^rho) rather than the exact union size.
  bool exact = true;
};

inline constexpr std::size_t kInclusionExclusionThreshold = 20;

/// |union of the power sets of `sets`| (the empty family counts the empty set).
SubsetCount count_unique_subsets(const std::vector<ActiveSet>& sets, int rho,
                                 std::size_t threshold = kInclusionExclusionThreshold);

struct RegionCountOptions {
  double epsilon = 1e-6;
  /// Wall-clock budget; unlimited when empty.
  std::optional<std::chrono::duration<double>> budget;
  std::size_t inclusion_exclusion_threshold = kInclusionExclusionThreshold;
};

struct RegionCountReport {
  std::vector<ActiveSet> maximal_sets;
  BigInt n_est;
  BigInt two_pow_rho;
  bool n_est_exact = true;  // union size computed exactly
  bool complete = true;     // enumeration ran to completion (no timeout)
  BigInt partial_sum;       // sum 2^|alpha| over found sets (informational)
  double epsilon = 0.0;
  int rho = 0;
  std::chrono::duration<double> wall_time{0};
  std::int64_t lp_calls = 0;
  std::int64_t sat_calls = 0;
  std::int64_t iis_learned = 0;
};

/// Enumerates maximal non-trivially feasible row subsets of G H^-1 by
/// alternating a cardinality-maximizing SAT search with LP feasibility checks,
/// learning an IIS clause on every infeasible candidate.
RegionCountReport estimate_region_count(const CondensedQp& qp, const RegionCountOptions& options = {});

}  // namespace arenkit
