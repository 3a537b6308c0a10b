#include "arenkit/region_count.hpp"

#include "arenkit/error.hpp"
#include "arenkit/linfeas.hpp"
#include "arenkit/sat.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>

namespace arenkit {

namespace {

// Dynamic bitset over constraint indices, enough for inclusion-exclusion.
using Bits = std::vector<std::uint64_t>;

Bits to_bits(const ActiveSet& set, int rho) {
  Bits bits(static_cast<std::size_t>(rho + 63) / 64, 0);
  for (int i : set.indices) bits[static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64);
  return bits;
}

int popcount(const Bits& bits) {
  int total = 0;
  for (auto word : bits) total += __builtin_popcountll(word);
  return total;
}

// Accumulates signed term counts by intersection size: sum over nonempty T of
// (-1)^{|T|+1} 2^{|cap T|}.
void inclusion_exclusion(const std::vector<Bits>& sets, std::size_t next, const Bits& meet,
                         int depth, std::vector<std::array<std::int64_t, 2>>& tally) {
  for (std::size_t i = next; i < sets.size(); ++i) {
    Bits joined = meet;
    for (std::size_t w = 0; w < joined.size(); ++w) joined[w] &= sets[i][w];
    const int size = popcount(joined);
    tally[static_cast<std::size_t>(size)][(depth + 1) % 2] += 1;
    inclusion_exclusion(sets, i + 1, joined, depth + 1, tally);
  }
}

}  // namespace

ActiveSet::ActiveSet(std::vector<int> idx) : indices(std::move(idx)) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
}

bool ActiveSet::contains(int index) const {
  return std::binary_search(indices.begin(), indices.end(), index);
}

bool ActiveSet::is_subset_of(const ActiveSet& other) const {
  return std::includes(other.indices.begin(), other.indices.end(), indices.begin(), indices.end());
}

MatrixXd ActiveSet::selector(int rho) const {
  MatrixXd sel = MatrixXd::Zero(static_cast<Eigen::Index>(indices.size()), rho);
  for (std::size_t k = 0; k < indices.size(); ++k) sel(static_cast<Eigen::Index>(k), indices[k]) = 1.0;
  return sel;
}

MatrixXd feasibility_matrix(const CondensedQp& qp) {
  Eigen::LLT<MatrixXd> llt(qp.H);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::NonPositiveDefinite, "H is not positive definite");
  }
  // (H^-1 G')' = G H^-1 since H is symmetric.
  return llt.solve(qp.G.transpose()).transpose();
}

SubsetCount count_unique_subsets(const std::vector<ActiveSet>& sets, int rho, std::size_t threshold) {
  SubsetCount out;
  if (sets.empty()) {
    out.value = 1;
    return out;
  }
  if (sets.size() > threshold) {
    BigInt sum = 0;
    for (const auto& s : sets) sum += pow2(static_cast<unsigned>(s.size()));
    out.value = std::min(sum, pow2(static_cast<unsigned>(rho)));
    out.exact = false;
    return out;
  }
  std::vector<Bits> bits;
  bits.reserve(sets.size());
  for (const auto& s : sets) bits.push_back(to_bits(s, rho));
  Bits all(static_cast<std::size_t>(rho + 63) / 64, ~std::uint64_t{0});
  std::vector<std::array<std::int64_t, 2>> tally(static_cast<std::size_t>(rho) + 1, {0, 0});
  inclusion_exclusion(bits, 0, all, 0, tally);
  BigInt total = 0;
  for (int size = 0; size <= rho; ++size) {
    const auto& t = tally[static_cast<std::size_t>(size)];
    // index 1: odd |T| (added), index 0: even |T| (subtracted)
    total += BigInt(t[1] - t[0]) * pow2(static_cast<unsigned>(size));
  }
  out.value = total;
  return out;
}

RegionCountReport estimate_region_count(const CondensedQp& qp, const RegionCountOptions& options) {
  if (!(options.epsilon > 0.0)) throw Error(Errc::InvalidArgument, "epsilon must be positive");
  const auto started = std::chrono::steady_clock::now();
  const MatrixXd hyperplanes = feasibility_matrix(qp);
  const int rho = qp.rho;

  RegionCountReport report;
  report.epsilon = options.epsilon;
  report.rho = rho;
  report.two_pow_rho = pow2(static_cast<unsigned>(rho));

  std::vector<BoolConstraint> constraints;
  LinfeasStats lp_stats;
  SatStats sat_stats;
  std::optional<int> bound;

  while (true) {
    if (options.budget && std::chrono::steady_clock::now() - started > *options.budget) {
      report.complete = false;
      break;
    }
    ++report.sat_calls;
    const auto candidate = maximize_true(rho, constraints, bound, &sat_stats);
    if (!candidate || candidate->true_vars.empty()) break;
    bound = static_cast<int>(candidate->true_vars.size());

    std::vector<int> rows;
    rows.reserve(candidate->true_vars.size());
    for (int var : candidate->true_vars) rows.push_back(var - 1);
    IneqSystem sys(MatrixXd(static_cast<Eigen::Index>(rows.size()), qp.omega),
                   VectorXd::Constant(static_cast<Eigen::Index>(rows.size()), -options.epsilon), rows);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      sys.M.row(static_cast<Eigen::Index>(k)) = hyperplanes.row(rows[k]);
    }

    ++report.lp_calls;
    if (check_feasible(sys, &lp_stats).is_feasible()) {
      report.maximal_sets.emplace_back(rows);
      add_blocking(constraints, rho, candidate->true_vars);
    } else {
      const std::vector<int> iis = extract_iis(sys, &lp_stats);
      report.lp_calls += static_cast<std::int64_t>(rows.size()) + 1;
      Clause learned;
      for (int row : iis) learned.literals.push_back(-(row + 1));
      constraints.emplace_back(std::move(learned));
      ++report.iis_learned;
      spdlog::debug("region-count: learned IIS of size {}", iis.size());
    }
  }

  report.partial_sum = 0;
  for (const auto& s : report.maximal_sets) report.partial_sum += pow2(static_cast<unsigned>(s.size()));
  if (report.complete) {
    const SubsetCount counted =
        count_unique_subsets(report.maximal_sets, rho, options.inclusion_exclusion_threshold);
    report.n_est = counted.value;
    report.n_est_exact = counted.exact;
  } else {
    // An interrupted enumeration only supports the trivial bound.
    report.n_est = report.two_pow_rho;
    report.n_est_exact = false;
    spdlog::warn("region-count: budget exhausted after {} maximal sets; falling back to 2^rho",
                 report.maximal_sets.size());
  }
  report.wall_time = std::chrono::steady_clock::now() - started;
  return report;
}

}  // namespace arenkit
