#pragma once

#include "arenkit/condense.hpp"
#include "arenkit/linfeas.hpp"
#include "arenkit/region_count.hpp"
#include "arenkit/relu_lattice.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace arenkit {

struct DomainBox {
  VectorXd lower;
  VectorXd upper;

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const VectorXd& x, double tol = 0.0) const;
  /// The 2n rows  x <= upper, -x <= -lower.
  IneqSystem as_system() const;
};

/// Active-set piece of the explicit controller: on `region` (intersected with
/// the domain box) the first control move is  control_gain * x + control_offset.
struct CriticalRegion {
  ActiveSet active_set;
  MatrixXd control_gain;    // m x n
  VectorXd control_offset;  // m
  IneqSystem region;        // lambda(x) >= 0 rows, then inactive primal rows
  VectorXd center;          // Chebyshev center of region and box
  double radius = 0.0;
  bool full_dim = false;    // radius > kFullDimRadius

  VectorXd law(const VectorXd& x) const { return control_gain * x + control_offset; }
};

inline constexpr double kFullDimRadius = 1e-7;
inline constexpr int kOracleConstraintLimit = 16;

/// Computes center, radius and full_dim of `piece` within `box`.
void measure_region(CriticalRegion& piece, const DomainBox& box);

struct PwaFunction {
  std::vector<CriticalRegion> pieces;
  DomainBox box;
  int n = 0;
  int m = 0;
  /// Active sets whose reduced KKT matrix was singular.
  std::vector<ActiveSet> skipped;

  /// First full-dimensional piece whose closure holds x, or nullptr.
  const CriticalRegion* locate(const VectorXd& x) const;
  std::optional<VectorXd> evaluate(const VectorXd& x) const;
};

/// Brute force over all 2^rho active sets. Throws Error{TooManyConstraints}
/// if rho > kOracleConstraintLimit.
PwaFunction enumerate_explicit(const CondensedQp& qp, const DomainBox& box);

/// Distinct control laws among full-dimensional pieces (1e-8 tolerance).
std::size_t exact_maximal_region_count(const PwaFunction& pwa, double tolerance = 1e-8);

/// First control move of the QP minimizer at x. Throws Error{Infeasible}.
VectorXd solve_pointwise(const CondensedQp& qp, const VectorXd& x);

/// True when some z satisfies G z <= W + S x.
bool qp_feasible(const CondensedQp& qp, const VectorXd& x);

/// Per-axis bisection for the largest t in [0, cap] with x = +-t e_i feasible.
/// Throws Error{Infeasible} if x = 0 is infeasible.
DomainBox default_domain_box(const CondensedQp& qp, double cap = 100.0);

/// Regular grid with about `target_points` points (same count per axis).
std::vector<VectorXd> box_grid(const DomainBox& box, std::size_t target_points);

struct LatticeOptions {
  std::uint64_t seed = 0;
  int samples_per_piece = 32;
  /// Points where the lattice must match the pwa; a box grid when empty.
  std::vector<VectorXd> verification_points;
  std::size_t grid_points = 10'000;
  double tie_tolerance = 1e-9;
};

struct LatticeExtraction {
  std::vector<CpwlDescription> channels;  // one scalar description per output
  /// Distinct value orderings of the local functions seen at interior samples.
  std::vector<std::size_t> orderings;
};

/// Two-level lattice form of each output channel of `pwa`. Throws
/// Error{CoverageGap} if a feasible verification point lies in no piece.
LatticeExtraction extract_lattice(const PwaFunction& pwa, const CondensedQp& qp,
                                  const LatticeOptions& options = {});

/// Same, for a pwa without an underlying QP (every uncovered point is an error).
LatticeExtraction extract_lattice(const PwaFunction& pwa, const LatticeOptions& options = {});

}  // namespace arenkit
