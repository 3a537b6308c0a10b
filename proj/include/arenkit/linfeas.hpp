#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <vector>

namespace arenkit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Rows `M x <= rhs`, each row tagged with an integer label (typically the
/// index of the originating constraint).
struct IneqSystem {
  MatrixXd M;
  VectorXd rhs;
  std::vector<int> labels;

  IneqSystem() = default;
  IneqSystem(MatrixXd matrix, VectorXd bound);
  IneqSystem(MatrixXd matrix, VectorXd bound, std::vector<int> row_labels);

  Eigen::Index rows() const { return M.rows(); }
  Eigen::Index cols() const { return M.cols(); }

  /// Subsystem made of the given row positions (not labels), in that order.
  IneqSystem subsystem(const std::vector<int>& row_positions) const;
};

/// Absolute row-residual tolerance used for every feasibility verdict.
inline constexpr double kFeasibilityTol = 1e-9;

class FeasibilityResult {
 public:
  static FeasibilityResult feasible(VectorXd witness);
  static FeasibilityResult infeasible(VectorXd certificate);

  bool is_feasible() const { return feasible_; }
  /// A point with M * witness <= rhs (within kFeasibilityTol). Empty if infeasible.
  const VectorXd& witness() const { return witness_; }
  /// Farkas multipliers y >= 0 with y'M = 0 and y'rhs < 0. Empty if feasible.
  const VectorXd& certificate() const { return certificate_; }

 private:
  bool feasible_ = false;
  VectorXd witness_;
  VectorXd certificate_;
};

struct LinfeasStats {
  std::int64_t lp_solves = 0;
  std::int64_t pivots = 0;
};

FeasibilityResult check_feasible(const IneqSystem& sys, LinfeasStats* stats = nullptr);

/// Irreducible infeasible subset via the deletion filter; returns labels in row
/// order. Throws Error{NotInfeasible} if the system is feasible.
std::vector<int> extract_iis(const IneqSystem& sys, LinfeasStats* stats = nullptr);

struct ChebyshevBall {
  VectorXd center;
  /// Negative when the polyhedron is empty, +infinity when balls of any size fit.
  double radius = 0.0;
  bool unbounded() const { return radius == std::numeric_limits<double>::infinity(); }
};

ChebyshevBall chebyshev_center(const IneqSystem& sys, LinfeasStats* stats = nullptr);

}  // namespace arenkit
