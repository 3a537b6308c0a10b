#pragma once

#include <Eigen/Dense>

namespace arenkit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Linear MPC problem instance: LTI dynamics, quadratic cost and box limits on
/// outputs and inputs over a control horizon `horizon` (prediction horizon is
/// horizon + 1).
struct MpcSpec {
  MatrixXd A;  // n x n
  MatrixXd B;  // n x m
  MatrixXd C;  // l x n
  MatrixXd P;  // n x n terminal cost
  MatrixXd Q;  // n x n stage state cost
  MatrixXd R;  // m x m stage input cost
  MatrixXd K;  // m x n terminal feedback (only used to derive P)
  int horizon = 2;
  VectorXd y_min, y_max;
  VectorXd u_min, u_max;
  double epsilon = 1e-6;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
  int l() const { return static_cast<int>(C.rows()); }
};

/// Throws Error{DimensionMismatch | InvalidSpec | NonPositiveDefinite} when the
/// spec is malformed.
void validate(const MpcSpec& spec);

/// Condensed parametric QP
///   min_U 1/2 x'Yx + 1/2 U'HU + x'FU   s.t.  G U <= W + E x
/// and, after z = U + H^-1 F' x,
///   min_z 1/2 z'Hz                      s.t.  G z <= W + S x.
///
/// Constraint rows are ordered: output upper bounds (k = 1..Nc), output lower
/// bounds (k = 1..Nc), input upper bounds (k = 0..Nc), input lower bounds
/// (k = 0..Nc); each block is stacked by time step, then by component.
struct CondensedQp {
  MatrixXd H;  // omega x omega
  MatrixXd F;  // n x omega
  MatrixXd Y;  // n x n
  MatrixXd G;  // rho x omega
  VectorXd W;  // rho
  MatrixXd E;  // rho x n
  MatrixXd S;  // rho x n
  int omega = 0;
  int rho = 0;
  int n = 0;
  int m = 0;

  /// U = z - unconstrained_gain() * x ; the matrix H^-1 F'.
  MatrixXd unconstrained_gain() const;
};

int decision_count(int m, int horizon);
int constraint_count(int m, int l, int horizon);

CondensedQp condense(const MpcSpec& spec);

struct RiccatiSolution {
  MatrixXd P;
  MatrixXd K;  // u = K x
  int iterations = 0;
};

/// Fixed point of the discrete Riccati recursion starting from P = Q.
RiccatiSolution dare_solve(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q,
                           const MatrixXd& R, int max_iterations = 10000,
                           double tolerance = 1e-12);

/// Residual ||Q + A'PA - A'PB (R + B'PB)^-1 B'PA - P|| / (1 + ||P||).
double riccati_residual(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q,
                        const MatrixXd& R, const MatrixXd& P);

}  // namespace arenkit
