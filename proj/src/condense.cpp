#include "arenkit/condense.hpp"

#include "arenkit/error.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace arenkit {

namespace {

void require_shape(const MatrixXd& mat, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (mat.rows() != rows || mat.cols() != cols) {
    throw Error(Errc::DimensionMismatch,
                std::string(name) + " must be " + std::to_string(rows) + "x" + std::to_string(cols) +
                    ", got " + std::to_string(mat.rows()) + "x" + std::to_string(mat.cols()));
  }
}

void require_size(const VectorXd& vec, Eigen::Index size, const char* name) {
  if (vec.size() != size) {
    throw Error(Errc::DimensionMismatch, std::string(name) + " must have length " +
                                             std::to_string(size) + ", got " +
                                             std::to_string(vec.size()));
  }
}

void require_symmetric(const MatrixXd& mat, const char* name) {
  const double scale = std::max(1.0, mat.cwiseAbs().maxCoeff());
  if ((mat - mat.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(Errc::InvalidSpec, std::string(name) + " is not symmetric");
  }
}

void require_psd(const MatrixXd& mat, const char* name) {
  Eigen::LDLT<MatrixXd> ldlt(mat);
  const double scale = std::max(1.0, mat.cwiseAbs().maxCoeff());
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() < -1e-12 * scale).any()) {
    throw Error(Errc::NonPositiveDefinite, std::string(name) + " is not positive semidefinite");
  }
}

void require_pd(const MatrixXd& mat, const char* name) {
  Eigen::LLT<MatrixXd> llt(mat);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::NonPositiveDefinite, std::string(name) + " is not positive definite");
  }
}

void require_ordered(const VectorXd& lo, const VectorXd& hi, const char* name) {
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(lo(i) < hi(i))) {
      throw Error(Errc::InvalidSpec, std::string(name) + "_min must be below " + name +
                                         "_max element-wise (index " + std::to_string(i) + ")");
    }
  }
}

}  // namespace

void validate(const MpcSpec& spec) {
  const auto n = spec.A.rows();
  const auto m = spec.B.cols();
  const auto l = spec.C.rows();
  if (n < 1 || m < 1 || l < 1) {
    throw Error(Errc::DimensionMismatch, "A, B and C must be non-empty");
  }
  require_shape(spec.A, n, n, "A");
  require_shape(spec.B, n, m, "B");
  require_shape(spec.C, l, n, "C");
  require_shape(spec.P, n, n, "P");
  require_shape(spec.Q, n, n, "Q");
  require_shape(spec.R, m, m, "R");
  require_shape(spec.K, m, n, "K");
  require_size(spec.y_min, l, "y_min");
  require_size(spec.y_max, l, "y_max");
  require_size(spec.u_min, m, "u_min");
  require_size(spec.u_max, m, "u_max");
  if (spec.horizon < 2) {
    throw Error(Errc::InvalidSpec, "horizon Nc must be at least 2");
  }
  for (const MatrixXd* mat : {&spec.A, &spec.B, &spec.C, &spec.P, &spec.Q, &spec.R, &spec.K}) {
    if (!mat->allFinite()) throw Error(Errc::InvalidSpec, "matrix entries must be finite");
  }
  require_symmetric(spec.Q, "Q");
  require_symmetric(spec.P, "P");
  require_symmetric(spec.R, "R");
  require_psd(spec.Q, "Q");
  require_psd(spec.P, "P");
  require_pd(spec.R, "R");
  require_ordered(spec.y_min, spec.y_max, "y");
  require_ordered(spec.u_min, spec.u_max, "u");
  if (!(spec.epsilon > 0.0)) throw Error(Errc::InvalidSpec, "epsilon must be positive");
}

int decision_count(int m, int horizon) { return m * (horizon + 1); }

int constraint_count(int m, int l, int horizon) {
  return 2 * l * horizon + 2 * m * (horizon + 1);
}

MatrixXd CondensedQp::unconstrained_gain() const {
  return H.llt().solve(F.transpose());
}

CondensedQp condense(const MpcSpec& spec) {
  validate(spec);
  const int n = spec.n();
  const int m = spec.m();
  const int l = spec.l();
  const int nc = spec.horizon;
  const int omega = decision_count(m, nc);
  const int rho = constraint_count(m, l, nc);

  // Batch prediction x_k = Phi_k x + Gamma_k U for k = 0..Nc+1.
  std::vector<MatrixXd> phi(nc + 2);
  std::vector<MatrixXd> gamma(nc + 2);
  phi[0] = MatrixXd::Identity(n, n);
  gamma[0] = MatrixXd::Zero(n, omega);
  for (int k = 1; k <= nc + 1; ++k) {
    phi[k] = spec.A * phi[k - 1];
    gamma[k] = spec.A * gamma[k - 1];
    gamma[k].block(0, (k - 1) * m, n, m) += spec.B;
  }

  CondensedQp qp;
  qp.omega = omega;
  qp.rho = rho;
  qp.n = n;
  qp.m = m;

  MatrixXd hessian = MatrixXd::Zero(omega, omega);
  MatrixXd cross = MatrixXd::Zero(n, omega);
  MatrixXd state = MatrixXd::Zero(n, n);
  for (int k = 0; k <= nc + 1; ++k) {
    const MatrixXd& weight = (k == nc + 1) ? spec.P : spec.Q;
    hessian += gamma[k].transpose() * weight * gamma[k];
    cross += phi[k].transpose() * weight * gamma[k];
    state += phi[k].transpose() * weight * phi[k];
  }
  for (int k = 0; k <= nc; ++k) {
    hessian.block(k * m, k * m, m, m) += spec.R;
  }
  // The cost has no 1/2; the QP form does, so the factor 2 lives in H, F, Y.
  qp.H = 2.0 * hessian;
  qp.H = 0.5 * (qp.H + qp.H.transpose()).eval();
  qp.F = 2.0 * cross;
  qp.Y = 2.0 * state;

  qp.G = MatrixXd::Zero(rho, omega);
  qp.W = VectorXd::Zero(rho);
  qp.E = MatrixXd::Zero(rho, n);
  int row = 0;
  for (int sign : {+1, -1}) {
    for (int k = 1; k <= nc; ++k) {
      const MatrixXd out_gain = spec.C * gamma[k];
      const MatrixXd out_free = spec.C * phi[k];
      for (int i = 0; i < l; ++i, ++row) {
        qp.G.row(row) = sign * out_gain.row(i);
        qp.W(row) = sign > 0 ? spec.y_max(i) : -spec.y_min(i);
        qp.E.row(row) = -sign * out_free.row(i);
      }
    }
  }
  for (int sign : {+1, -1}) {
    for (int k = 0; k <= nc; ++k) {
      for (int i = 0; i < m; ++i, ++row) {
        qp.G(row, k * m + i) = sign;
        qp.W(row) = sign > 0 ? spec.u_max(i) : -spec.u_min(i);
      }
    }
  }

  Eigen::LLT<MatrixXd> llt(qp.H);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::NonPositiveDefinite, "condensed Hessian H is not positive definite");
  }
  qp.S = qp.E + qp.G * llt.solve(qp.F.transpose());
  return qp;
}

double riccati_residual(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q,
                        const MatrixXd& R, const MatrixXd& P) {
  const MatrixXd btpa = B.transpose() * P * A;
  const MatrixXd next =
      Q + A.transpose() * P * A - btpa.transpose() * (R + B.transpose() * P * B).ldlt().solve(btpa);
  return (next - P).norm() / (1.0 + P.norm());
}

RiccatiSolution dare_solve(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q,
                           const MatrixXd& R, int max_iterations, double tolerance) {
  if (A.rows() != A.cols() || B.rows() != A.rows() || Q.rows() != A.rows() ||
      Q.cols() != A.cols() || R.rows() != B.cols() || R.cols() != B.cols()) {
    throw Error(Errc::DimensionMismatch, "dare_solve: inconsistent A, B, Q, R shapes");
  }
  MatrixXd P = Q;
  for (int it = 1; it <= max_iterations; ++it) {
    const MatrixXd btpa = B.transpose() * P * A;
    MatrixXd next = Q + A.transpose() * P * A -
                    btpa.transpose() * (R + B.transpose() * P * B).ldlt().solve(btpa);
    next = 0.5 * (next + next.transpose()).eval();
    if (!next.allFinite()) break;
    const double change = (next - P).norm();
    P = std::move(next);
    if (change <= tolerance * (1.0 + P.norm())) {
      RiccatiSolution sol;
      sol.K = -(R + B.transpose() * P * B).ldlt().solve(B.transpose() * P * A);
      sol.P = std::move(P);
      sol.iterations = it;
      return sol;
    }
  }
  throw Error(Errc::NoConvergence, "Riccati iteration did not converge (is (A,B) stabilizable?)");
}

}  // namespace arenkit
