#include "arenkit/linfeas.hpp"

#include "arenkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace arenkit {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  VectorXd x;
  double objective = 0.0;
};

// Dense tableau simplex for  min c'x  s.t.  A x = b, x >= 0.
// Phase 1 uses one artificial per row; Bland's rule on both phases.
class Tableau {
 public:
  Tableau(const MatrixXd& A, const VectorXd& b, LinfeasStats* stats)
      : rows_(A.rows()), cols_(A.cols()), stats_(stats) {
    table_ = MatrixXd::Zero(rows_ + 1, cols_ + rows_ + 1);
    basis_.resize(rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const double sign = b(i) < 0 ? -1.0 : 1.0;
      table_.row(i).head(cols_) = sign * A.row(i);
      table_(i, cols_ + i) = 1.0;
      table_(i, rhs_col()) = sign * b(i);
      basis_[i] = cols_ + i;
    }
    max_pivots_ = 200 * (rows_ + cols_) + 1000;
  }

  // Returns the phase-1 optimum (sum of artificials).
  double phase_one() {
    objective_row().setZero();
    for (Eigen::Index i = 0; i < rows_; ++i) {
      objective_row().head(cols_) -= table_.row(i).head(cols_);
      table_(rows_, rhs_col()) -= table_(i, rhs_col());
    }
    run(cols_ + rows_);
    return -table_(rows_, rhs_col());
  }

  // Pivots remaining artificials out of the basis where possible.
  void drop_artificials() {
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] < cols_) continue;
      for (Eigen::Index j = 0; j < cols_; ++j) {
        if (std::abs(table_(i, j)) > 1e-9) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2 over original columns only. Returns false if unbounded.
  bool phase_two(const VectorXd& cost) {
    objective_row().setZero();
    objective_row().head(cols_) = cost.transpose();
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const Eigen::Index bj = basis_[i];
      const double cb = bj < cols_ ? cost(bj) : 0.0;
      if (cb != 0.0) objective_row() -= cb * table_.row(i);
    }
    return run(cols_);
  }

  VectorXd solution() const {
    VectorXd x = VectorXd::Zero(cols_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] < cols_) x(basis_[i]) = std::max(0.0, table_(i, rhs_col()));
    }
    return x;
  }

 private:
  Eigen::Index rhs_col() const { return cols_ + rows_; }
  MatrixXd::RowXpr objective_row() { return table_.row(rows_); }

  // Bland's rule: lowest-index improving column, lowest-index leaving variable
  // among ratio ties. Returns false when an improving column has no bound.
  bool run(Eigen::Index allowed_cols) {
    while (true) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed_cols; ++j) {
        if (table_(rows_, j) < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best_ratio = 0.0;
      for (Eigen::Index i = 0; i < rows_; ++i) {
        const double a = table_(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = table_(i, rhs_col()) / a;
        if (leave < 0 || ratio < best_ratio - 1e-14 ||
            (std::abs(ratio - best_ratio) <= 1e-14 && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    if (++pivots_ > max_pivots_) {
      throw Error(Errc::NumericalBreakdown, "simplex exceeded its pivot budget");
    }
    if (stats_) ++stats_->pivots;
    table_.row(r) /= table_(r, c);
    for (Eigen::Index i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double factor = table_(i, c);
      if (factor != 0.0) table_.row(i) -= factor * table_.row(r);
    }
    basis_[r] = c;
  }

  Eigen::Index rows_;
  Eigen::Index cols_;
  MatrixXd table_;
  std::vector<Eigen::Index> basis_;
  LinfeasStats* stats_;
  long pivots_ = 0;
  long max_pivots_ = 0;
};

// Phase 1 on { x >= 0 : A x = b }. Returns the residual sum of artificials;
// `x` receives the final basic solution either way.
double standard_form_residual(const MatrixXd& A, const VectorXd& b, VectorXd& x, LinfeasStats* stats) {
  if (stats) ++stats->lp_solves;
  Tableau tab(A, b, stats);
  const double residual = tab.phase_one();
  x = tab.solution();
  return residual;
}

LpSolution standard_form_minimize(const MatrixXd& A, const VectorXd& b, const VectorXd& cost,
                                  LinfeasStats* stats) {
  if (stats) ++stats->lp_solves;
  LpSolution out;
  Tableau tab(A, b, stats);
  if (tab.phase_one() > kFeasibilityTol) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  tab.drop_artificials();
  const bool bounded = tab.phase_two(cost);
  out.x = tab.solution();
  out.objective = cost.dot(out.x);
  out.status = bounded ? LpStatus::Optimal : LpStatus::Unbounded;
  return out;
}

void require_finite(const IneqSystem& sys) {
  if (sys.M.rows() != sys.rhs.size() ||
      static_cast<std::size_t>(sys.M.rows()) != sys.labels.size()) {
    throw Error(Errc::DimensionMismatch, "inequality system rows, rhs and labels disagree");
  }
  if (!sys.M.allFinite() || !sys.rhs.allFinite()) {
    throw Error(Errc::InvalidArgument, "inequality system has non-finite entries");
  }
}

}  // namespace

IneqSystem::IneqSystem(MatrixXd matrix, VectorXd bound)
    : M(std::move(matrix)), rhs(std::move(bound)), labels(static_cast<std::size_t>(M.rows())) {
  std::iota(labels.begin(), labels.end(), 0);
}

IneqSystem::IneqSystem(MatrixXd matrix, VectorXd bound, std::vector<int> row_labels)
    : M(std::move(matrix)), rhs(std::move(bound)), labels(std::move(row_labels)) {}

IneqSystem IneqSystem::subsystem(const std::vector<int>& row_positions) const {
  IneqSystem sub;
  sub.M.resize(static_cast<Eigen::Index>(row_positions.size()), M.cols());
  sub.rhs.resize(static_cast<Eigen::Index>(row_positions.size()));
  sub.labels.reserve(row_positions.size());
  for (std::size_t k = 0; k < row_positions.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    sub.M.row(i) = M.row(row_positions[k]);
    sub.rhs(i) = rhs(row_positions[k]);
    sub.labels.push_back(labels[static_cast<std::size_t>(row_positions[k])]);
  }
  return sub;
}

FeasibilityResult FeasibilityResult::feasible(VectorXd witness) {
  FeasibilityResult r;
  r.feasible_ = true;
  r.witness_ = std::move(witness);
  return r;
}

FeasibilityResult FeasibilityResult::infeasible(VectorXd certificate) {
  FeasibilityResult r;
  r.feasible_ = false;
  r.certificate_ = std::move(certificate);
  return r;
}

FeasibilityResult check_feasible(const IneqSystem& sys, LinfeasStats* stats) {
  require_finite(sys);
  const Eigen::Index r = sys.rows();
  const Eigen::Index c = sys.cols();
  if (r == 0) return FeasibilityResult::feasible(VectorXd::Zero(c));

  // Primal: M (x+ - x-) + s = rhs with x+, x-, s >= 0.
  const double scale = 1.0 + sys.rhs.cwiseAbs().maxCoeff();
  MatrixXd primal(r, 2 * c + r);
  primal << sys.M, -sys.M, MatrixXd::Identity(r, r);
  VectorXd y;
  const double residual = standard_form_residual(primal, sys.rhs, y, stats);
  const VectorXd x = y.head(c) - y.segment(c, c);
  if (residual <= kFeasibilityTol * scale) return FeasibilityResult::feasible(x);

  // Normalized Farkas alternative: min rhs'y  s.t.  M'y = 0, 1'y = 1, y >= 0.
  MatrixXd dual(c + 1, r);
  dual << sys.M.transpose(), Eigen::RowVectorXd::Ones(r);
  VectorXd target = VectorXd::Zero(c + 1);
  target(c) = 1.0;
  const LpSolution cert = standard_form_minimize(dual, target, sys.rhs, stats);
  if (cert.status == LpStatus::Optimal && cert.objective < -kFeasibilityTol * 1e-3 * scale) {
    return FeasibilityResult::infeasible(cert.x);
  }
  if (cert.status == LpStatus::Unbounded) {
    throw Error(Errc::NumericalBreakdown, "Farkas LP reported an unbounded objective");
  }
  // No separating certificate: the violation is below numerical resolution.
  return FeasibilityResult::feasible(x);
}

std::vector<int> extract_iis(const IneqSystem& sys, LinfeasStats* stats) {
  if (check_feasible(sys, stats).is_feasible()) {
    throw Error(Errc::NotInfeasible, "extract_iis requires an infeasible system");
  }
  std::vector<int> kept(static_cast<std::size_t>(sys.rows()));
  std::iota(kept.begin(), kept.end(), 0);
  // Deletion filter: a row stays only if dropping it restores feasibility.
  for (std::size_t pos = 0; pos < kept.size();) {
    std::vector<int> trial = kept;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(pos));
    if (!check_feasible(sys.subsystem(trial), stats).is_feasible()) {
      kept = std::move(trial);
    } else {
      ++pos;
    }
  }
  std::vector<int> labels;
  labels.reserve(kept.size());
  for (int row : kept) labels.push_back(sys.labels[static_cast<std::size_t>(row)]);
  return labels;
}

ChebyshevBall chebyshev_center(const IneqSystem& sys, LinfeasStats* stats) {
  require_finite(sys);
  const Eigen::Index r = sys.rows();
  const Eigen::Index c = sys.cols();
  const VectorXd norms = sys.M.rowwise().norm();
  if (r > 0 && norms.minCoeff() <= 0.0) {
    throw Error(Errc::InvalidArgument, "chebyshev_center requires nonzero rows");
  }
  ChebyshevBall ball;
  if (r == 0) {
    ball.center = VectorXd::Zero(c);
    ball.radius = std::numeric_limits<double>::infinity();
    return ball;
  }
  // Variables: x+, x-, radius+, radius-, slack.
  MatrixXd A(r, 2 * c + 2 + r);
  A << sys.M, -sys.M, norms, -norms, MatrixXd::Identity(r, r);
  VectorXd cost = VectorXd::Zero(A.cols());
  cost(2 * c) = -1.0;
  cost(2 * c + 1) = 1.0;
  const LpSolution sol = standard_form_minimize(A, sys.rhs, cost, stats);
  if (sol.status == LpStatus::Infeasible) {
    throw Error(Errc::NumericalBreakdown, "Chebyshev LP lost feasibility");
  }
  ball.center = sol.x.head(c) - sol.x.segment(c, c);
  ball.radius = sol.status == LpStatus::Unbounded ? std::numeric_limits<double>::infinity()
                                                  : sol.x(2 * c) - sol.x(2 * c + 1);
  return ball;
}

}  // namespace arenkit
