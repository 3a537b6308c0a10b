#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of these call into the code paths they are used to check.

#include "arenkit/condense.hpp"
#include "arenkit/linfeas.hpp"
#include "arenkit/oracle.hpp"
#include "arenkit/relu_lattice.hpp"
#include "arenkit/sat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace oracles {

using arenkit::MatrixXd;
using arenkit::VectorXd;

inline std::filesystem::path data_dir() { return ARENKIT_DATA_DIR; }
inline std::filesystem::path spec_path(const std::string& name) { return data_dir() / "specs" / (name + ".json"); }

/// Fixture specs with m = l = 1 and Nc = 2 (rho = 10).
inline const std::vector<std::string>& suite() {
  static const std::vector<std::string> names = {"double_integrator", "scalar", "random_stable_n3",
                                                 "oscillator", "scalar_tight_input"};
  return names;
}

// ---------------------------------------------------------------------------
// MPC by simulation

/// Cost by rolling the dynamics forward: terminal P at step Nc+1, Q and R before.
inline double rollout_cost(const arenkit::MpcSpec& spec, const VectorXd& x0, const VectorXd& U) {
  const int m = spec.m();
  VectorXd x = x0;
  double cost = 0.0;
  for (int k = 0; k <= spec.horizon; ++k) {
    const VectorXd u = U.segment(k * m, m);
    cost += x.dot(spec.Q * x) + u.dot(spec.R * u);
    x = spec.A * x + spec.B * u;
  }
  return cost + x.dot(spec.P * x);
}

/// Signed margins of every output/input bound along the simulated trajectory
/// (negative means violated).
inline std::vector<double> rollout_margins(const arenkit::MpcSpec& spec, const VectorXd& x0, const VectorXd& U) {
  const int m = spec.m();
  std::vector<double> margins;
  VectorXd x = x0;
  for (int k = 0; k <= spec.horizon; ++k) {
    const VectorXd u = U.segment(k * m, m);
    if (k >= 1) {
      const VectorXd y = spec.C * x;
      for (int i = 0; i < y.size(); ++i) {
        margins.push_back(spec.y_max(i) - y(i));
        margins.push_back(y(i) - spec.y_min(i));
      }
    }
    for (int i = 0; i < m; ++i) {
      margins.push_back(spec.u_max(i) - u(i));
      margins.push_back(u(i) - spec.u_min(i));
    }
    x = spec.A * x + spec.B * u;
  }
  return margins;
}

inline MatrixXd random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> gauss;
  MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) M(i, j) = gauss(rng);
  }
  return M;
}

/// A valid random spec of the requested dimensions.
inline arenkit::MpcSpec random_spec(std::mt19937_64& rng, int n, int m, int l, int horizon) {
  arenkit::MpcSpec spec;
  spec.A = 0.5 * random_matrix(rng, n, n) / std::sqrt(static_cast<double>(n));
  spec.B = random_matrix(rng, n, m);
  spec.C = random_matrix(rng, l, n);
  const MatrixXd q = random_matrix(rng, n, n);
  spec.Q = q * q.transpose() / n;
  spec.P = spec.Q + MatrixXd::Identity(n, n);
  const MatrixXd r = random_matrix(rng, m, m);
  spec.R = r * r.transpose() + MatrixXd::Identity(m, m);
  spec.K = MatrixXd::Zero(m, n);
  spec.horizon = horizon;
  spec.y_min = VectorXd::Constant(l, -2.0);
  spec.y_max = VectorXd::Constant(l, 3.0);
  spec.u_min = VectorXd::Constant(m, -1.0);
  spec.u_max = VectorXd::Constant(m, 0.5);
  return spec;
}

// ---------------------------------------------------------------------------
// Boolean constraints by exhaustive enumeration

inline bool holds(const arenkit::BoolConstraint& constraint, const std::vector<bool>& value) {
  auto truth = [&](int lit) { return value[static_cast<std::size_t>(std::abs(lit))] == (lit > 0); };
  if (const auto* c = std::get_if<arenkit::Clause>(&constraint)) {
    return std::any_of(c->literals.begin(), c->literals.end(), truth);
  }
  if (const auto* a = std::get_if<arenkit::AtLeastOneOf>(&constraint)) {
    return std::any_of(a->vars.begin(), a->vars.end(), truth);
  }
  const auto& block = std::get<arenkit::ImplicationBlock>(constraint);
  const bool all_inside = std::all_of(block.inside.begin(), block.inside.end(), truth);
  for (std::size_t v = 1; v < value.size(); ++v) {
    const bool inside = std::find(block.inside.begin(), block.inside.end(), static_cast<int>(v)) != block.inside.end();
    if (!inside && value[v]) return true;
  }
  return all_inside;
}

struct BruteMax {
  bool satisfiable = false;
  int cardinality = -1;
  std::vector<int> smallest;  // lexicographically smallest optimum (sorted vars)
};

inline BruteMax brute_force_max_true(int universe, const std::vector<arenkit::BoolConstraint>& constraints) {
  BruteMax best;
  for (std::uint32_t mask = 0; mask < (1U << universe); ++mask) {
    std::vector<bool> value(static_cast<std::size_t>(universe) + 1, false);
    std::vector<int> vars;
    for (int v = 1; v <= universe; ++v) {
      if ((mask >> (v - 1)) & 1U) {
        value[static_cast<std::size_t>(v)] = true;
        vars.push_back(v);
      }
    }
    if (!std::all_of(constraints.begin(), constraints.end(), [&](const auto& c) { return holds(c, value); })) {
      continue;
    }
    best.satisfiable = true;
    const int card = static_cast<int>(vars.size());
    if (card > best.cardinality || (card == best.cardinality && vars < best.smallest)) {
      best.cardinality = card;
      best.smallest = vars;
    }
  }
  return best;
}

inline std::vector<arenkit::BoolConstraint> random_constraints(std::mt19937_64& rng, int universe) {
  std::uniform_int_distribution<int> count(0, 10);
  std::uniform_int_distribution<int> kind(0, 5);
  std::uniform_int_distribution<int> var(1, universe);
  std::uniform_int_distribution<int> width(1, std::min(4, universe));
  std::bernoulli_distribution negative(0.6);
  std::vector<arenkit::BoolConstraint> out;
  const int total = count(rng);
  for (int k = 0; k < total; ++k) {
    std::vector<int> vars;
    const int w = width(rng);
    while (static_cast<int>(vars.size()) < w) {
      const int v = var(rng);
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    }
    const int type = kind(rng);
    if (type <= 3) {
      arenkit::Clause c;
      for (int v : vars) c.literals.push_back(negative(rng) ? -v : v);
      out.emplace_back(std::move(c));
    } else if (type == 4) {
      out.emplace_back(arenkit::AtLeastOneOf{vars});
    } else {
      out.emplace_back(arenkit::ImplicationBlock{vars});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Linear feasibility verdicts checked from first principles

/// M x <= rhs up to `tol` (absolute, scaled by 1 + |rhs|).
inline bool is_witness(const arenkit::IneqSystem& sys, const VectorXd& x, double tol = 1e-7) {
  if (x.size() != sys.cols()) return false;
  const VectorXd slack = sys.rhs - sys.M * x;
  for (Eigen::Index i = 0; i < slack.size(); ++i) {
    if (slack(i) < -tol * (1.0 + std::abs(sys.rhs(i)))) return false;
  }
  return true;
}

/// y >= 0, y'M = 0, y'rhs < 0 (Farkas).
inline bool is_certificate(const arenkit::IneqSystem& sys, const VectorXd& y, double tol = 1e-7) {
  if (y.size() != sys.rows() || (y.array() < -tol).any()) return false;
  const double scale = 1.0 + y.cwiseAbs().maxCoeff() * (1.0 + sys.M.cwiseAbs().maxCoeff());
  if ((sys.M.transpose() * y).cwiseAbs().maxCoeff() > tol * scale) return false;
  return y.dot(sys.rhs) < -tol * 1e-3;
}

/// Verdict that is accepted only with a checkable witness or certificate.
inline int verified_verdict(const arenkit::IneqSystem& sys) {
  const auto result = arenkit::check_feasible(sys);
  if (result.is_feasible()) return is_witness(sys, result.witness()) ? 1 : -1;
  return is_certificate(sys, result.certificate()) ? 0 : -1;
}

/// Random infeasible system: a feasible core plus a row contradicting a
/// nonnegative combination of core rows.
inline arenkit::IneqSystem random_infeasible(std::mt19937_64& rng, int rows, int cols) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MatrixXd M = random_matrix(rng, rows, cols);
  const VectorXd x0 = random_matrix(rng, cols, 1);
  VectorXd rhs = M * x0;
  for (int i = 0; i < rows; ++i) rhs(i) += unit(rng);
  VectorXd weights = VectorXd::Zero(rows);
  std::uniform_int_distribution<int> pick(0, rows - 1);
  const int used = 1 + pick(rng) % std::min(rows, cols + 1);
  for (int k = 0; k < used; ++k) weights(pick(rng)) = 0.5 + unit(rng);
  MatrixXd full(rows + 1, cols);
  VectorXd full_rhs(rows + 1);
  full << M, -(weights.transpose() * M);
  full_rhs << rhs, -weights.dot(rhs) - 0.5 - unit(rng);
  // Shuffle so the contradicting row is not always last.
  std::vector<int> order(static_cast<std::size_t>(rows + 1));
  for (int i = 0; i <= rows; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  arenkit::IneqSystem sys;
  sys.M.resize(rows + 1, cols);
  sys.rhs.resize(rows + 1);
  for (int i = 0; i <= rows; ++i) {
    sys.M.row(i) = full.row(order[static_cast<std::size_t>(i)]);
    sys.rhs(i) = full_rhs(order[static_cast<std::size_t>(i)]);
    sys.labels.push_back(100 + order[static_cast<std::size_t>(i)]);
  }
  return sys;
}

/// Infeasible, and every single-row deletion is feasible (both verified).
inline bool is_irreducible(const arenkit::IneqSystem& sys, const std::vector<int>& labels) {
  std::vector<int> rows;
  for (int label : labels) {
    const auto it = std::find(sys.labels.begin(), sys.labels.end(), label);
    if (it == sys.labels.end()) return false;
    rows.push_back(static_cast<int>(it - sys.labels.begin()));
  }
  if (verified_verdict(sys.subsystem(rows)) != 0) return false;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::vector<int> without = rows;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(k));
    if (verified_verdict(sys.subsystem(without)) != 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Set families

/// |union of the power sets|, by testing every subset of {0..rho-1}.
inline std::uint64_t brute_force_union(const std::vector<std::vector<int>>& sets, int rho) {
  std::vector<std::uint32_t> masks;
  for (const auto& s : sets) {
    std::uint32_t mask = 0;
    for (int i : s) mask |= 1U << i;
    masks.push_back(mask);
  }
  if (masks.empty()) return 1;
  std::uint64_t count = 0;
  for (std::uint32_t sub = 0; sub < (1U << rho); ++sub) {
    if (std::any_of(masks.begin(), masks.end(), [&](std::uint32_t m) { return (sub & ~m) == 0; })) ++count;
  }
  return count;
}

/// sum_{i=0}^{d} C(h, i) in floating point (exact below 2^53).
inline double binomial_sum(double h, int d) {
  double total = 0.0;
  for (int i = 0; i <= d; ++i) {
    double c = 1.0;
    for (int k = 0; k < i; ++k) c = c * (h - k) / (k + 1);
    if (h - i + 1 <= 0 && i > 0) c = 0.0;
    total += c;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Synthetic CPWL functions given as explicit pieces plus a closed form

struct SyntheticCpwl {
  std::string name;
  arenkit::PwaFunction pwa;
  std::function<double(const VectorXd&)> exact;
};

inline arenkit::CriticalRegion piece(const MatrixXd& M, const VectorXd& rhs, const Eigen::RowVectorXd& gain,
                                     double offset, const arenkit::DomainBox& box) {
  arenkit::CriticalRegion p;
  p.region = arenkit::IneqSystem(M, rhs);
  p.control_gain = gain;
  p.control_offset = VectorXd::Constant(1, offset);
  arenkit::measure_region(p, box);
  return p;
}

inline arenkit::PwaFunction make_pwa(const arenkit::DomainBox& box, std::vector<arenkit::CriticalRegion> pieces) {
  arenkit::PwaFunction pwa;
  pwa.box = box;
  pwa.n = box.dim();
  pwa.m = 1;
  pwa.pieces = std::move(pieces);
  return pwa;
}

inline MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  MatrixXd M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) M(i, j++) = v;
    ++i;
  }
  return M;
}

inline VectorXd vec(std::initializer_list<double> values) {
  VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

inline Eigen::RowVectorXd row(std::initializer_list<double> values) { return vec(values).transpose(); }

/// f(x) = 2x + 3 for x > 0 and -2x + 3 otherwise, listed in that order.
inline SyntheticCpwl example_abs() {
  const arenkit::DomainBox box{vec({-5.0}), vec({5.0})};
  return {"two-piece example",
          make_pwa(box, {piece(mat({{-1.0}}), vec({0.0}), row({2.0}), 3.0, box),
                         piece(mat({{1.0}}), vec({0.0}), row({-2.0}), 3.0, box)}),
          [](const VectorXd& x) { return x(0) > 0 ? 2.0 * x(0) + 3.0 : -2.0 * x(0) + 3.0; }};
}

/// Dead zone: -x-1 below -1, 0 on [-1, 1], x-1 above.
inline SyntheticCpwl dead_zone() {
  const arenkit::DomainBox box{vec({-4.0}), vec({4.0})};
  return {"dead zone",
          make_pwa(box, {piece(mat({{1.0}}), vec({-1.0}), row({-1.0}), -1.0, box),
                         piece(mat({{-1.0}, {1.0}}), vec({1.0, 1.0}), row({0.0}), 0.0, box),
                         piece(mat({{-1.0}}), vec({-1.0}), row({1.0}), -1.0, box)}),
          [](const VectorXd& x) { return std::max({-x(0) - 1.0, 0.0, x(0) - 1.0}); }};
}

/// Zigzag (neither convex nor concave): 2x below 0, -x on [0, 1], x - 2 above.
inline SyntheticCpwl zigzag() {
  const arenkit::DomainBox box{vec({-3.0}), vec({4.0})};
  return {"zigzag",
          make_pwa(box, {piece(mat({{1.0}}), vec({0.0}), row({2.0}), 0.0, box),
                         piece(mat({{-1.0}, {1.0}}), vec({0.0, 1.0}), row({-1.0}), 0.0, box),
                         piece(mat({{-1.0}}), vec({-1.0}), row({1.0}), -2.0, box)}),
          [](const VectorXd& x) {
            if (x(0) <= 0) return 2.0 * x(0);
            if (x(0) <= 1) return -x(0);
            return x(0) - 2.0;
          }};
}

/// Pyramid on the plane: 1 - max(|x1|, |x2|), four triangular pieces.
inline SyntheticCpwl pyramid() {
  const arenkit::DomainBox box{vec({-2.0, -2.0}), vec({2.0, 2.0})};
  // Piece where x1 dominates positively: x1 >= |x2|.
  return {"pyramid",
          make_pwa(box, {piece(mat({{-1.0, 1.0}, {-1.0, -1.0}}), vec({0.0, 0.0}), row({-1.0, 0.0}), 1.0, box),
                         piece(mat({{1.0, 1.0}, {1.0, -1.0}}), vec({0.0, 0.0}), row({1.0, 0.0}), 1.0, box),
                         piece(mat({{1.0, -1.0}, {-1.0, -1.0}}), vec({0.0, 0.0}), row({0.0, -1.0}), 1.0, box),
                         piece(mat({{1.0, 1.0}, {-1.0, 1.0}}), vec({0.0, 0.0}), row({0.0, 1.0}), 1.0, box)}),
          [](const VectorXd& x) { return 1.0 - std::max(std::abs(x(0)), std::abs(x(1))); }};
}

inline std::vector<SyntheticCpwl> synthetic_suite() { return {dead_zone(), zigzag(), pyramid()}; }

/// Regular grid with `per_axis` points per axis (1-D and 2-D boxes).
inline std::vector<VectorXd> grid(const arenkit::DomainBox& box, int per_axis) {
  std::vector<VectorXd> out;
  const int n = box.dim();
  if (n == 1) {
    for (int i = 0; i < per_axis; ++i) {
      out.push_back(vec({box.lower(0) + (box.upper(0) - box.lower(0)) * i / (per_axis - 1.0)}));
    }
    return out;
  }
  for (int i = 0; i < per_axis; ++i) {
    for (int j = 0; j < per_axis; ++j) {
      out.push_back(vec({box.lower(0) + (box.upper(0) - box.lower(0)) * i / (per_axis - 1.0),
                         box.lower(1) + (box.upper(1) - box.lower(1)) * j / (per_axis - 1.0)}));
    }
  }
  return out;
}

}  // namespace oracles
