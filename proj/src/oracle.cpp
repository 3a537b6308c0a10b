#include "arenkit/oracle.hpp"

#include "arenkit/error.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace arenkit {

namespace {

constexpr double kContainTol = 1e-8;
constexpr double kZeroRow = 1e-12;

// Drops rows with a vanishing normal. Returns false if one of them reads 0 <= negative.
bool drop_zero_rows(IneqSystem& sys) {
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < sys.rows(); ++i) {
    const double scale = 1.0 + std::abs(sys.rhs(i));
    if (sys.M.row(i).norm() > kZeroRow * scale) {
      keep.push_back(static_cast<int>(i));
    } else if (sys.rhs(i) < -kContainTol * scale) {
      return false;
    }
  }
  if (static_cast<Eigen::Index>(keep.size()) != sys.rows()) sys = sys.subsystem(keep);
  return true;
}

IneqSystem stack(const IneqSystem& a, const IneqSystem& b) {
  MatrixXd M(a.rows() + b.rows(), std::max(a.cols(), b.cols()));
  VectorXd rhs(a.rows() + b.rows());
  if (a.rows() > 0) M.topRows(a.rows()) = a.M;
  if (b.rows() > 0) M.bottomRows(b.rows()) = b.M;
  rhs << a.rhs, b.rhs;
  return IneqSystem(std::move(M), std::move(rhs));
}

bool in_region(const IneqSystem& sys, const VectorXd& x) {
  for (Eigen::Index i = 0; i < sys.rows(); ++i) {
    const double lhs = sys.M.row(i).dot(x);
    const double scale = 1.0 + std::abs(sys.rhs(i)) + sys.M.row(i).cwiseAbs().dot(x.cwiseAbs());
    if (lhs > sys.rhs(i) + kContainTol * scale) return false;
  }
  return true;
}

MatrixXd inverse_of(const MatrixXd& H) {
  Eigen::LLT<MatrixXd> llt(H);
  if (llt.info() != Eigen::Success) throw Error(Errc::NonPositiveDefinite, "H is not positive definite");
  return llt.solve(MatrixXd::Identity(H.rows(), H.cols()));
}

// Reduced KKT matrix G_a H^-1 G_a' is invertible iff the active rows are independent.
std::optional<Eigen::LDLT<MatrixXd>> reduced_kkt(const MatrixXd& Ga, const MatrixXd& Hinv) {
  const MatrixXd M = Ga * Hinv * Ga.transpose();
  if (M.rows() == 0) return Eigen::LDLT<MatrixXd>(M);
  Eigen::LDLT<MatrixXd> ldlt(M);
  if (ldlt.info() != Eigen::Success) return std::nullopt;
  const VectorXd d = ldlt.vectorD();
  const double scale = std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
  if (d.minCoeff() <= 1e-10 * scale) return std::nullopt;
  return ldlt;
}

MatrixXd rows_of(const MatrixXd& A, const std::vector<int>& rows) {
  MatrixXd out(static_cast<Eigen::Index>(rows.size()), A.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = A.row(rows[k]);
  return out;
}

VectorXd entries_of(const VectorXd& v, const std::vector<int>& rows) {
  VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) out(static_cast<Eigen::Index>(k)) = v(rows[k]);
  return out;
}

bool same_law(const Eigen::RowVectorXd& g1, double o1, const Eigen::RowVectorXd& g2, double o2,
              double tol) {
  const double scale = 1.0 + std::max(g1.cwiseAbs().maxCoeff(), std::abs(o1));
  return (g1 - g2).cwiseAbs().maxCoeff() <= tol * scale && std::abs(o1 - o2) <= tol * scale;
}

double lattice_value(const std::vector<AffineMap>& fns, const std::set<std::vector<int>>& subsets,
                     const VectorXd& x) {
  std::vector<double> values;
  values.reserve(fns.size());
  for (const auto& f : fns) values.push_back(f(x));
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& s : subsets) {
    double low = std::numeric_limits<double>::infinity();
    for (int j : s) low = std::min(low, values[static_cast<std::size_t>(j)]);
    best = std::max(best, low);
  }
  return best;
}

struct Channel {
  std::vector<AffineMap> functions;
  std::vector<int> law_of_piece;  // -1 for lower-dimensional pieces
};

Channel distinct_laws(const PwaFunction& pwa, int c) {
  Channel ch;
  for (const auto& piece : pwa.pieces) {
    if (!piece.full_dim) {
      ch.law_of_piece.push_back(-1);
      continue;
    }
    const Eigen::RowVectorXd gain = piece.control_gain.row(c);
    const double offset = piece.control_offset(c);
    int found = -1;
    for (std::size_t j = 0; j < ch.functions.size(); ++j) {
      if (same_law(ch.functions[j].gain, ch.functions[j].offset, gain, offset, 1e-8)) {
        found = static_cast<int>(j);
        break;
      }
    }
    if (found < 0) {
      found = static_cast<int>(ch.functions.size());
      ch.functions.push_back({gain, offset});
    }
    ch.law_of_piece.push_back(found);
  }
  return ch;
}

LatticeExtraction extract_impl(const PwaFunction& pwa, const CondensedQp* qp,
                               const LatticeOptions& options) {
  if (pwa.n < 1 || pwa.m < 1) throw Error(Errc::InvalidArgument, "pwa has no dimensions");
  std::vector<std::size_t> full;
  for (std::size_t p = 0; p < pwa.pieces.size(); ++p) {
    if (pwa.pieces[p].full_dim) full.push_back(p);
  }
  if (full.empty()) throw Error(Errc::CoverageGap, "pwa has no full-dimensional piece");

  // Interior samples: each Chebyshev center plus points in its inscribed ball.
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit;
  std::vector<std::pair<std::size_t, VectorXd>> samples;
  for (std::size_t p : full) {
    const auto& piece = pwa.pieces[p];
    samples.emplace_back(p, piece.center);
    const double r = std::isfinite(piece.radius) ? 0.9 * piece.radius : 1.0;
    for (int k = 0; k < options.samples_per_piece; ++k) {
      VectorXd dir(pwa.n);
      for (int i = 0; i < pwa.n; ++i) dir(i) = gauss(rng);
      const double len = dir.norm();
      if (len == 0.0) continue;
      const double scale = r * std::pow(unit(rng), 1.0 / pwa.n) / len;
      samples.emplace_back(p, piece.center + scale * dir);
    }
  }

  std::vector<VectorXd> grid = options.verification_points;
  if (grid.empty()) grid = box_grid(pwa.box, options.grid_points);
  std::vector<std::pair<const CriticalRegion*, const VectorXd*>> covered;
  for (const auto& x : grid) {
    const CriticalRegion* piece = pwa.locate(x);
    if (piece != nullptr) {
      covered.emplace_back(piece, &x);
    } else if (qp == nullptr || qp_feasible(*qp, x)) {
      throw Error(Errc::CoverageGap, "verification point lies in no full-dimensional piece");
    }
  }

  LatticeExtraction out;
  for (int c = 0; c < pwa.m; ++c) {
    const Channel ch = distinct_laws(pwa, c);
    const auto piece_index = [&](const CriticalRegion* piece) {
      return static_cast<std::size_t>(piece - pwa.pieces.data());
    };
    auto value_at = [&](std::size_t p, const VectorXd& x) {
      return ch.functions[static_cast<std::size_t>(ch.law_of_piece[p])](x);
    };
    auto upper_set = [&](const VectorXd& x, double f) {
      std::vector<int> s;
      const double tol = options.tie_tolerance * (1.0 + std::abs(f));
      for (std::size_t j = 0; j < ch.functions.size(); ++j) {
        if (ch.functions[j](x) >= f - tol) s.push_back(static_cast<int>(j));
      }
      return s;
    };

    std::set<std::vector<int>> subsets;
    std::set<std::vector<int>> orderings;
    for (const auto& [p, x] : samples) {
      const double f = value_at(p, x);
      subsets.insert(upper_set(x, f));

      std::vector<std::pair<double, int>> ranked;
      for (std::size_t j = 0; j < ch.functions.size(); ++j) {
        ranked.emplace_back(ch.functions[j](x), static_cast<int>(j));
      }
      std::sort(ranked.begin(), ranked.end());
      std::vector<int> key(ch.functions.size(), 0);
      // Only strict orderings name a unique-order region; ties sit on a boundary.
      bool strict = true;
      for (std::size_t k = 0; k < ranked.size(); ++k) {
        if (k > 0 && ranked[k].first - ranked[k - 1].first <=
                         options.tie_tolerance * (1.0 + std::abs(ranked[k].first))) {
          strict = false;
        }
        key[static_cast<std::size_t>(ranked[k].second)] = static_cast<int>(k);
      }
      if (strict) orderings.insert(std::move(key));
    }

    // Every added set is exact at its own point and never exceeds f elsewhere.
    for (int pass = 0; pass < 8; ++pass) {
      bool changed = false;
      for (const auto& [piece, x] : covered) {
        const double f = value_at(piece_index(piece), *x);
        const double got = lattice_value(ch.functions, subsets, *x);
        if (std::abs(got - f) > 10.0 * options.tie_tolerance * (1.0 + std::abs(f))) {
          changed |= subsets.insert(upper_set(*x, f)).second;
        }
      }
      if (!changed) break;
    }

    // A superset contributes a smaller minimum, so it never attains the max.
    std::vector<std::vector<int>> by_size(subsets.begin(), subsets.end());
    std::stable_sort(by_size.begin(), by_size.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    std::vector<std::vector<int>> kept;
    for (const auto& s : by_size) {
      const bool redundant = std::any_of(kept.begin(), kept.end(), [&](const auto& k) {
        return std::includes(s.begin(), s.end(), k.begin(), k.end());
      });
      if (!redundant) kept.push_back(s);
    }
    std::sort(kept.begin(), kept.end());

    out.channels.push_back({ch.functions, std::move(kept)});
    out.orderings.push_back(orderings.size());
  }
  return out;
}

}  // namespace

bool DomainBox::contains(const VectorXd& x, double tol) const {
  if (x.size() != lower.size()) return false;
  return ((x - lower).array() >= -tol).all() && ((upper - x).array() >= -tol).all();
}

IneqSystem DomainBox::as_system() const {
  const auto n = lower.size();
  MatrixXd M(2 * n, n);
  M << MatrixXd::Identity(n, n), -MatrixXd::Identity(n, n);
  VectorXd rhs(2 * n);
  rhs << upper, -lower;
  return IneqSystem(std::move(M), std::move(rhs));
}

void measure_region(CriticalRegion& piece, const DomainBox& box) {
  IneqSystem sys = stack(piece.region, box.as_system());
  if (!drop_zero_rows(sys)) {
    piece.center = VectorXd::Zero(box.dim());
    piece.radius = -1.0;
    piece.full_dim = false;
    return;
  }
  const ChebyshevBall ball = chebyshev_center(sys);
  piece.center = ball.center;
  piece.radius = ball.radius;
  piece.full_dim = ball.radius > kFullDimRadius;
}

const CriticalRegion* PwaFunction::locate(const VectorXd& x) const {
  if (!box.contains(x, kContainTol * (1.0 + x.cwiseAbs().maxCoeff()))) return nullptr;
  for (const auto& piece : pieces) {
    if (piece.full_dim && in_region(piece.region, x)) return &piece;
  }
  return nullptr;
}

std::optional<VectorXd> PwaFunction::evaluate(const VectorXd& x) const {
  const CriticalRegion* piece = locate(x);
  if (piece == nullptr) return std::nullopt;
  return piece->law(x);
}

PwaFunction enumerate_explicit(const CondensedQp& qp, const DomainBox& box) {
  if (qp.rho > kOracleConstraintLimit) {
    throw Error(Errc::TooManyConstraints, "rho = " + std::to_string(qp.rho) + " exceeds the oracle limit " +
                                              std::to_string(kOracleConstraintLimit));
  }
  if (box.dim() != qp.n) throw Error(Errc::DimensionMismatch, "domain box has wrong dimension");
  const MatrixXd Hinv = inverse_of(qp.H);
  const MatrixXd free_gain = Hinv * qp.F.transpose();  // H^-1 F'

  PwaFunction pwa;
  pwa.box = box;
  pwa.n = qp.n;
  pwa.m = qp.m;
  const std::uint64_t total = std::uint64_t{1} << qp.rho;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::vector<int> active;
    std::vector<int> inactive;
    for (int i = 0; i < qp.rho; ++i) ((mask >> i) & 1U ? active : inactive).push_back(i);
    // More active rows than decision variables cannot be independent.
    if (static_cast<int>(active.size()) > qp.omega) continue;

    const MatrixXd Ga = rows_of(qp.G, active);
    const auto kkt = reduced_kkt(Ga, Hinv);
    if (!kkt) {
      spdlog::debug("oracle: singular reduced KKT system for active set of size {}", active.size());
      pwa.skipped.emplace_back(active);
      continue;
    }
    const VectorXd Wa = entries_of(qp.W, active);
    const MatrixXd Sa = rows_of(qp.S, active);

    // lambda(x) = -Minv (Wa + Sa x);  z(x) = T (Wa + Sa x),  T = H^-1 Ga' Minv.
    MatrixXd lam_gain = MatrixXd::Zero(static_cast<Eigen::Index>(active.size()), qp.n);
    VectorXd lam_offset = VectorXd::Zero(static_cast<Eigen::Index>(active.size()));
    MatrixXd z_gain = MatrixXd::Zero(qp.omega, qp.n);
    VectorXd z_offset = VectorXd::Zero(qp.omega);
    if (!active.empty()) {
      const MatrixXd MinvS = kkt->solve(Sa);
      const VectorXd MinvW = kkt->solve(Wa);
      lam_gain = -MinvS;
      lam_offset = -MinvW;
      const MatrixXd HGa = Hinv * Ga.transpose();
      z_gain = HGa * MinvS;
      z_offset = HGa * MinvW;
    }

    // lambda >= 0:  -lam_gain x <= lam_offset.
    // inactive rows:  (G z_gain - S) x <= W - G z_offset.
    const auto na = static_cast<Eigen::Index>(active.size());
    const auto ni = static_cast<Eigen::Index>(inactive.size());
    MatrixXd M(na + ni, qp.n);
    VectorXd rhs(na + ni);
    if (na > 0) {
      M.topRows(na) = -lam_gain;
      rhs.head(na) = lam_offset;
    }
    if (ni > 0) {
      const MatrixXd Gi = rows_of(qp.G, inactive);
      M.bottomRows(ni) = Gi * z_gain - rows_of(qp.S, inactive);
      rhs.tail(ni) = entries_of(qp.W, inactive) - Gi * z_offset;
    }

    CriticalRegion piece;
    piece.active_set = ActiveSet(active);
    piece.region = IneqSystem(std::move(M), std::move(rhs));
    measure_region(piece, box);
    if (piece.radius < 0.0) continue;
    const MatrixXd u_gain = z_gain - free_gain;
    piece.control_gain = u_gain.topRows(qp.m);
    piece.control_offset = z_offset.head(qp.m);
    drop_zero_rows(piece.region);
    pwa.pieces.push_back(std::move(piece));
  }
  return pwa;
}

std::size_t exact_maximal_region_count(const PwaFunction& pwa, double tolerance) {
  std::vector<const CriticalRegion*> laws;
  for (const auto& piece : pwa.pieces) {
    if (!piece.full_dim) continue;
    const bool seen = std::any_of(laws.begin(), laws.end(), [&](const CriticalRegion* other) {
      for (Eigen::Index c = 0; c < piece.control_gain.rows(); ++c) {
        if (!same_law(piece.control_gain.row(c), piece.control_offset(c), other->control_gain.row(c),
                      other->control_offset(c), tolerance)) {
          return false;
        }
      }
      return true;
    });
    if (!seen) laws.push_back(&piece);
  }
  return laws.size();
}

bool qp_feasible(const CondensedQp& qp, const VectorXd& x) {
  return check_feasible(IneqSystem(qp.G, qp.W + qp.S * x)).is_feasible();
}

VectorXd solve_pointwise(const CondensedQp& qp, const VectorXd& x) {
  if (x.size() != qp.n) throw Error(Errc::DimensionMismatch, "state has wrong dimension");
  if (!qp_feasible(qp, x)) throw Error(Errc::Infeasible, "no input sequence satisfies the constraints");
  const MatrixXd Hinv = inverse_of(qp.H);
  const VectorXd h = qp.W + qp.S * x;
  const MatrixXd P = qp.G * Hinv * qp.G.transpose();

  // Hildreth: coordinate descent on  1/2 l'Pl + l'h,  l >= 0.
  VectorXd lambda = VectorXd::Zero(qp.rho);
  bool converged = false;
  for (int sweep = 0; sweep < 100'000 && !converged; ++sweep) {
    double change = 0.0;
    for (int i = 0; i < qp.rho; ++i) {
      const double next = std::max(0.0, lambda(i) - (P.row(i).dot(lambda) + h(i)) / P(i, i));
      change = std::max(change, std::abs(next - lambda(i)));
      lambda(i) = next;
    }
    converged = change < 1e-10;
  }
  VectorXd z = -Hinv * qp.G.transpose() * lambda;

  // Exact polish on an independent subset of the detected active rows.
  std::vector<int> order;
  for (int i = 0; i < qp.rho; ++i) {
    if (lambda(i) > 1e-12) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) { return lambda(a) > lambda(b); });
  std::vector<int> active;
  for (int i : order) {
    active.push_back(i);
    if (!reduced_kkt(rows_of(qp.G, active), Hinv)) active.pop_back();
  }
  bool polished = false;
  if (const auto kkt = reduced_kkt(rows_of(qp.G, active), Hinv)) {
    VectorXd zp = VectorXd::Zero(qp.omega);
    bool dual_ok = true;
    if (!active.empty()) {
      const VectorXd ha = entries_of(h, active);
      const VectorXd lam = -kkt->solve(ha);
      dual_ok = lam.minCoeff() >= -1e-9 * (1.0 + lam.cwiseAbs().maxCoeff());
      zp = Hinv * rows_of(qp.G, active).transpose() * kkt->solve(ha);
    }
    const VectorXd slack = h - qp.G * zp;
    const bool primal_ok = (slack.array() >= -1e-9 * (1.0 + h.cwiseAbs().array())).all();
    if (dual_ok && primal_ok) {
      z = zp;
      polished = true;
    }
  }
  if (!converged && !polished) throw Error(Errc::NoConvergence, "dual coordinate ascent did not converge");
  const VectorXd U = z - Hinv * qp.F.transpose() * x;
  return U.head(qp.m);
}

DomainBox default_domain_box(const CondensedQp& qp, double cap) {
  const VectorXd origin = VectorXd::Zero(qp.n);
  if (!qp_feasible(qp, origin)) throw Error(Errc::Infeasible, "the origin is not a feasible state");
  DomainBox box{VectorXd::Zero(qp.n), VectorXd::Zero(qp.n)};
  for (int i = 0; i < qp.n; ++i) {
    for (double sign : {1.0, -1.0}) {
      auto feasible_at = [&](double t) {
        VectorXd x = origin;
        x(i) = sign * t;
        return qp_feasible(qp, x);
      };
      double t = cap;
      if (!feasible_at(cap)) {
        double lo = 0.0;
        double hi = cap;
        for (int it = 0; it < 50; ++it) {
          const double mid = 0.5 * (lo + hi);
          (feasible_at(mid) ? lo : hi) = mid;
        }
        t = lo;
      }
      (sign > 0 ? box.upper : box.lower)(i) = sign * t;
    }
  }
  return box;
}

std::vector<VectorXd> box_grid(const DomainBox& box, std::size_t target_points) {
  const int n = box.dim();
  if (n < 1) throw Error(Errc::InvalidArgument, "empty box");
  const auto per_axis = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(target_points), 1.0 / n) - 1e-9)));
  std::vector<VectorXd> points;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    VectorXd x(n);
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(idx[static_cast<std::size_t>(i)]) / static_cast<double>(per_axis - 1);
      x(i) = box.lower(i) + t * (box.upper(i) - box.lower(i));
    }
    points.push_back(std::move(x));
    int axis = 0;
    while (axis < n && ++idx[static_cast<std::size_t>(axis)] == per_axis) {
      idx[static_cast<std::size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == n) break;
  }
  return points;
}

LatticeExtraction extract_lattice(const PwaFunction& pwa, const CondensedQp& qp,
                                  const LatticeOptions& options) {
  return extract_impl(pwa, &qp, options);
}

LatticeExtraction extract_lattice(const PwaFunction& pwa, const LatticeOptions& options) {
  return extract_impl(pwa, nullptr, options);
}

}  // namespace arenkit
