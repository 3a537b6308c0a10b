// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include "arenkit/condense.hpp"
#include "arenkit/linfeas.hpp"
#include "arenkit/oracle.hpp"
#include "arenkit/pipeline.hpp"
#include "arenkit/relu_lattice.hpp"
#include "arenkit/sat.hpp"
#include "arenkit/uo_count.hpp"
#include "oracles.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace arenkit;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void run(const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (seconds >= limit_seconds) {
    outcome.pass = false;
    outcome.detail += "; over the time limit";
  }
  if (!outcome.pass) ++failures;
  std::printf("[%s] %-28s %8.3fs (limit %gs)  %s\n", outcome.pass ? "PASS" : "FAIL", name.c_str(), seconds,
              limit_seconds, outcome.detail.c_str());
  std::fflush(stdout);
}

Outcome formulas() {
  std::mt19937_64 rng(1);
  int cases = 0;
  for (int m = 1; m <= 3; ++m) {
    for (int l = 1; l <= 3; ++l) {
      for (int horizon = 2; horizon <= 6; ++horizon) {
        const int omega = m * (horizon + 1);
        const int rho = 2 * l * horizon + 2 * m * (horizon + 1);
        const CondensedQp qp = condense(oracles::random_spec(rng, 2, m, l, horizon));
        if (decision_count(m, horizon) != omega || constraint_count(m, l, horizon) != rho || qp.omega != omega ||
            qp.rho != rho || qp.H.rows() != omega || qp.G.rows() != rho || qp.G.cols() != omega) {
          return {false, "mismatch at m=" + std::to_string(m) + " l=" + std::to_string(l) +
                             " Nc=" + std::to_string(horizon)};
        }
        ++cases;
      }
    }
  }
  return {true, std::to_string(cases) + " (m, l, Nc) combinations"};
}

Outcome hyperplane_bound() {
  bool ok = region_bound(3, 2) == 7 && region_bound(3, 1) == 4;
  for (int big_n = 0; big_n <= 12; ++big_n) {
    for (int dim = std::max(1, big_n); dim <= big_n + 3; ++dim) ok = ok && region_bound(big_n, dim) == (BigInt(1) << big_n);
  }
  std::ostringstream os;
  os << "region_bound(3,2)=" << region_bound(3, 2) << ", region_bound(3,1)=" << region_bound(3, 1)
     << ", 2^N for n>=N up to N=12";
  return {ok, os.str()};
}

Outcome max_min_exactness() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> value(-100.0, 100.0);
  double worst = 0.0;
  for (int big_n : {2, 3, 5, 8}) {
    const WeightedNet mx = maxN_weights(big_n);
    const WeightedNet mn = minN_weights(big_n);
    for (int trial = 0; trial < 10'000; ++trial) {
      VectorXd x(big_n);
      for (int i = 0; i < big_n; ++i) x(i) = value(rng);
      worst = std::max(worst, std::abs(forward(mx, x)(0) - x.maxCoeff()));
      worst = std::max(worst, std::abs(forward(mn, x)(0) - x.minCoeff()));
    }
  }
  const bool stages = pairwise_stage_units(5) == std::vector<BigInt>{3, 2, 1};
  std::ostringstream os;
  os << "max error " << worst << " over N in {2,3,5,8}; N=5 stages (3,2,1) " << (stages ? "ok" : "wrong");
  return {worst <= 1e-9 && stages, os.str()};
}

Outcome lattice_fidelity() {
  std::vector<oracles::SyntheticCpwl> functions = {oracles::example_abs()};
  for (auto& fn : oracles::synthetic_suite()) functions.push_back(std::move(fn));
  double worst = 0.0;
  std::size_t points = 0;
  for (const auto& fn : functions) {
    const LatticeExtraction lattice = extract_lattice(fn.pwa);
    const WeightedNet net = assemble_lattice_net(lattice.channels.front());
    for (const auto& x : oracles::grid(fn.pwa.box, fn.pwa.n == 1 ? 10'000 : 100)) {
      worst = std::max(worst, std::abs(forward(net, x)(0) - fn.exact(x)));
      ++points;
    }
  }
  std::ostringstream os;
  os << functions.size() << " functions, " << points << " grid points, max error " << worst;
  return {worst <= 1e-9, os.str()};
}

Outcome soundness() {
  std::ostringstream os;
  bool ok = true;
  for (const auto& name : oracles::suite()) {
    const SpecFile spec = load_spec(oracles::spec_path(name));
    const ArchOutcome arch = run_arch(spec);
    const DomainBox box = spec.domain_box ? *spec.domain_box : default_domain_box(arch.qp);
    const PwaFunction pwa = enumerate_explicit(arch.qp, box);
    const std::size_t exact = exact_maximal_region_count(pwa);
    const BigInt& n_est = arch.region.n_est;
    const BigInt two_pow_rho = BigInt(1) << arch.qp.rho;
    const bool here = arch.qp.rho <= 12 && BigInt(exact) <= n_est && n_est <= two_pow_rho;
    ok = ok && here;
    os << name << ": " << exact << " <= " << n_est << " <= " << two_pow_rho << (here ? "" : " VIOLATED") << "; ";
  }
  return {ok, os.str()};
}

Outcome end_to_end() {
  std::ostringstream os;
  bool ok = true;
  for (const auto& name : oracles::suite()) {
    VerifyOptions options;
    options.samples = 10'000;
    options.seed = 42;
    const VerifyReport report = run_verify(load_spec(oracles::spec_path(name)), options);
    ok = ok && report.all_pass() && report.samples == 10'000 && report.max_lattice_error <= 1e-8 &&
         report.max_embedding_error <= 1e-8;
    os << name << ": lattice " << report.max_lattice_error << ", embed " << report.max_embedding_error
       << (report.all_pass() ? "" : " FAILED") << "; ";
    for (const auto& check : report.checks) {
      if (!check.pass) os << "[" << check.name << ": " << check.detail << "] ";
    }
  }
  return {ok, os.str()};
}

Outcome state_independence() {
  const SweepDescriptor sweep = parse_sweep(read_text(oracles::data_dir() / "sweeps" / "states_rho10.json"));
  const std::vector<BenchRow> rows = run_bench(sweep, 1);
  bool ok = rows.size() == 99;
  for (const auto& row : rows) ok = ok && row.status == "ok" && row.rho == 10 && row.n_est == rows.front().n_est;
  std::ostringstream os;
  if (!rows.empty()) {
    const double ratio = rows.front().two_pow_rho.convert_to<double>() / rows.front().n_est.convert_to<double>();
    os << rows.size() << " rows n=" << rows.front().n << ".." << rows.back().n << ", n_est=" << rows.front().n_est
       << " in every row, 2^rho=" << rows.front().two_pow_rho << ", 2^rho/n_est=" << ratio;
  }
  return {ok, os.str()};
}

Outcome sat_lp_oracles() {
  std::mt19937_64 rng(2024);
  int sat_ok = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int universe = 1 + trial % 12;
    const auto constraints = oracles::random_constraints(rng, universe);
    const auto brute = oracles::brute_force_max_true(universe, constraints);
    const auto got = maximize_true(universe, constraints);
    const bool agree = got.has_value() == brute.satisfiable &&
                       (!got || static_cast<int>(got->true_vars.size()) == brute.cardinality);
    sat_ok += agree ? 1 : 0;
  }
  int iis_ok = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const IneqSystem sys = oracles::random_infeasible(rng, 3 + trial % 8, 1 + trial % 4);
    iis_ok += oracles::is_irreducible(sys, extract_iis(sys)) ? 1 : 0;
  }
  std::ostringstream os;
  os << "maximize_true " << sat_ok << "/50, extract_iis irreducible " << iis_ok << "/50";
  return {sat_ok == 50 && iis_ok == 50, os.str()};
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::err);
  run("formula checks", 1.0, formulas);
  run("hyperplane bound", 1.0, hyperplane_bound);
  run("max/min network exactness", 10.0, max_min_exactness);
  run("lattice fidelity", 10.0, lattice_fidelity);
  run("soundness", 600.0, soundness);
  run("end-to-end witness", 600.0, end_to_end);
  run("state-count independence", 600.0, state_independence);
  run("SAT/LP unit oracles", 60.0, sat_lp_oracles);
  std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
