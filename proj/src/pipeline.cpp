#include "arenkit/pipeline.hpp"

#include "arenkit/error.hpp"

#include <spdlog/spdlog.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

namespace arenkit {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) return "inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << num.convert_to<double>() / den.convert_to<double>();
  return os.str();
}

std::vector<VectorXd> feasible_samples(const CondensedQp& qp, const DomainBox& box, std::size_t count,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit;
  std::vector<VectorXd> samples;
  const std::size_t max_attempts = 200 * count + 1000;
  for (std::size_t attempt = 0; attempt < max_attempts && samples.size() < count; ++attempt) {
    VectorXd x(qp.n);
    for (int i = 0; i < qp.n; ++i) x(i) = box.lower(i) + unit(rng) * (box.upper(i) - box.lower(i));
    if (qp_feasible(qp, x)) samples.push_back(std::move(x));
  }
  return samples;
}

std::string sci(double value) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << value;
  return os.str();
}

}  // namespace

int exit_code_for(const Error& error) {
  switch (error.code()) {
    case Errc::Parse:
    case Errc::DimensionMismatch:
    case Errc::InvalidSpec:
    case Errc::NonPositiveDefinite:
    case Errc::InvalidArgument:
      return kExitParse;
    case Errc::TooManyConstraints:
      return kExitUnavailable;
    default:
      return kExitSolver;
  }
}

ArchOutcome run_arch(const SpecFile& spec, const ArchOptions& options) {
  const auto started = Clock::now();
  ArchOutcome outcome;
  outcome.qp = condense(spec.spec);

  RegionCountOptions rc;
  rc.epsilon = options.epsilon.value_or(spec.spec.epsilon);
  rc.budget = options.budget ? options.budget : spec.budget;
  outcome.region = estimate_region_count(outcome.qp, rc);

  const auto uo_started = Clock::now();
  outcome.uo = estimate_unique_order_count(outcome.region.n_est, outcome.qp.n, options.counting);
  const double uo_ms = ms_since(uo_started);

  ArchFile& file = outcome.file;
  file.arch = infer_architecture(outcome.uo.n_local, outcome.uo.m_est, outcome.qp.n, outcome.qp.m);
  ArchMetadata& md = file.metadata;
  md.n = outcome.qp.n;
  md.m = outcome.qp.m;
  md.l = spec.spec.l();
  md.horizon = spec.spec.horizon;
  md.omega = outcome.qp.omega;
  md.rho = outcome.qp.rho;
  md.epsilon = rc.epsilon;
  md.n_est = outcome.region.n_est;
  md.m_est = outcome.uo.m_est;
  md.two_pow_rho = outcome.region.two_pow_rho;
  md.parameter_count = file.arch.parameter_count();
  md.maximal_sets = outcome.region.maximal_sets.size();
  md.complete = outcome.region.complete;
  md.n_est_exact = outcome.region.n_est_exact;
  md.resource_warning = file.arch.resource_warning;
  md.terminal_cost = spec.terminal_cost;
  md.timing.region_count_ms = std::chrono::duration<double, std::milli>(outcome.region.wall_time).count();
  md.timing.uo_count_ms = uo_ms;
  md.timing.total_ms = ms_since(started);
  return outcome;
}

bool VerifyReport::all_pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

VerifyReport run_verify(const SpecFile& spec, const VerifyOptions& options) {
  const CondensedQp qp = condense(spec.spec);
  if (qp.rho > kOracleConstraintLimit) {
    throw Error(Errc::TooManyConstraints, "rho = " + std::to_string(qp.rho) +
                                              " is above the brute-force limit " +
                                              std::to_string(kOracleConstraintLimit));
  }
  ArchOptions arch_options;
  arch_options.counting = options.counting;
  const ArchOutcome arch = run_arch(spec, arch_options);

  VerifyReport report;
  report.n_est = arch.region.n_est;
  report.m_est = arch.uo.m_est;
  report.two_pow_rho = arch.region.two_pow_rho;

  const DomainBox box = spec.domain_box ? *spec.domain_box : default_domain_box(qp);
  const PwaFunction pwa = enumerate_explicit(qp, box);
  report.exact_regions = exact_maximal_region_count(pwa);
  {
    const BigInt exact = report.exact_regions;
    const bool ok = arch.region.complete && exact <= report.n_est && report.n_est <= report.two_pow_rho;
    report.checks.push_back({"oracle-vs-bound", ok,
                             "exact " + exact.str() + " <= n_est " + report.n_est.str() + " <= 2^rho " +
                                 report.two_pow_rho.str()});
  }

  const std::vector<VectorXd> samples = feasible_samples(qp, box, options.samples, options.seed);
  report.samples = samples.size();
  report.checks.push_back({"feasible-samples", samples.size() == options.samples,
                           std::to_string(samples.size()) + " of " + std::to_string(options.samples)});

  std::vector<VectorXd> controls;
  controls.reserve(samples.size());
  bool covered = true;
  for (const auto& x : samples) {
    controls.push_back(solve_pointwise(qp, x));
    if (const auto u = pwa.evaluate(x)) {
      report.max_pointwise_error = std::max(report.max_pointwise_error, (*u - controls.back()).cwiseAbs().maxCoeff());
    } else {
      covered = false;
    }
  }
  report.checks.push_back({"pointwise-consistency", covered && report.max_pointwise_error <= 1e-7,
                           "max error " + sci(report.max_pointwise_error) + (covered ? "" : ", uncovered sample")});

  LatticeOptions lattice_options;
  lattice_options.seed = options.seed;
  const LatticeExtraction extraction = extract_lattice(pwa, qp, lattice_options);
  const LatticeNet lattice = LatticeNet::from_cpwl(extraction.channels);
  const WeightedNet net = lattice.materialize();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const VectorXd y = forward(net, samples[k]);
    report.max_lattice_error = std::max(report.max_lattice_error, (y - controls[k]).cwiseAbs().maxCoeff());
  }
  report.checks.push_back({"lattice-round-trip", report.max_lattice_error <= 1e-8,
                           "N = " + lattice.n_local().str() + ", M = " + lattice.n_regions().str() +
                               ", max error " + sci(report.max_lattice_error)});

  std::size_t orderings = 0;
  for (std::size_t count : extraction.orderings) orderings = std::max(orderings, count);
  report.checks.push_back({"unique-order-bound", BigInt(orderings) <= report.m_est,
                           std::to_string(orderings) + " orderings <= m_est " + report.m_est.str()});

  bool embedded_ok = false;
  std::string detail;
  if (lattice.n_local() <= report.n_est && lattice.n_regions() <= report.m_est) {
    const LatticeNet embedded = lattice.embed(report.n_est, report.m_est);
    const ArchDescriptor shape = embedded.architecture();
    const bool same_shape = shape == arch.file.arch && shape.composable();
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const VectorXd y = embedded.forward(samples[k]);
      report.max_embedding_error =
          std::max(report.max_embedding_error, (y - forward(net, samples[k])).cwiseAbs().maxCoeff());
    }
    embedded_ok = same_shape && report.max_embedding_error <= 1e-8;
    detail = std::string(same_shape ? "architecture matches" : "architecture differs") + ", max error " +
             sci(report.max_embedding_error);
  } else {
    detail = "lattice (" + lattice.n_local().str() + ", " + lattice.n_regions().str() +
             ") exceeds the estimate";
  }
  report.checks.push_back({"embedding", embedded_ok, detail});
  return report;
}

SpecFile random_instance(int n, int m, int l, int horizon, std::uint64_t seed) {
  if (n < 1 || m < 1 || l < 1) throw Error(Errc::InvalidArgument, "dimensions must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  auto random = [&](int rows, int cols) {
    MatrixXd M(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) M(i, j) = gauss(rng);
    }
    return M;
  };
  SpecFile file;
  MpcSpec& spec = file.spec;
  spec.A = random(n, n);
  const double radius = Eigen::EigenSolver<MatrixXd>(spec.A, false).eigenvalues().cwiseAbs().maxCoeff();
  if (radius > 0.0) spec.A *= 0.9 / radius;
  spec.B = random(n, m);
  spec.C = random(l, n);
  spec.Q = MatrixXd::Identity(n, n);
  spec.R = MatrixXd::Identity(m, m);
  const RiccatiSolution sol = dare_solve(spec.A, spec.B, spec.Q, spec.R);
  spec.P = sol.P;
  spec.K = sol.K;
  spec.horizon = horizon;
  spec.y_min = VectorXd::Constant(l, -1.0);
  spec.y_max = VectorXd::Constant(l, 1.0);
  spec.u_min = VectorXd::Constant(m, -1.0);
  spec.u_max = VectorXd::Constant(m, 1.0);
  file.terminal_cost = "riccati";
  validate(spec);
  return file;
}

std::vector<BenchRow> run_bench(const SweepDescriptor& sweep, int workers) {
  struct Job {
    int n;
    int horizon;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int horizon : sweep.horizons) {
    for (int n : sweep.states) jobs.push_back({n, horizon, sweep.seed + jobs.size()});
  }
  std::vector<BenchRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      const Job& job = jobs[k];
      BenchRow& row = rows[k];
      row.n = job.n;
      row.m = sweep.inputs;
      row.l = sweep.outputs;
      row.horizon = job.horizon;
      row.rho = constraint_count(sweep.inputs, sweep.outputs, job.horizon);
      row.two_pow_rho = pow2(static_cast<unsigned>(row.rho));
      const auto started = Clock::now();
      try {
        const SpecFile spec = random_instance(job.n, sweep.inputs, sweep.outputs, job.horizon, job.seed);
        const CondensedQp qp = condense(spec.spec);
        RegionCountOptions options;
        options.epsilon = spec.spec.epsilon;
        options.budget = sweep.budget;
        const RegionCountReport report = estimate_region_count(qp, options);
        row.n_est = report.n_est;
        row.lp_calls = report.lp_calls;
        row.sat_calls = report.sat_calls;
        row.status = report.complete ? "ok" : "timeout";
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
        spdlog::error("bench row n={} Nc={}: {}", job.n, job.horizon, e.what());
      }
      row.wall_ms = ms_since(started);
    }
  };
  const int threads = std::clamp(workers, 1, std::max(1, static_cast<int>(jobs.size())));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  return rows;
}

int cmd_arch(const std::filesystem::path& spec_path, const std::filesystem::path& out_path,
             const ArchOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const SpecFile spec = load_spec(spec_path);
    const ArchOutcome outcome = run_arch(spec, options);
    write_text(out_path, write_arch(outcome.file));
    const ArchMetadata& md = outcome.file.metadata;
    out << "n = " << md.n << ", m = " << md.m << ", l = " << md.l << ", Nc = " << md.horizon
        << ", omega = " << md.omega << ", rho = " << md.rho << "\n"
        << "n_est           " << md.n_est.str() << (md.n_est_exact ? "" : " (upper bound)") << "\n"
        << "m_est           " << md.m_est.str() << "\n"
        << "2^rho           " << md.two_pow_rho.str() << "\n"
        << "2^rho / n_est   " << ratio(md.two_pow_rho, md.n_est) << "\n"
        << "maximal sets    " << md.maximal_sets << "\n"
        << "layers          " << outcome.file.arch.layers.size() << "\n"
        << "parameters      " << md.parameter_count.str() << "\n"
        << "terminal cost   " << md.terminal_cost << "\n"
        << "wrote " << out_path.string() << "\n";
    if (!md.complete) {
      err << "budget exhausted: n_est falls back to 2^rho; partial report written\n";
      return kExitTimeout;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const int code = exit_code_for(e);
    return code == kExitUnavailable ? kExitSolver : code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}

int cmd_verify(const std::filesystem::path& spec_path, const VerifyOptions& options, std::ostream& out,
               std::ostream& err) {
  try {
    const SpecFile spec = load_spec(spec_path);
    const VerifyReport report = run_verify(spec, options);
    for (const auto& check : report.checks) {
      out << (check.pass ? "PASS " : "FAIL ") << check.name << ": " << check.detail << "\n";
    }
    return report.all_pass() ? kExitOk : kExitVerifyFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}

int cmd_bench(const std::filesystem::path& sweep_path, const std::filesystem::path& out_path, int workers,
              std::ostream& out, std::ostream& err) {
  try {
    const SweepDescriptor sweep = parse_sweep(read_text(sweep_path));
    const std::vector<BenchRow> rows = run_bench(sweep, workers);
    std::string csv = csv_header();
    for (const auto& row : rows) csv += csv_row(row);
    write_text(out_path, csv);
    for (const auto& row : rows) {
      out << "n=" << row.n << " Nc=" << row.horizon << " rho=" << row.rho << " n_est=" << row.n_est.str()
          << " 2^rho/n_est=" << ratio(row.two_pow_rho, row.n_est) << " " << row.status << "\n";
    }
    out << "wrote " << rows.size() << " rows to " << out_path.string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const int code = exit_code_for(e);
    return code == kExitUnavailable ? kExitSolver : code;
  }
}

int cmd_count(const std::filesystem::path& spec_path, const ArchOptions& options, std::ostream& out,
              std::ostream& err) {
  try {
    const SpecFile spec = load_spec(spec_path);
    const CondensedQp qp = condense(spec.spec);
    RegionCountOptions rc;
    rc.epsilon = options.epsilon.value_or(spec.spec.epsilon);
    rc.budget = options.budget ? options.budget : spec.budget;
    const RegionCountReport report = estimate_region_count(qp, rc);
    out << "rho = " << report.rho << ", omega = " << qp.omega << "\n"
        << "n_est = " << report.n_est.str() << (report.n_est_exact ? "" : " (upper bound)") << "\n"
        << "2^rho = " << report.two_pow_rho.str() << " (ratio " << ratio(report.two_pow_rho, report.n_est)
        << ")\n"
        << "maximal sets: " << report.maximal_sets.size() << ", lp calls: " << report.lp_calls
        << ", sat calls: " << report.sat_calls << ", learned IIS: " << report.iis_learned << "\n";
    for (const auto& set : report.maximal_sets) {
      out << "  {";
      for (std::size_t k = 0; k < set.indices.size(); ++k) out << (k ? ", " : "") << set.indices[k] + 1;
      out << "}\n";
    }
    if (!report.complete) {
      err << "budget exhausted: n_est falls back to 2^rho\n";
      return kExitTimeout;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const int code = exit_code_for(e);
    return code == kExitUnavailable ? kExitSolver : code;
  }
}

}  // namespace arenkit
