#pragma once

#include "arenkit/error.hpp"
#include "arenkit/io.hpp"
#include "arenkit/oracle.hpp"
#include "arenkit/region_count.hpp"
#include "arenkit/uo_count.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace arenkit {

/// Process exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 1,
  kExitSolver = 2,
  kExitTimeout = 3,
  kExitUnavailable = 4,
  kExitVerifyFailed = 5,
};

/// Maps a library error to the command exit code.
int exit_code_for(const Error& error);

struct ArchOptions {
  std::optional<double> epsilon;  // overrides the spec file value
  std::optional<std::chrono::duration<double>> budget;
  HyperplaneCounting counting = HyperplaneCounting::Pairwise;
};

struct ArchOutcome {
  CondensedQp qp;
  RegionCountReport region;
  UoBound uo;
  ArchFile file;
};

/// condense -> region count -> unique-order bound -> architecture.
ArchOutcome run_arch(const SpecFile& spec, const ArchOptions& options = {});

struct VerifyOptions {
  std::size_t samples = 10'000;
  std::uint64_t seed = 0;
  HyperplaneCounting counting = HyperplaneCounting::Pairwise;
};

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  std::size_t exact_regions = 0;
  BigInt n_est;
  BigInt m_est;
  BigInt two_pow_rho;
  std::size_t samples = 0;
  double max_pointwise_error = 0.0;  // solve_pointwise vs explicit pieces
  double max_lattice_error = 0.0;    // assembled lattice net vs solve_pointwise
  double max_embedding_error = 0.0;  // embedded net vs assembled net

  bool all_pass() const;
};

/// Full oracle pipeline on a desk-scale spec. Throws Error{TooManyConstraints}
/// when rho exceeds the oracle limit.
VerifyReport run_verify(const SpecFile& spec, const VerifyOptions& options = {});

/// Random instance with a stable A (spectral radius 0.9), Q = I, R = I, P from
/// the Riccati equation and unit input/output bounds.
SpecFile random_instance(int n, int m, int l, int horizon, std::uint64_t seed);

std::vector<BenchRow> run_bench(const SweepDescriptor& sweep, int workers = 1);

int cmd_arch(const std::filesystem::path& spec_path, const std::filesystem::path& out_path,
             const ArchOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const std::filesystem::path& spec_path, const VerifyOptions& options, std::ostream& out,
               std::ostream& err);
int cmd_bench(const std::filesystem::path& sweep_path, const std::filesystem::path& out_path, int workers,
              std::ostream& out, std::ostream& err);
int cmd_count(const std::filesystem::path& spec_path, const ArchOptions& options, std::ostream& out,
              std::ostream& err);

}  // namespace arenkit
