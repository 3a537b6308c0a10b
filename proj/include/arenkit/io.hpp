#pragma once

#include "arenkit/bigint.hpp"
#include "arenkit/condense.hpp"
#include "arenkit/oracle.hpp"
#include "arenkit/relu_lattice.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace arenkit {

inline constexpr const char* kToolName = "arenkit";
inline constexpr const char* kToolVersion = "0.1.0";

/// Parsed spec document. Matrices are row-major nested arrays; a bare number
/// is accepted for 1x1 matrices and length-1 vectors.
struct SpecFile {
  MpcSpec spec;
  /// "given" when P was supplied, "riccati" when filled by dare_solve.
  std::string terminal_cost = "given";
  std::optional<std::chrono::duration<double>> budget;
  std::optional<DomainBox> domain_box;
};

/// Throws Error{Parse} naming the offending key (or line/column for syntax
/// errors); validation failures keep their own codes.
SpecFile parse_spec(const std::string& text);
SpecFile load_spec(const std::filesystem::path& path);

struct ArchTiming {
  double region_count_ms = 0.0;
  double uo_count_ms = 0.0;
  double total_ms = 0.0;
};

struct ArchMetadata {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  int n = 0;
  int m = 0;
  int l = 0;
  int horizon = 0;
  int omega = 0;
  int rho = 0;
  double epsilon = 0.0;
  BigInt n_est;
  BigInt m_est;
  BigInt two_pow_rho;
  BigInt parameter_count;
  std::size_t maximal_sets = 0;
  bool complete = true;
  bool n_est_exact = true;
  bool resource_warning = false;
  std::string terminal_cost = "given";
  ArchTiming timing;

  /// Timing is ignored.
  friend bool operator==(const ArchMetadata& a, const ArchMetadata& b);
};

struct ArchFile {
  ArchMetadata metadata;
  ArchDescriptor arch;
};

/// Pretty-printed document with sorted keys; big integers as decimal strings.
std::string write_arch(const ArchFile& file);
ArchFile parse_arch(const std::string& text);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Benchmark sweep: the cartesian product of `states` and `horizons`.
struct SweepDescriptor {
  std::vector<int> states;
  std::vector<int> horizons;
  int inputs = 1;
  int outputs = 1;
  std::uint64_t seed = 0;
  std::optional<std::chrono::duration<double>> budget;
};

/// Keys: "n" (list or {"from","to"}), "Nc" (list or number), optional "m",
/// "l", "seed", "budget_seconds".
SweepDescriptor parse_sweep(const std::string& text);

struct BenchRow {
  int n = 0;
  int m = 0;
  int l = 0;
  int horizon = 0;
  int rho = 0;
  BigInt n_est;
  BigInt two_pow_rho;
  double wall_ms = 0.0;
  std::int64_t lp_calls = 0;
  std::int64_t sat_calls = 0;
  std::string status;  // "ok", "timeout" or "error: ..."
};

std::string csv_header();
std::string csv_row(const BenchRow& row);

}  // namespace arenkit
