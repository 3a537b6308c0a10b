#include "arenkit/log.hpp"
#include "arenkit/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

int main(int argc, char** argv) {
  arenkit::configure_logging();

  CLI::App app{"Architecture sizing for ReLU networks that represent linear MPC controllers"};
  app.set_version_flag("--version", std::string(arenkit::kToolVersion));
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_path;
  std::string sweep_path;
  std::optional<double> epsilon;
  std::optional<double> budget;
  bool literal = false;
  std::size_t samples = 10'000;
  std::uint64_t seed = 0;
  int workers = 1;

  auto* arch = app.add_subcommand("arch", "Estimate N and M and write the network architecture");
  arch->add_option("--spec", spec_path, "MPC spec file (JSON)")->required()->check(CLI::ExistingFile);
  arch->add_option("--out", out_path, "Architecture output file")->required();
  arch->add_option("--epsilon", epsilon, "Strict-feasibility margin")->check(CLI::PositiveNumber);
  arch->add_option("--budget", budget, "Region-count wall-clock budget in seconds")->check(CLI::PositiveNumber);
  arch->add_flag("--literal-hyperplanes", literal, "Count N hyperplanes instead of N(N-1)/2");

  auto* verify = app.add_subcommand("verify", "Check the estimate and network construction against brute force");
  verify->add_option("--spec", spec_path, "MPC spec file (JSON)")->required()->check(CLI::ExistingFile);
  verify->add_option("--samples", samples, "Feasible states to sample")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "Random seed");
  verify->add_flag("--literal-hyperplanes", literal, "Count N hyperplanes instead of N(N-1)/2");

  auto* bench = app.add_subcommand("bench", "Run a region-count sweep and write CSV");
  bench->add_option("--sweep", sweep_path, "Sweep descriptor (JSON)")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", out_path, "CSV output file")->required();
  bench->add_option("--workers", workers, "Parallel workers")->check(CLI::PositiveNumber);

  auto* count = app.add_subcommand("count", "Estimate the number of affine pieces only");
  count->add_option("--spec", spec_path, "MPC spec file (JSON)")->required()->check(CLI::ExistingFile);
  count->add_option("--epsilon", epsilon, "Strict-feasibility margin")->check(CLI::PositiveNumber);
  count->add_option("--budget", budget, "Wall-clock budget in seconds")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : arenkit::kExitParse;
  }

  const auto counting =
      literal ? arenkit::HyperplaneCounting::Literal : arenkit::HyperplaneCounting::Pairwise;
  arenkit::ArchOptions arch_options;
  arch_options.epsilon = epsilon;
  if (budget) arch_options.budget = std::chrono::duration<double>(*budget);
  arch_options.counting = counting;

  if (arch->parsed()) return arenkit::cmd_arch(spec_path, out_path, arch_options, std::cout, std::cerr);
  if (verify->parsed()) {
    arenkit::VerifyOptions options;
    options.samples = samples;
    options.seed = seed;
    options.counting = counting;
    return arenkit::cmd_verify(spec_path, options, std::cout, std::cerr);
  }
  if (bench->parsed()) return arenkit::cmd_bench(sweep_path, out_path, workers, std::cout, std::cerr);
  return arenkit::cmd_count(spec_path, arch_options, std::cout, std::cerr);
}
