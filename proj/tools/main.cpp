#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mied/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Particle sampler driven by mollified interaction energy descent"};
  app.require_subcommand(1);

  std::string sample_config, benchmark_config;
  auto* sample = app.add_subcommand("sample", "Run one sampling job and write trace/sample CSVs");
  sample->add_option("--config", sample_config, "Path to a key = value config file")->required();
  auto* benchmark =
      app.add_subcommand("benchmark", "Run the configured methods from identical initialization");
  benchmark->add_option("--config", benchmark_config, "Path to a key = value config file")
      ->required();
  auto* oracle = app.add_subcommand(
      "oracle-check", "Verify quadrature identities and the energy's divergence limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad invocation is a config error
  }

  if (sample->parsed()) return mied::cmd_sample(sample_config, std::cerr);
  if (benchmark->parsed()) return mied::cmd_benchmark(benchmark_config, std::cerr);
  if (oracle->parsed()) return mied::cmd_oracle_check(std::cout);
  return 2;
}
