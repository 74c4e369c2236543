#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "mied/config.hpp"
#include "mied/constraint.hpp"
#include "mied/mollifier.hpp"
#include "mied/optimizer.hpp"
#include "mied/target.hpp"

namespace mied {

/// Raised for malformed or inconsistent configuration (exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything a run needs, resolved from a config: target, mollifier,
/// constraint, initial particles, and a deterministic reference sampler.
struct RunSetup {
  Config cfg;
  TargetDensity target;
  Mollifier mollifier;
  ConstraintSpec constraint;
  RunOptions opts;
  Eigen::Index n_particles = 0;
  long reference_count = 0;
  std::string trace_path;
  std::string samples_path;
  std::string benchmark_path;
  std::vector<std::string> methods;  // benchmark only
  Eigen::MatrixXd initial;
  std::function<Eigen::MatrixXd(Eigen::Index, std::uint64_t)> reference_sampler;
  std::optional<LabeledDataset> dataset;  // logistic regression only
};

RunSetup build_run(const Config& cfg);

/// Draws the seed-derived reference set used for trace metrics.
Eigen::MatrixXd draw_reference(const RunSetup& setup);

/// Runs one sampling job and writes the trace and final-sample CSVs.
int cmd_sample(const std::string& config_path, std::ostream& err);

/// Runs every configured method from identical initialization and writes a
/// side-by-side comparison CSV.
int cmd_benchmark(const std::string& config_path, std::ostream& err);

/// Quadrature checks of the closed-form integral identities, the divergence
/// limit of the continuous energy, and the diagonal bounding property. A
/// nonzero kappa_override replaces the dimension constant (test hook for the
/// negative control). Returns 0 when every check passes.
int cmd_oracle_check(std::ostream& out, double kappa_override = 0.0);

}  // namespace mied
