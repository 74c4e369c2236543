#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mied/constraint.hpp"
#include "mied/energy.hpp"
#include "mied/mollifier.hpp"
#include "mied/target.hpp"

namespace mied {

struct AdamState {
  Eigen::MatrixXd m;  // first moment
  Eigen::MatrixXd v;  // second moment, elementwise >= 0
  long t = 0;
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_hat = 1e-8;

  static AdamState init(Eigen::Index rows, Eigen::Index cols, double lr);
};

/// One bias-corrected Adam update. Advances the state and returns the
/// additive step -lr * m_hat / (sqrt(v_hat) + eps_hat).
Eigen::MatrixXd adam_step(AdamState& state, const Eigen::MatrixXd& grads);

struct TraceRow {
  long iter = 0;
  double log_energy = 0.0;
  double w2 = 0.0;
  double energy_dist = 0.0;
  double elapsed_ms = 0.0;  // reserved; kept at 0 so traces are reproducible
};

struct RunTrace {
  std::vector<TraceRow> rows;
  Eigen::MatrixXd final_positions;  // in the target domain
};

struct RunOptions {
  long iters = 2000;
  double lr = 0.01;
  long record_every = 50;
  std::uint64_t seed = 0;
  // When present, w2 (against the first N rows) and energy distance
  // (against the full set) are recorded each time a row is emitted;
  // otherwise those columns hold NaN.
  std::optional<Eigen::MatrixXd> reference;
};

/// Gradient descent of the log interaction energy with Adam. Positions are
/// supplied in the target domain; a reparameterizing constraint is applied
/// by optimizing preimages, an inequality constraint through the dynamic
/// barrier direction. Deterministic: no randomness inside the loop.
RunTrace run_mied(const Eigen::MatrixXd& initial_positions, const TargetDensity& target,
                  const Mollifier& m, const ConstraintSpec& constraint,
                  const RunOptions& opts);

enum class BaselineKind { Svgd, Ipd };

/// Baseline runs with the same recording contract as run_mied. SVGD moves
/// particles along the kernelized score with a median-heuristic bandwidth
/// (unconstrained only); IPD runs Adam ascent on log p per particle. The
/// mollifier is used only to record the interaction energy column.
RunTrace run_baseline(BaselineKind kind, const Eigen::MatrixXd& initial_positions,
                      const TargetDensity& target, const Mollifier& m,
                      const ConstraintSpec& constraint, const RunOptions& opts);

/// Initial particle draws. Unconstrained targets use a standard normal;
/// box-type reparameterizations start from a uniform draw in
/// [-0.5, 0.5]^n mapped back through the constraint's inverse.
Eigen::MatrixXd draw_initial_normal(Eigen::Index n_particles, int dim, std::uint64_t seed);
Eigen::MatrixXd draw_initial_uniform(Eigen::Index n_particles, int dim, double lo, double hi,
                                     std::uint64_t seed);

}  // namespace mied
