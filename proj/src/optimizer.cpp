#include "mied/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mied/kernels.hpp"
#include "mied/metrics.hpp"
#include "mied/rng.hpp"

namespace mied {

AdamState AdamState::init(Eigen::Index rows, Eigen::Index cols, double lr) {
  AdamState s;
  s.m = Eigen::MatrixXd::Zero(rows, cols);
  s.v = Eigen::MatrixXd::Zero(rows, cols);
  s.lr = lr;
  return s;
}

Eigen::MatrixXd adam_step(AdamState& state, const Eigen::MatrixXd& grads) {
  if (!grads.allFinite()) throw std::runtime_error("adam_step: diverged");
  if (grads.rows() != state.m.rows() || grads.cols() != state.m.cols())
    throw std::invalid_argument("adam_step: gradient shape mismatch");
  state.t += 1;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * grads;
  state.v = state.beta2 * state.v + (1.0 - state.beta2) * grads.cwiseProduct(grads);
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  Eigen::MatrixXd m_hat = state.m / bc1;
  Eigen::MatrixXd v_hat = state.v / bc2;
  return (-state.lr * m_hat.array() / (v_hat.array().sqrt() + state.eps_hat)).matrix();
}

namespace {

struct Recorder {
  const RunOptions& opts;
  RunTrace& trace;

  void emit(long iter, double log_energy, const Eigen::MatrixXd& positions) {
    TraceRow row;
    row.iter = iter;
    row.log_energy = log_energy;
    if (opts.reference.has_value()) {
      const Eigen::MatrixXd& ref = *opts.reference;
      if (ref.rows() < positions.rows())
        throw std::invalid_argument("run: reference smaller than particle set");
      row.w2 = w2_exact(positions, ref.topRows(positions.rows()));
      row.energy_dist = energy_distance(positions, ref);
    } else {
      row.w2 = std::numeric_limits<double>::quiet_NaN();
      row.energy_dist = std::numeric_limits<double>::quiet_NaN();
    }
    trace.rows.push_back(row);
  }

  bool due(long iter) const {
    return iter == 0 || iter == opts.iters ||
           (opts.record_every > 0 && iter % opts.record_every == 0);
  }
};

void validate_options(const RunOptions& opts) {
  if (opts.iters < 0) throw std::invalid_argument("run: iters must be >= 0");
  if (opts.record_every < 1) throw std::invalid_argument("run: record_every must be >= 1");
  if (!(opts.lr > 0.0)) throw std::invalid_argument("run: lr must be positive");
}

[[noreturn]] void rethrow_with_iteration(const std::exception& e, long iter) {
  throw std::runtime_error("iteration " + std::to_string(iter) + ": " + e.what());
}

Eigen::MatrixXd evaluate_mied_gradient(const Eigen::MatrixXd& x, const TargetDensity& target,
                                       const Mollifier& m, const ConstraintSpec& constraint,
                                       const Eigen::MatrixXd& u, double* log_energy_out) {
  EnergyGradient eg = interaction_energy_gradient(x, target, m);
  *log_energy_out = eg.report.log_energy;

  if (const auto* map = std::get_if<ReparamMap>(&constraint)) {
    Eigen::MatrixXd grad_u(u.rows(), u.cols());
    for (Eigen::Index i = 0; i < u.rows(); ++i)
      grad_u.row(i) =
          map->pullback(u.row(i).transpose(), eg.grad.row(i).transpose()).transpose();
    return grad_u;
  }
  if (const auto* barrier = std::get_if<InequalityConstraint>(&constraint)) {
    Eigen::MatrixXd dir(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      Eigen::VectorXd xi = x.row(i).transpose();
      dir.row(i) = dynamic_barrier_direction(eg.grad.row(i).transpose(), barrier->g(xi),
                                             barrier->grad_g(xi), barrier->alpha)
                       .transpose();
    }
    return dir;
  }
  return eg.grad;
}

}  // namespace

RunTrace run_mied(const Eigen::MatrixXd& initial_positions, const TargetDensity& target,
                  const Mollifier& m, const ConstraintSpec& constraint,
                  const RunOptions& opts) {
  validate_options(opts);
  const auto* map = std::get_if<ReparamMap>(&constraint);

  // The optimization variable: preimages under a reparameterization,
  // otherwise the positions themselves.
  Eigen::MatrixXd u = initial_positions;
  if (map) {
    for (Eigen::Index i = 0; i < u.rows(); ++i)
      u.row(i) = map->inverse(initial_positions.row(i).transpose()).transpose();
  }
  auto to_domain = [&](const Eigen::MatrixXd& vars) -> Eigen::MatrixXd {
    if (!map) return vars;
    Eigen::MatrixXd x(vars.rows(), vars.cols());
    for (Eigen::Index i = 0; i < vars.rows(); ++i)
      x.row(i) = map->forward(vars.row(i).transpose()).transpose();
    return x;
  };

  RunTrace trace;
  Recorder recorder{opts, trace};
  AdamState adam = AdamState::init(u.rows(), u.cols(), opts.lr);

  for (long iter = 0;; ++iter) {
    Eigen::MatrixXd x = to_domain(u);
    double log_energy = 0.0;
    Eigen::MatrixXd grad;
    try {
      grad = evaluate_mied_gradient(x, target, m, constraint, u, &log_energy);
    } catch (const std::exception& e) {
      rethrow_with_iteration(e, iter);
    }
    if (recorder.due(iter)) recorder.emit(iter, log_energy, x);
    if (iter == opts.iters) {
      trace.final_positions = x;
      break;
    }
    u += adam_step(adam, grad);
  }
  return trace;
}

namespace {

Eigen::MatrixXd svgd_direction(const Eigen::MatrixXd& x, const Eigen::MatrixXd& scores) {
  const Eigen::Index n = x.rows();
  RbfKernel kernel{median_heuristic(x)};
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n, x.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      auto [k, grad_k] = rbf_and_grad(kernel, x.row(j).transpose(), x.row(i).transpose());
      phi.row(i) += k * scores.row(j) + grad_k.transpose();
    }
    phi.row(i) /= static_cast<double>(n);
  }
  return phi;
}

}  // namespace

RunTrace run_baseline(BaselineKind kind, const Eigen::MatrixXd& initial_positions,
                      const TargetDensity& target, const Mollifier& m,
                      const ConstraintSpec& constraint, const RunOptions& opts) {
  validate_options(opts);
  if (!std::holds_alternative<std::monostate>(constraint))
    throw std::invalid_argument("run_baseline: baselines support unconstrained targets only");

  Eigen::MatrixXd x = initial_positions;
  RunTrace trace;
  Recorder recorder{opts, trace};
  AdamState adam = AdamState::init(x.rows(), x.cols(), opts.lr);

  for (long iter = 0;; ++iter) {
    const Eigen::Index n = x.rows();
    Eigen::VectorXd logp(n);
    Eigen::MatrixXd scores(n, x.cols());
    double log_energy = 0.0;
    try {
      for (Eigen::Index i = 0; i < n; ++i) {
        auto [lp, g] = target.eval(x.row(i).transpose());
        logp[i] = lp;
        scores.row(i) = g.transpose();
      }
      // the pair energy needs two particles; degrade to NaN below that
      log_energy = n >= 2 ? log_interaction_energy(x, logp, m).log_energy
                          : std::numeric_limits<double>::quiet_NaN();
    } catch (const std::exception& e) {
      rethrow_with_iteration(e, iter);
    }
    if (recorder.due(iter)) recorder.emit(iter, log_energy, x);
    if (iter == opts.iters) {
      trace.final_positions = x;
      break;
    }
    if (kind == BaselineKind::Svgd) {
      x += opts.lr * svgd_direction(x, scores);
    } else {
      x += adam_step(adam, -scores);  // ascent on log p
    }
  }
  return trace;
}

Eigen::MatrixXd draw_initial_normal(Eigen::Index n_particles, int dim, std::uint64_t seed) {
  Rng rng(seed);
  return rng.normal_matrix(n_particles, dim);
}

Eigen::MatrixXd draw_initial_uniform(Eigen::Index n_particles, int dim, double lo, double hi,
                                     std::uint64_t seed) {
  Rng rng(seed);
  return rng.uniform_matrix(n_particles, dim, lo, hi);
}

}  // namespace mied
