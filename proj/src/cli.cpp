#include "mied/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "mied/csv.hpp"
#include "mied/energy.hpp"
#include "mied/metrics.hpp"
#include "mied/oracle.hpp"
#include "mied/quadrature.hpp"
#include "mied/rng.hpp"

namespace mied {

namespace {

constexpr std::uint64_t kReferenceSeedOffset = 0x9e3779b9ull;

std::string resolve_output(const std::string& path) {
  const char* dir = std::getenv("MIED_OUTPUT_DIR");
  if (!dir || !*dir) return path;
  return (std::filesystem::path(dir) / std::filesystem::path(path).filename()).string();
}

std::vector<std::string> parse_name_list(const std::string& raw) {
  std::vector<std::string> out;
  std::stringstream ss(raw);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    auto begin = cell.find_first_not_of(" \t");
    auto end = cell.find_last_not_of(" \t");
    if (begin != std::string::npos) out.push_back(cell.substr(begin, end - begin + 1));
  }
  return out;
}

Mollifier build_mollifier(const Config& cfg, int dim) {
  std::string family = cfg.get_string("mollifier.family", "riesz");
  if (family == "riesz") {
    double s = cfg.has("mollifier.s") && cfg.get_string("mollifier.s") != "auto"
                   ? cfg.get_double("mollifier.s")
                   : static_cast<double>(dim) + 1e-4;
    return Mollifier::riesz(s, cfg.get_double("mollifier.epsilon", 1e-8));
  }
  if (!cfg.has("mollifier.epsilon"))
    throw ConfigError("config: mollifier.epsilon is required for family '" + family + "'");
  if (family == "gaussian") return Mollifier::gaussian(cfg.get_double("mollifier.epsilon"));
  if (family == "laplace") return Mollifier::laplace(cfg.get_double("mollifier.epsilon"));
  throw ConfigError("config: unknown mollifier.family '" + family + "'");
}

}  // namespace

RunSetup build_run(const Config& cfg) {
  RunSetup setup;
  setup.cfg = cfg;

  if (!cfg.has("run.seed")) throw ConfigError("config: run.seed is required");
  const std::uint64_t seed = cfg.get_seed("run.seed");
  setup.n_particles = cfg.get_long("run.particles", 100);
  if (setup.n_particles < 2) throw ConfigError("config: run.particles must be >= 2");

  const std::string target_name = cfg.get_string("target.name");
  std::string constraint_type = cfg.get_string("constraint.type", "none");

  // --- target ---------------------------------------------------------
  if (target_name == "gaussian") {
    int dim = static_cast<int>(cfg.get_long("target.dim", 2));
    Eigen::VectorXd mean =
        cfg.has("target.mean") ? cfg.get_vector("target.mean") : Eigen::VectorXd::Zero(dim);
    if (mean.size() != dim) throw ConfigError("config: target.mean size != target.dim");
    Eigen::MatrixXd cov;
    std::string cov_kind = cfg.get_string("target.cov", "det1_random");
    if (cov_kind == "identity") {
      cov = Eigen::MatrixXd::Identity(dim, dim);
    } else if (cov_kind == "det1_random") {
      cov = random_det1_covariance(dim, cfg.get_seed("run.seed") + 77);
    } else {
      cov = cfg.get_matrix("target.cov");
      if (cov.rows() != dim || cov.cols() != dim)
        throw ConfigError("config: target.cov shape != target.dim");
    }
    setup.target = gaussian_target(mean, cov);
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    Eigen::MatrixXd chol = llt.matrixL();
    setup.reference_sampler = [mean, chol](Eigen::Index count,
                                           std::uint64_t s) -> Eigen::MatrixXd {
      Rng rng(s);
      Eigen::MatrixXd z = rng.normal_matrix(count, mean.size());
      Eigen::MatrixXd out = z * chol.transpose();
      out.rowwise() += mean.transpose();
      return out;
    };
  } else if (target_name == "student_t") {
    double nu = cfg.get_double("target.nu", 2.0);
    Eigen::MatrixXd transform = cfg.has("target.transform")
                                    ? cfg.get_matrix("target.transform")
                                    : (Eigen::MatrixXd(2, 2) << 1.0, 0.5, 0.5, 1.0).finished();
    setup.target = student_t_product(nu, transform);
    setup.reference_sampler = [nu, transform](Eigen::Index count,
                                              std::uint64_t s) -> Eigen::MatrixXd {
      Rng rng(s);
      Eigen::MatrixXd u(count, transform.rows());
      for (Eigen::Index i = 0; i < count; ++i)
        for (Eigen::Index j = 0; j < transform.rows(); ++j) u(i, j) = rng.student_t(nu);
      return u * transform.transpose();
    };
  } else if (target_name == "uniform_box") {
    int dim = static_cast<int>(cfg.get_long("target.dim", 2));
    setup.target = uniform_box_target(dim);
    setup.reference_sampler = [dim](Eigen::Index count, std::uint64_t s) -> Eigen::MatrixXd {
      Rng rng(s);
      return rng.uniform_matrix(count, dim, -1.0, 1.0);
    };
  } else if (target_name == "dirichlet") {
    Eigen::VectorXd alpha = cfg.has("target.alpha")
                                ? cfg.get_vector("target.alpha")
                                : Eigen::VectorXd::Ones(cfg.get_long("target.k", 5));
    setup.target = dirichlet_target(alpha);
    setup.reference_sampler = [alpha](Eigen::Index count, std::uint64_t s) -> Eigen::MatrixXd {
      Rng rng(s);
      const Eigen::Index k = alpha.size();
      Eigen::MatrixXd out(count, k - 1);
      for (Eigen::Index i = 0; i < count; ++i) {
        Eigen::VectorXd g(k);
        for (Eigen::Index j = 0; j < k; ++j) g[j] = rng.gamma(alpha[j]);
        out.row(i) = (g / g.sum()).head(k - 1).transpose();
      }
      return out;
    };
  } else if (target_name == "logistic_regression") {
    LabeledDataset ds = load_csv_dataset(
        cfg.get_string("target.dataset"), cfg.get_string("target.label_column", "label"),
        cfg.get_double("target.split_fraction", 0.8),
        cfg.has("target.split_seed") ? cfg.get_seed("target.split_seed") : seed);
    setup.dataset = ds;
    setup.target = logistic_regression_target(ds, cfg.get_double("target.prior_std", 1.0));
    // reference sampler defined after options are known (needs the run setup);
    // filled in below.
  } else {
    throw ConfigError("config: unknown target.name '" + target_name + "'");
  }
  const int dim = setup.target.dim;

  // --- constraint -------------------------------------------------------
  if (constraint_type == "none") {
    setup.constraint = std::monostate{};
  } else if (constraint_type == "tanh_box") {
    Eigen::VectorXd lo = cfg.has("constraint.lo") ? cfg.get_vector("constraint.lo")
                                                  : Eigen::VectorXd::Constant(dim, -1.0);
    Eigen::VectorXd hi = cfg.has("constraint.hi") ? cfg.get_vector("constraint.hi")
                                                  : Eigen::VectorXd::Constant(dim, 1.0);
    if (lo.size() != dim || hi.size() != dim)
      throw ConfigError("config: constraint bounds size != target dim");
    setup.constraint = tanh_box_map(lo, hi);
  } else if (constraint_type == "sqrt_mirror") {
    setup.constraint = sqrt_mirror_map();
  } else if (constraint_type == "simplex") {
    setup.constraint = simplex_map(dim + 1);
  } else if (constraint_type == "ball_barrier") {
    double radius = cfg.get_double("constraint.radius", 1.0);
    if (!(radius > 0.0)) throw ConfigError("config: constraint.radius must be positive");
    InequalityConstraint c;
    c.alpha = cfg.get_double("constraint.alpha", 1.0);
    c.g = [radius](const Eigen::VectorXd& x) { return x.squaredNorm() - radius * radius; };
    c.grad_g = [](const Eigen::VectorXd& x) -> Eigen::VectorXd { return 2.0 * x; };
    setup.constraint = c;
  } else {
    throw ConfigError("config: unknown constraint.type '" + constraint_type + "'");
  }
  if ((target_name == "uniform_box" || target_name == "dirichlet") &&
      std::holds_alternative<std::monostate>(setup.constraint))
    throw ConfigError("config: target requires constraint handling");

  setup.mollifier = build_mollifier(cfg, dim);
  try {
    setup.mollifier.check_valid_for_dim(dim);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  // --- options ----------------------------------------------------------
  setup.opts.iters = cfg.get_long("optimizer.iters", 2000);
  setup.opts.lr = cfg.get_double("optimizer.lr", 0.01);
  setup.opts.record_every = cfg.get_long("optimizer.record_every", 50);
  setup.opts.seed = seed;
  setup.reference_count = cfg.get_long("run.reference_count", 2000);
  if (setup.reference_count < setup.n_particles)
    throw ConfigError("config: run.reference_count must be >= run.particles");

  setup.trace_path = resolve_output(cfg.get_string("output.trace", "trace.csv"));
  setup.samples_path = resolve_output(cfg.get_string("output.samples", "samples.csv"));
  setup.benchmark_path = resolve_output(cfg.get_string("output.benchmark", "benchmark.csv"));
  setup.methods = parse_name_list(cfg.get_string("benchmark.methods", "mied,svgd,ipd"));
  for (const auto& m : setup.methods)
    if (m != "mied" && m != "svgd" && m != "ipd")
      throw ConfigError("config: unknown method '" + m + "' in benchmark.methods");
  if (setup.methods.empty()) throw ConfigError("config: benchmark.methods is empty");

  // --- initial particles -------------------------------------------------
  std::string init = cfg.get_string("run.init", "auto");
  const auto* map = std::get_if<ReparamMap>(&setup.constraint);
  if (init == "auto") {
    // box-type maps start from a uniform draw in the middle of the domain;
    // everything else from a standard normal (preimage space under a map)
    bool box_like = map && (map->descriptor == "tanh_box" || map->descriptor == "sqrt_mirror");
    init = box_like ? "uniform" : "normal";
  }
  if (init == "normal") {
    double scale = cfg.get_double("run.init_scale", 1.0);
    setup.initial = scale * draw_initial_normal(setup.n_particles, dim, seed);
    if (map) {
      // interpret the draw in preimage coordinates and push it forward
      for (Eigen::Index i = 0; i < setup.initial.rows(); ++i)
        setup.initial.row(i) = map->forward(setup.initial.row(i).transpose()).transpose();
    }
  } else if (init == "uniform") {
    double lo = cfg.get_double("run.init_lo", -0.5);
    double hi = cfg.get_double("run.init_hi", 0.5);
    if (!(lo < hi)) throw ConfigError("config: run.init_lo must be < run.init_hi");
    setup.initial = draw_initial_uniform(setup.n_particles, dim, lo, hi, seed);
  } else {
    throw ConfigError("config: unknown run.init '" + init + "'");
  }

  // Logistic-regression runs have no closed-form sampler; the reference is a
  // long ascent to the posterior mode, jittered. Captured by value so the
  // sampler stays self-contained.
  if (target_name == "logistic_regression") {
    TargetDensity target = setup.target;
    Eigen::MatrixXd initial = setup.initial;
    RunOptions ref_opts;
    ref_opts.iters = std::max<long>(2 * setup.opts.iters, 2000);
    ref_opts.lr = setup.opts.lr;
    ref_opts.record_every = ref_opts.iters > 0 ? ref_opts.iters : 1;
    double jitter = cfg.get_double("run.reference_jitter", 0.05);
    Mollifier m = setup.mollifier;
    setup.reference_sampler = [target, initial, ref_opts, jitter,
                               m](Eigen::Index count, std::uint64_t s) -> Eigen::MatrixXd {
      RunTrace mode_run = run_baseline(BaselineKind::Ipd, initial, target, m,
                                       std::monostate{}, ref_opts);
      Rng rng(s);
      const Eigen::MatrixXd& base = mode_run.final_positions;
      Eigen::MatrixXd out(count, base.cols());
      for (Eigen::Index i = 0; i < count; ++i) {
        Eigen::Index pick = static_cast<Eigen::Index>(
            rng.uniform_index(static_cast<std::uint64_t>(base.rows())));
        for (Eigen::Index j = 0; j < base.cols(); ++j)
          out(i, j) = base(pick, j) + jitter * rng.normal();
      }
      return out;
    };
  }

  return setup;
}

Eigen::MatrixXd draw_reference(const RunSetup& setup) {
  return setup.reference_sampler(setup.reference_count,
                                 setup.opts.seed + kReferenceSeedOffset);
}

namespace {

RunTrace dispatch_run(const std::string& method, const RunSetup& setup,
                      const RunOptions& opts) {
  if (method != "mied" && !std::holds_alternative<std::monostate>(setup.constraint))
    throw ConfigError("config: method '" + method + "' supports unconstrained targets only");
  if (method == "mied")
    return run_mied(setup.initial, setup.target, setup.mollifier, setup.constraint, opts);
  if (method == "svgd")
    return run_baseline(BaselineKind::Svgd, setup.initial, setup.target, setup.mollifier,
                        setup.constraint, opts);
  if (method == "ipd")
    return run_baseline(BaselineKind::Ipd, setup.initial, setup.target, setup.mollifier,
                        setup.constraint, opts);
  throw ConfigError("config: unknown method '" + method + "'");
}

CsvTable trace_table(const Config& cfg, const RunTrace& trace) {
  CsvTable t;
  t.comments = cfg.lines();
  t.columns = {"iter", "log_energy", "w2", "energy_dist", "elapsed_ms"};
  for (const auto& row : trace.rows)
    t.rows.push_back({static_cast<double>(row.iter), row.log_energy, row.w2, row.energy_dist,
                      row.elapsed_ms});
  return t;
}

CsvTable samples_table(const Config& cfg, const Eigen::MatrixXd& positions) {
  CsvTable t;
  t.comments = cfg.lines();
  for (Eigen::Index c = 0; c < positions.cols(); ++c)
    t.columns.push_back("x" + std::to_string(c));
  for (Eigen::Index i = 0; i < positions.rows(); ++i) {
    std::vector<double> row(static_cast<size_t>(positions.cols()));
    for (Eigen::Index c = 0; c < positions.cols(); ++c) row[static_cast<size_t>(c)] = positions(i, c);
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

int cmd_sample(const std::string& config_path, std::ostream& err) {
  RunSetup setup;
  try {
    setup = build_run(Config::load(config_path));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    RunOptions opts = setup.opts;
    opts.reference = draw_reference(setup);
    const std::string method = setup.cfg.get_string("optimizer.method", "mied");
    auto t0 = std::chrono::steady_clock::now();
    RunTrace trace = dispatch_run(method, setup, opts);
    auto t1 = std::chrono::steady_clock::now();
    err << "sample: " << method << " finished "
        << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
        << " ms wall time\n";
    write_csv(setup.trace_path, trace_table(setup.cfg, trace));
    write_csv(setup.samples_path, samples_table(setup.cfg, trace.final_positions));
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_benchmark(const std::string& config_path, std::ostream& err) {
  RunSetup setup;
  try {
    setup = build_run(Config::load(config_path));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    RunOptions opts = setup.opts;
    opts.reference = draw_reference(setup);

    std::ostringstream body;
    for (const auto& line : setup.cfg.lines()) body << "# " << line << "\n";
    body << "method,w2,log_w2,energy_dist,log_energy_dist,accuracy\n";
    for (const auto& method : setup.methods) {
      auto t0 = std::chrono::steady_clock::now();
      RunTrace trace = dispatch_run(method, setup, opts);
      auto t1 = std::chrono::steady_clock::now();
      err << "benchmark: " << method << " finished "
          << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
          << " ms wall time\n";
      // final comparison against the whole reference when sizes divide,
      // else against a size-matched prefix
      const Eigen::Index n = trace.final_positions.rows();
      double w2 = opts.reference->rows() % n == 0
                      ? w2_exact_uniform(trace.final_positions, *opts.reference)
                      : w2_exact(trace.final_positions, opts.reference->topRows(n));
      double ed = energy_distance(trace.final_positions, *opts.reference);
      double acc = std::numeric_limits<double>::quiet_NaN();
      if (setup.dataset.has_value()) acc = test_accuracy(*setup.dataset, trace.final_positions);
      body << method << "," << format_double(w2) << "," << format_double(std::log(w2)) << ","
           << format_double(ed) << "," << format_double(std::log(ed)) << ","
           << format_double(acc) << "\n";
    }
    std::ofstream out(setup.benchmark_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + setup.benchmark_path + "' for writing");
    out << body.str();
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

// ---------------------------------------------------------------------------
// oracle checks

namespace {

struct CheckReporter {
  std::ostream& out;
  bool all_ok = true;

  void report(const std::string& name, bool ok, double measured, double tol,
              const std::string& detail = "") {
    out << (ok ? "[PASS] " : "[FAIL] ") << name << ": measured=" << format_double(measured)
        << " tol=" << format_double(tol);
    if (!detail.empty()) out << " (" << detail << ")";
    out << "\n";
    all_ok = all_ok && ok;
  }
};

DensityFn gauss1d(double mu, double sigma) {
  return [mu, sigma](const Eigen::VectorXd& x) {
    double z = (x[0] - mu) / sigma;
    return std::exp(-0.5 * z * z);
  };
}

QuadratureGrid grid1d(double lo, double hi, double spacing) {
  QuadratureGrid g;
  g.dim = 1;
  g.lo = Eigen::VectorXd::Constant(1, lo);
  g.hi = Eigen::VectorXd::Constant(1, hi);
  g.spacing = spacing;
  return g;
}

void check_ball_integrals(CheckReporter& rep) {
  struct Case {
    int n;
    double s, b, eps;
  };
  const Case cases[] = {{1, 2.0, 0.0, 0.5}, {1, 3.0, 1.0, 0.3}, {2, 3.0, 0.0, 0.4}};
  double worst = 0.0;
  for (const auto& c : cases) {
    double closed = riesz_ball_integral(c.n, c.s, c.b, c.eps);
    double direct = unit_sphere_area(c.n) *
                    integrate(
                        [&](double r) {
                          return std::pow(r, c.n + c.b - 1.0) /
                                 std::pow(r * r + c.eps * c.eps, 0.5 * c.s);
                        },
                        0.0, c.eps, 1e-12);
    worst = std::max(worst, std::abs(closed - direct) / std::abs(direct));
  }
  rep.report("riesz-ball-integral vs direct quadrature", worst < 1e-4, worst, 1e-4);

  double analytic = riesz_ball_integral(1, 2.0, 0.0, 0.5);
  double rel = std::abs(analytic - M_PI) / M_PI;
  rep.report("riesz-ball-integral analytic case", rel < 1e-4, rel, 1e-4,
             "value " + format_double(analytic) + " vs pi");

  double r1 = riesz_ball_integral(1, 3.0, 0.0, 0.37) / riesz_ball_integral(1, 3.0, 0.0, 0.74);
  double scale_err = std::abs(r1 - std::pow(2.0, 3.0 - 1.0)) / std::pow(2.0, 2.0);
  double r2 = riesz_ball_integral(2, 4.0, 1.0, 0.37) / riesz_ball_integral(2, 4.0, 1.0, 0.74);
  scale_err = std::max(scale_err, std::abs(r2 - 2.0) / 2.0);
  rep.report("riesz-ball-integral epsilon scaling", scale_err < 1e-12, scale_err, 1e-12);
}

void check_tail_bound(CheckReporter& rep) {
  const double delta = 1.0;
  double bound = riesz_tail_bound(1, 3.0, 0.0, delta);
  double worst = 0.0;
  for (double eps : {0.1, 1.0}) {
    double tail = 2.0 * integrate(
                            [eps](double y) { return std::pow(y * y + eps * eps, -1.5); },
                            delta, 1e4, 1e-10);
    worst = std::max(worst, tail);
  }
  rep.report("riesz-tail-bound dominates tail quadrature", worst <= bound, worst, bound);
}

void check_concentration(CheckReporter& rep) {
  const double delta = 0.5, s = 3.0;
  auto ratio = [&](double eps) {
    auto f = [&](double y) { return std::pow(y * y + eps * eps, -0.5 * s); };
    double ball = 2.0 * integrate(f, 0.0, delta, 1e-4);
    double tail = 2.0 * integrate(f, delta, 1e4, 1e-10);
    return ball / tail;
  };
  double small = ratio(1e-3), large = ratio(1e-1);
  rep.report("riesz mass concentration ratio grows as epsilon shrinks", small > large,
             small / large, 1.0);
}

void check_chi2(CheckReporter& rep) {
  double worst = 0.0;
  for (double shift : {0.25, 0.5}) {
    double expected = std::exp(shift * shift) - 1.0;
    double measured =
        chi2_quadrature(gauss1d(shift, 1.0), gauss1d(0.0, 1.0), grid1d(-9.0, 9.5, 0.005));
    worst = std::max(worst, std::abs(measured - expected));
  }
  rep.report("chi2 quadrature vs closed-form shifted-gaussian value", worst < 1e-4, worst,
             1e-4);
  double forward =
      chi2_quadrature(gauss1d(0.0, 1.0), gauss1d(0.0, 2.0), grid1d(-17.0, 17.0, 0.01));
  double backward =
      chi2_quadrature(gauss1d(0.0, 2.0), gauss1d(0.0, 1.0), grid1d(-17.0, 17.0, 0.01));
  rep.report("chi2 asymmetry for unequal variances", std::abs(forward - backward) > 1e-3,
             std::abs(forward - backward), 1e-3, "must differ");
}

void check_mie_limit(CheckReporter& rep) {
  struct Pair {
    double q_mu;
    const char* name;
  };
  const Pair pairs[] = {{0.0, "identical"}, {0.5, "shifted"}};
  const double eps_values[] = {0.4, 0.2, 0.1, 0.05};
  for (const auto& pr : pairs) {
    double limit = std::exp(pr.q_mu * pr.q_mu);  // chi^2 + 1
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    double final_rel = 0.0;
    for (double eps : eps_values) {
      QuadratureGrid grid = grid1d(-8.0, 8.5, std::min(eps / 3.0, 0.02));
      double value = continuous_mie_quadrature(gauss1d(pr.q_mu, 1.0), gauss1d(0.0, 1.0),
                                               Mollifier::gaussian(eps), grid);
      double err = std::abs(value - limit);
      if (err > prev + 1e-12) monotone = false;
      prev = err;
      final_rel = err / limit;
    }
    rep.report(std::string("mie limit (") + pr.name + " pair): error shrinks with epsilon",
               monotone, prev, 0.0, "monotone over the sweep");
    rep.report(std::string("mie limit (") + pr.name + " pair): within 5% at smallest epsilon",
               final_rel < 0.05, final_rel, 0.05);
  }

  const double eps = 0.05;
  QuadratureGrid grid = grid1d(-8.0, 8.5, eps / 3.0);
  double g = continuous_mie_quadrature(gauss1d(0.5, 1.0), gauss1d(0.0, 1.0),
                                       Mollifier::gaussian(eps), grid);
  double l = continuous_mie_quadrature(gauss1d(0.5, 1.0), gauss1d(0.0, 1.0),
                                       Mollifier::laplace(eps), grid);
  double rel = std::abs(g - l) / std::max(std::abs(g), std::abs(l));
  rep.report("mie limit agrees across gaussian and laplace mollifiers", rel < 0.02, rel, 0.02);
}

void check_diagonal_bounding(CheckReporter& rep, double kappa_override) {
  Rng rng(1234);
  bool ok = true;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 50 && ok; ++trial) {
    int n = 2 + static_cast<int>(rng.uniform_index(10));
    int dim = 1 + static_cast<int>(rng.uniform_index(4));
    Eigen::MatrixXd x = rng.normal_matrix(n, dim);
    Eigen::VectorXd logp(n);
    for (int i = 0; i < n; ++i) logp[i] = rng.uniform(-1.0, 1.0);
    Mollifier m;
    switch (trial % 3) {
      case 0: m = Mollifier::riesz(dim + 0.5, 0.5); break;
      case 1: m = Mollifier::gaussian(0.7); break;
      default: m = Mollifier::laplace(0.6); break;
    }
    const double kappa =
        kappa_override > 0.0 ? kappa_override : diag_distance_scale(dim);
    Eigen::VectorXd h = nearest_neighbor_distances(x);

    // Exponent matrix assembled from scratch: the oracle route.
    Eigen::MatrixXd base(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        base(i, j) = i == j ? 0.0
                            : log_mollifier(m, (x.row(i) - x.row(j)).squaredNorm()) -
                                  0.5 * (logp[i] + logp[j]);
    auto logsumexp = [&](bool with_diag, double diag_sq_scale) {
      double peak = -std::numeric_limits<double>::infinity();
      std::vector<double> exps;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j && !with_diag) continue;
          double e = i == j ? log_mollifier(m, diag_sq_scale * h[i] * h[i]) - logp[i]
                            : base(i, j);
          exps.push_back(e);
          peak = std::max(peak, e);
        }
      double sum = 0.0;
      for (double e : exps) sum += std::exp(e - peak);
      return std::log(sum) + peak - 2.0 * std::log(static_cast<double>(n));
    };

    double at_zero = logsumexp(true, 0.0);
    double at_scaled = logsumexp(true, 1.0 / (kappa * kappa));
    double without = logsumexp(false, 0.0);
    ok = ok && (without <= at_scaled && at_scaled <= at_zero);
    // per-particle bracket: the replaced diagonal kernel value must sit
    // between the value at h_i and the value at zero
    for (int i = 0; i < n && ok; ++i) {
      double lo = log_mollifier(m, h[i] * h[i]);
      double mid = log_mollifier(m, (h[i] / kappa) * (h[i] / kappa));
      double hi = log_mollifier(m, 0.0);
      ok = lo <= mid && mid <= hi;
    }
    worst_gap = std::max(worst_gap, std::max(without - at_scaled, at_scaled - at_zero));
  }
  rep.report("diagonal replacement bounded between no-diagonal and zero-diagonal energies", ok,
             worst_gap, 0.0);
}

}  // namespace

int cmd_oracle_check(std::ostream& out, double kappa_override) {
  CheckReporter rep{out};
  check_ball_integrals(rep);
  check_tail_bound(rep);
  check_concentration(rep);
  check_chi2(rep);
  check_mie_limit(rep);
  check_diagonal_bounding(rep, kappa_override);
  out << (rep.all_ok ? "oracle-check: all checks passed\n"
                     : "oracle-check: FAILURES detected\n");
  return rep.all_ok ? 0 : 1;
}

}  // namespace mied
