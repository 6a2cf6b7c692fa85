#include "qbell/bellmax.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "qbell/errors.hpp"
#include "qbell/linalg.hpp"
#include "qbell/perfectness.hpp"

namespace qbell {

namespace {

void check_range(const QuditObservable& x, const char* name) {
  const RVector ev = x.eigenvalues();
  if (ev.minCoeff() < -1.0 - 1e-9 || ev.maxCoeff() > 1.0 + 1e-9) {
    throw ValidationError("eigenvalue-range", std::string(name) + " has eigenvalues outside [-1, 1]");
  }
}

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw DimensionError("sign must be +1 or -1");
}

std::uint64_t restart_seed(std::uint64_t seed, int restart) {
  auto rng = make_rng(seed, 0x5eed0000ULL + static_cast<std::uint64_t>(restart));
  return rng();
}

// Everything a restart needs; shared read-only between threads.
struct Problem {
  int d = 0;
  int sign = 1;
  const CMatrix* rho = nullptr;
  const CorrelationMatrix* t = nullptr;
  RMatrix span;  // certified eigenspace (Bloch coordinates)
  std::vector<QuditObservable> pool;
  std::vector<HermitianEigen> generator_eigs;
  BellMaxOptions opts;
};

double expect(const CMatrix& rho, const CMatrix& x, const CMatrix& y) {
  return tensor_trace(rho, x, y).real();
}

double objective(const Problem& p, const CMatrix& a, const CMatrix& b, const CMatrix& bt) {
  const CMatrix& rho = *p.rho;
  return std::abs(expect(rho, a, b) - expect(rho, a, bt)) + p.sign * expect(rho, b, bt);
}

bool perfect(const Problem& p, const CMatrix& b) {
  return std::abs(expect(*p.rho, b, b) - p.sign) <= p.opts.tol;
}

struct Iterate {
  CMatrix a, b, bt;
  double value = 0.0;
};

void step_a(const Problem& p, Iterate& it) {
  const auto first = optimal_first_setting(*p.t, to_bloch(it.b, 1e-8), to_bloch(it.bt, 1e-8));
  if (first.degenerate) return;
  const CMatrix cand = balanced_sign(from_bloch(first.a).matrix());
  const double v = objective(p, cand, it.b, it.bt);
  if (v >= it.value) it.a = cand, it.value = v;
}

void step_b_tilde(const Problem& p, Iterate& it) {
  const CMatrix na = reduce_first(*p.rho, it.a);
  const CMatrix nb = reduce_first(*p.rho, it.b);
  for (double branch : {-1.0, 1.0}) {
    const CMatrix cand = balanced_sign(branch * na + double(p.sign) * nb);
    const double v = objective(p, it.a, it.b, cand);
    if (v > it.value) it.bt = cand, it.value = v;
  }
}

// Moves of B that stay on the perfect-correlation constraint set.
void step_b(const Problem& p, Iterate& it, double& eps) {
  auto consider = [&](const CMatrix& start, int iters) {
    auto x = project_pm1_into_span(p.span, start, iters);
    if (!x || !perfect(p, x->matrix())) return false;
    const double v = objective(p, it.a, x->matrix(), it.bt);
    if (v <= it.value) return false;
    it.b = x->matrix();
    it.value = v;
    return true;
  };

  // Linear in B for fixed A, Bt: try the exact maximizer of each branch.
  const CMatrix na = reduce_first(*p.rho, it.a);
  const CMatrix mbt = reduce_second(*p.rho, it.bt);
  for (double branch : {-1.0, 1.0}) consider(branch * na + double(p.sign) * mbt, 50);

  if (eps < 1e-7) return;
  bool moved = false;
  for (const auto& g : p.generator_eigs) {
    for (double dir : {1.0, -1.0}) {
      const CMatrix u = unitary_exp(g, dir * eps);
      if (consider(u * it.b * u.adjoint(), 20)) {
        moved = true;
        break;
      }
    }
  }
  eps = moved ? std::min(1.0, 1.5 * eps) : 0.5 * eps;
}

struct RestartResult {
  RestartTrace trace;
  Iterate best;
  bool valid = false;
};

RestartResult run_restart(const Problem& p, int r) {
  RestartResult out;
  out.trace.restart = r;
  out.trace.seed = restart_seed(p.opts.seed, r);

  Iterate it;
  it.b = p.pool[r % p.pool.size()].matrix();
  if (p.opts.perturb_b && r >= static_cast<int>(p.pool.size())) {
    auto rng = make_rng(out.trace.seed, 1);
    std::normal_distribution<double> normal;
    RVector c(p.span.cols());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = normal(rng);
    const BlochVector dir(p.d, (p.span * c).normalized());
    if (auto x = project_pm1_into_span(p.span, from_bloch(dir).matrix())) {
      if (perfect(p, x->matrix())) it.b = x->matrix();
    }
  }
  it.bt = random_pm1_observable(p.d, out.trace.seed).matrix();
  it.a = random_pm1_observable(p.d, out.trace.seed ^ 0x9e3779b97f4a7c15ULL).matrix();
  it.value = objective(p, it.a, it.b, it.bt);

  double eps = 0.2;
  for (int iter = 0; iter < p.opts.max_iters; ++iter) {
    const double before = it.value;
    step_a(p, it);
    step_b_tilde(p, it);
    if (p.opts.perturb_b) step_b(p, it, eps);
    out.trace.values.push_back(it.value);
    out.trace.iterations = iter + 1;
    const bool b_still_moving = p.opts.perturb_b && eps >= 1e-7;
    if (it.value - before <= p.opts.tol && !b_still_moving) {
      out.trace.converged = true;
      break;
    }
  }
  out.trace.value = it.value;
  out.valid = perfect(p, it.b);
  out.best = std::move(it);
  return out;
}

}  // namespace

double bell_expression(const TwoQuditState& state, const QuditObservable& a,
                       const QuditObservable& b, const QuditObservable& b_tilde, int sign) {
  check_sign(sign);
  for (const auto* x : {&a, &b, &b_tilde}) {
    if (x->dim() != state.dim()) throw DimensionError("observable dimension does not match the state");
  }
  check_range(a, "A");
  check_range(b, "B");
  check_range(b_tilde, "B~");
  const CMatrix& rho = state.rho();
  return std::abs(expect(rho, a.matrix(), b.matrix()) - expect(rho, a.matrix(), b_tilde.matrix())) +
         sign * expect(rho, b.matrix(), b_tilde.matrix());
}

double bell_expression_bloch(const CorrelationMatrix& t, const BlochVector& a, const BlochVector& b,
                             const BlochVector& b_tilde, int sign) {
  check_sign(sign);
  if (a.dim != t.dim() || b.dim != t.dim() || b_tilde.dim != t.dim()) {
    throw DimensionError("Bloch vector dimension does not match the correlation matrix");
  }
  const RMatrix& m = t.matrix();
  const double first = a.coords.dot(m * (b.coords - b_tilde.coords));
  const double second = b.coords.dot(m * b_tilde.coords);
  return 0.5 * t.dim() * (std::abs(first) + sign * second);
}

FirstSetting optimal_first_setting(const CorrelationMatrix& t, const BlochVector& b,
                                   const BlochVector& b_tilde) {
  const RVector dir = t.matrix() * (b.coords - b_tilde.coords);
  const double n = dir.norm();
  if (n < 1e-12) {
    RVector e = RVector::Zero(dir.size());
    e(0) = 1.0;
    return {BlochVector(t.dim(), e), true};
  }
  return {BlochVector(t.dim(), dir / n), false};
}

double scalar_bound_objective(double z) { return std::sqrt(2.0 * (1.0 - z)) + z; }

ScalarBound scalar_bound() {
  // The objective is concave on [-1, 1]; golden-section search.
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -1.0, hi = 1.0;
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = scalar_bound_objective(x1), f2 = scalar_bound_objective(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = scalar_bound_objective(x2);
    } else {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = scalar_bound_objective(x1);
    }
  }
  const double z = 0.5 * (lo + hi);
  return {scalar_bound_objective(z), z};
}

BellMaxReport maximize_bell(const TwoQuditState& state, int sign, const BellMaxOptions& opts) {
  check_sign(sign);
  const auto started = std::chrono::steady_clock::now();
  const int d = state.dim();
  if (opts.restarts < 1) throw DimensionError("at least one restart is required");

  const CorrelationMatrix t = correlation_matrix(state);
  Problem p;
  p.d = d;
  p.sign = sign;
  p.rho = &state.rho();
  p.t = &t;
  p.opts = opts;
  p.pool = find_perfect_observables(state, sign, std::max(1, opts.witness_pool), opts.seed, opts.tol);
  for (const auto& c : t.spectrum().clusters) {
    if (std::abs(c.value - sign * 2.0 / d) <= opts.tol) p.span = c.vectors;
  }
  const auto basis = shared_basis(d);
  for (const auto& g : basis->generators()) p.generator_eigs.push_back(hermitian_eigen(g));

  std::vector<RestartResult> results(opts.restarts);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < opts.restarts; r = next++) {
      results[r] = run_restart(p, r);
      if (opts.progress) opts.progress(r, results[r].trace.value);
    }
  };
  int threads = opts.threads > 0 ? opts.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, opts.restarts);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  BellMaxReport report;
  report.dim = d;
  report.sign = sign;
  report.restarts = opts.restarts;
  report.best_value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < opts.restarts; ++r) {
    auto& res = results[r];
    if (res.trace.converged) ++report.converged_restarts;
    if (res.valid && res.trace.value > report.best_value) {
      report.best_value = res.trace.value;
      report.best_restart = r;
    }
    report.traces.push_back(std::move(res.trace));
  }
  if (report.best_restart < 0) {
    throw CertificationError("no restart kept B on the perfect-correlation constraint");
  }
  const Iterate& best = results[report.best_restart].best;
  report.best_a = round_to_pm1(best.a);
  report.best_b = QuditObservable::from_matrix(best.b, 1e-8);
  report.best_b_tilde = round_to_pm1(best.bt);
  report.best_value = bell_expression(state, report.best_a, report.best_b, report.best_b_tilde, sign);
  const auto cert = check_bell_condition(state, report.best_b, opts.tol);
  report.b_perfect_residual = std::abs(cert.value - sign);
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

double exhaustive_qubit_max(const TwoQuditState& state, int sign, int grid_steps) {
  check_sign(sign);
  if (state.dim() != 2) throw DimensionError("the exhaustive oracle is defined for two qubits only");
  if (grid_steps < 2) throw DimensionError("grid_steps must be >= 2");
  const CorrelationMatrix t = correlation_matrix(state);
  const SymmetricSpectrum& spec = t.spectrum();
  const SpectralCluster* cluster = nullptr;
  for (const auto& c : spec.clusters) {
    if (std::abs(c.value - sign) <= 1e-9) cluster = &c;
  }
  if (cluster == nullptr || std::abs(spec.spectral_norm - 1.0) > 1e-9) {
    throw CertificationError("state has no perfect correlations of the requested sign");
  }
  const double pi = std::acos(-1.0);
  std::vector<Eigen::Vector3d> grid;
  for (int i = 0; i <= grid_steps; ++i) {
    const double theta = pi * i / grid_steps;
    const int n_phi = (i == 0 || i == grid_steps) ? 1 : grid_steps;
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * pi * j / grid_steps;
      grid.emplace_back(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                        std::cos(theta));
    }
  }
  const Eigen::Matrix3d m = t.matrix();
  const Eigen::MatrixXd& v = cluster->vectors;
  const Eigen::Matrix3d proj = v * v.transpose();

  // Grid points within about one grid spacing of the eigenspace, snapped onto it.
  const double band = 1.5 * std::sin(pi / grid_steps);
  std::vector<Eigen::Vector3d> b_points;
  for (const auto& u : grid) {
    const Eigen::Vector3d pu = proj * u;
    if ((u - pu).norm() <= band && pu.norm() > 1e-9) b_points.push_back(pu.normalized());
  }

  std::vector<Eigen::Vector3d> t_bt(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) t_bt[k] = m * grid[k];
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& b : b_points) {
    const Eigen::Vector3d tb = m * b;
    const Eigen::Vector3d ttb = m.transpose() * b;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      // max over unit a of |<a, T(b - bt)>| is ||T(b - bt)||
      const double val = (tb - t_bt[k]).norm() + sign * ttb.dot(grid[k]);
      best = std::max(best, val);
    }
  }
  return best;
}

}  // namespace qbell
