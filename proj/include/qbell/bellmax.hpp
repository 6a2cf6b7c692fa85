#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qbell/bloch.hpp"
#include "qbell/states.hpp"

namespace qbell {

inline constexpr double kQuantumBound = 1.5;

/// |tr[rho (A (x) B)] - tr[rho (A (x) Bt)]| + sign * tr[rho (B (x) Bt)]
/// by direct traces. Observables must have eigenvalues in [-1, 1].
double bell_expression(const TwoQuditState& state, const QuditObservable& a,
                       const QuditObservable& b, const QuditObservable& b_tilde, int sign);

/// (d/2) (|<a, T (b - bt)>| + sign * <b, T bt>).
double bell_expression_bloch(const CorrelationMatrix& t, const BlochVector& a, const BlochVector& b,
                             const BlochVector& b_tilde, int sign);

struct FirstSetting {
  BlochVector a;
  bool degenerate = false;  // T (b - bt) vanished; `a` is an arbitrary unit vector
};

/// Unit vector T (b - bt) / ||T (b - bt)||, maximizing the first Bell term
/// over the unit sphere.
FirstSetting optimal_first_setting(const CorrelationMatrix& t, const BlochVector& b,
                                   const BlochVector& b_tilde);

/// sqrt(2 (1 - z)) + z.
double scalar_bound_objective(double z);

struct ScalarBound {
  double value = 0.0;
  double argmax = 0.0;
};

/// Maximum of scalar_bound_objective over [-1, 1].
ScalarBound scalar_bound();

struct BellMaxOptions {
  int restarts = 64;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  int max_iters = 500;
  int threads = 1;  // 0: hardware concurrency
  /// Also move B inside the certified eigenspace; otherwise B stays one of
  /// the certified observables returned by find_perfect_observables.
  bool perturb_b = true;
  int witness_pool = 16;
  /// Called once per finished restart, possibly from several threads.
  std::function<void(int restart, double value)> progress;
};

struct RestartTrace {
  int restart = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> values;  // objective after each iteration
};

struct BellMaxReport {
  int dim = 0;
  int sign = 1;
  double best_value = 0.0;
  int best_restart = -1;
  QuditObservable best_a;
  QuditObservable best_b;
  QuditObservable best_b_tilde;
  double b_perfect_residual = 0.0;  // |tr[rho (B (x) B)] - sign| at best_b
  int restarts = 0;
  int converged_restarts = 0;
  std::vector<RestartTrace> traces;
  double wall_time_seconds = 0.0;

  bool within_bound(double tol) const { return best_value <= kQuantumBound + tol; }
};

/// Maximizes the Bell expression over traceless +-1 observables A, Bt and
/// over B with tr[rho (B (x) B)] = sign, by multi-restart block ascent.
/// Needs an even dimension and an exchange-symmetric state; throws
/// CertificationError when no perfect observable of the requested sign exists.
BellMaxReport maximize_bell(const TwoQuditState& state, int sign, const BellMaxOptions& opts = {});

/// Brute-force two-qubit maximum: grid over the Bloch sphere for B and Bt,
/// with B restricted to grid points near the perfect-correlation eigenspace
/// (then snapped onto it) and A maximized in closed form.
double exhaustive_qubit_max(const TwoQuditState& state, int sign, int grid_steps);

/// |E(A1,B1) + E(A1,B2) + E(A2,B1) - E(A2,B2)|.
double chsh_value(const TwoQuditState& state, const QuditObservable& a1, const QuditObservable& a2,
                  const QuditObservable& b1, const QuditObservable& b2);

struct ChshResult {
  double value = 0.0;
  QuditObservable a1, a2, b1, b2;
};

/// Alternating exact maximization of the CHSH value over traceless +-1
/// observables (even d).
ChshResult maximize_chsh(const TwoQuditState& state, int restarts, std::uint64_t seed,
                         int max_iters = 200);

}  // namespace qbell
