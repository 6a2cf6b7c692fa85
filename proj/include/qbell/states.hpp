#pragma once

#include <memory>

#include "qbell/bloch.hpp"
#include "qbell/linalg.hpp"
#include "qbell/types.hpp"

namespace qbell {

struct StateTolerances {
  double hermitian = 1e-12;
  double trace = 1e-12;
  double min_eigenvalue = -1e-10;
  double symmetry = 1e-12;
};

/// Density matrix on C^d (x) C^d, index (i, j) -> i * d + j.
/// Hermitian, unit trace and positive semidefinite; `symmetric()` caches
/// whether the state is invariant under exchange of the two factors.
class TwoQuditState {
 public:
  /// Validates every invariant; throws ValidationError naming the failing one.
  static TwoQuditState from_density(int d, const CMatrix& rho, const StateTolerances& tol = {});

  int dim() const noexcept { return dim_; }
  const CMatrix& rho() const noexcept { return rho_; }
  bool symmetric() const noexcept { return symmetric_; }

 private:
  TwoQuditState(int d, CMatrix rho, bool sym) : dim_(d), rho_(std::move(rho)), symmetric_(sym) {}

  int dim_ = 0;
  CMatrix rho_;
  bool symmetric_ = false;
};

/// (1/d) Sum_{j,k} |j><k| (x) |j><k|.
TwoQuditState ghz(int d);

TwoQuditState maximally_mixed(int d);

/// |psi><psi| for a normalized vector of length d^2.
TwoQuditState pure_state(int d, const Eigen::VectorXcd& psi);

/// rho_a (x) rho_b.
TwoQuditState product_state(const CMatrix& rho_a, const CMatrix& rho_b);

/// Sum_i w_i rho_i for weights summing to one.
TwoQuditState mixture(std::span<const TwoQuditState> states, std::span<const double> weights);

/// (U (x) U) rho (U (x) U)^dagger; preserves exchange symmetry.
TwoQuditState local_rotation(const TwoQuditState& state, const CMatrix& u);

/// Swap-conjugated rho equals rho within tol (max-abs entry).
bool is_symmetric(const TwoQuditState& state, double tol = 1e-12);

/// Real (d^2-1) x (d^2-1) matrix T(n, m) = tr[rho (G_n (x) G_m)].
/// Spectral data is computed once on first request and is thread-safe.
class CorrelationMatrix {
 public:
  CorrelationMatrix(int d, RMatrix t);

  int dim() const noexcept { return dim_; }
  const RMatrix& matrix() const noexcept { return t_; }
  double operator()(int n, int m) const { return t_(n, m); }

  /// max-abs entry of T - T^T.
  double asymmetry() const;

  /// Throws ValidationError when T is not symmetric within 1e-10.
  const SymmetricSpectrum& spectrum() const;

  double spectral_norm() const { return spectrum().spectral_norm; }

 private:
  struct Lazy;

  int dim_ = 0;
  RMatrix t_;
  std::shared_ptr<Lazy> lazy_;
};

inline constexpr double kClusterTol = 1e-8;

CorrelationMatrix correlation_matrix(const TwoQuditState& state);

/// tr[rho (A (x) B)] by direct trace.
double product_expectation(const TwoQuditState& state, const QuditObservable& a,
                           const QuditObservable& b);

/// (d/2) <a, T b>; agrees with product_expectation for the matching observables.
double bloch_expectation(const CorrelationMatrix& t, const BlochVector& a, const BlochVector& b);

}  // namespace qbell
