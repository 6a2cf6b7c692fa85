#pragma once

#include <cstdint>
#include <span>

#include "qbell/gellmann.hpp"
#include "qbell/types.hpp"

namespace qbell {

inline constexpr double kDefaultMembershipTol = 1e-9;

/// Real coordinates of a traceless observable in the Gell-Mann basis,
/// indexed in generator order. Coordinates are not constrained on
/// construction; use is_admissible_bloch / is_pm1_bloch for membership.
struct BlochVector {
  int dim = 0;
  RVector coords;

  BlochVector() = default;
  /// Throws DimensionError unless coords.size() == d^2 - 1.
  BlochVector(int d, RVector coords);

  double norm() const { return coords.norm(); }
};

/// Radius of the smallest ball containing every admissible Bloch vector:
/// 1 for even d, sqrt((d-1)/d) for odd d.
double bloch_radius(int d);

/// Sum_j r_j G_j (no normalization factor).
CMatrix generator_combination(const BlochVector& r);

/// r_j = tr[X G_j] / sqrt(2d). Throws ValidationError (reporting the
/// residual) when X is not hermitian or not traceless within `tol`.
BlochVector to_bloch(const CMatrix& x, double tol = 1e-10);

/// A traceless hermitian d x d observable together with its Bloch vector
/// under X = sqrt(d/2) (r . G). Immutable.
class QuditObservable {
 public:
  QuditObservable() = default;

  /// Validates hermiticity and tracelessness.
  static QuditObservable from_matrix(const CMatrix& x, double tol = 1e-10);
  static QuditObservable from_bloch(const BlochVector& r);

  int dim() const noexcept { return bloch_.dim; }
  const CMatrix& matrix() const noexcept { return matrix_; }
  const BlochVector& bloch() const noexcept { return bloch_; }

  RVector eigenvalues() const;
  double operator_norm() const;

 private:
  QuditObservable(CMatrix m, BlochVector b) : matrix_(std::move(m)), bloch_(std::move(b)) {}

  CMatrix matrix_;
  BlochVector bloch_;
};

inline QuditObservable from_bloch(const BlochVector& r) { return QuditObservable::from_bloch(r); }

/// Bloch image of observables with eigenvalues in [-1, 1]:
/// operator norm of (r . G) at most sqrt(2/d) + tol.
bool is_admissible_bloch(const BlochVector& r, double tol = kDefaultMembershipTol);

/// Bloch image of traceless observables with spectrum {+1, -1}: unit vectors
/// with operator norm of (r . G) equal to sqrt(2/d). Always false for odd d.
bool is_pm1_bloch(const BlochVector& r, double tol = kDefaultMembershipTol);

/// Sum_m signs_m |m><m|. Needs even d, entries +-1 summing to zero.
QuditObservable make_diag_pm1(int d, std::span<const int> signs);

/// Sum_{m odd} (-1)^gamma (|m+1><m| + |m><m+1|); one gamma per 2x2 block.
QuditObservable make_offdiag_real_pm1(int d, std::span<const int> gammas);

/// Sum_{m odd} (-1)^gamma (-i|m+1><m| + i|m><m+1|); one gamma per 2x2 block.
QuditObservable make_offdiag_imag_pm1(int d, std::span<const int> gammas);

/// U D U^dagger with D = diag(+1 x d/2, -1 x d/2) and U a unitary drawn
/// deterministically from `seed`.
QuditObservable random_pm1_observable(int d, std::uint64_t seed);

/// Nearest observable with balanced +-1 spectrum (see balanced_sign).
QuditObservable round_to_pm1(const CMatrix& x);

}  // namespace qbell
