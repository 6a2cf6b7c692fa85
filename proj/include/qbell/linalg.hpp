#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qbell/types.hpp"

namespace qbell {

/// Eigen-decomposition of a hermitian matrix; eigenvalues ascending.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};

HermitianEigen hermitian_eigen(const CMatrix& h);

/// Largest absolute eigenvalue of a hermitian matrix.
double operator_norm(const CMatrix& h);

double max_abs_entry(const CMatrix& m);

/// Max-abs entry of (m - m^dagger).
double hermiticity_residual(const CMatrix& m);

/// Nearest traceless observable with spectrum {+1 (x d/2), -1 (x d/2)}:
/// the d/2 largest eigenvalues of the hermitian part of `h` are mapped to +1
/// and the rest to -1. This also maximizes Re tr[h X] over that set.
/// Requires an even dimension.
CMatrix balanced_sign(const CMatrix& h);

CMatrix kron(const CMatrix& x, const CMatrix& y);

/// Swap operator on C^d (x) C^d.
CMatrix swap_operator(int d);

/// tr[rho (x (x) y)] by direct index contraction over the d^2 x d^2 state.
Complex tensor_trace(const CMatrix& rho, const CMatrix& x, const CMatrix& y);

/// Tr_2[rho (I (x) y)], an operator on the first factor.
CMatrix reduce_second(const CMatrix& rho, const CMatrix& y);

/// Tr_1[rho (x (x) I)], an operator on the second factor.
CMatrix reduce_first(const CMatrix& rho, const CMatrix& x);

/// Haar-like unitary: QR orthonormalization of a complex Gaussian matrix.
CMatrix random_unitary(int d, std::mt19937_64& rng);

/// exp(i t h) for hermitian h given its eigen-decomposition.
CMatrix unitary_exp(const HermitianEigen& h, double t);

/// One group of (numerically) equal eigenvalues of a real symmetric matrix.
struct SpectralCluster {
  double value = 0.0;
  int multiplicity = 0;
  RMatrix vectors;  // orthonormal columns spanning the eigenspace
};

/// Full spectral data of a real symmetric matrix with clustered eigenvalues.
struct SymmetricSpectrum {
  RVector eigenvalues;  // ascending
  RMatrix eigenvectors;
  std::vector<SpectralCluster> clusters;  // ascending by value
  double spectral_norm = 0.0;
};

/// Eigenvalues closer than rel_tol * max(1, spectral norm) to the first
/// member of a running cluster are merged into it.
SymmetricSpectrum symmetric_spectrum(const RMatrix& t, double rel_tol);

/// Deterministic per-stream generator derived from (seed, stream).
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace qbell
