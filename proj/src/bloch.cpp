#include "qbell/bloch.hpp"

#include <cmath>
#include <string>

#include "qbell/errors.hpp"
#include "qbell/linalg.hpp"

namespace qbell {

namespace {

void require_even(int d, const char* what) {
  if (d < 2 || d % 2 != 0) {
    throw DimensionError(std::string(what) + " needs an even dimension >= 2, got d=" +
                         std::to_string(d));
  }
}

double sign_of_parity(int gamma) { return gamma % 2 == 0 ? 1.0 : -1.0; }

void check_gammas(int d, std::span<const int> gammas) {
  if (static_cast<int>(gammas.size()) != d / 2) {
    throw DimensionError("expected " + std::to_string(d / 2) + " block exponents, got " +
                         std::to_string(gammas.size()));
  }
}

}  // namespace

BlochVector::BlochVector(int d, RVector c) : dim(d), coords(std::move(c)) {
  if (d < 2) throw DimensionError("qudit dimension must be >= 2, got " + std::to_string(d));
  if (coords.size() != d * d - 1) {
    throw DimensionError("Bloch vector for d=" + std::to_string(d) + " needs " +
                         std::to_string(d * d - 1) + " coordinates, got " +
                         std::to_string(coords.size()));
  }
}

double bloch_radius(int d) {
  if (d < 2) throw DimensionError("qudit dimension must be >= 2, got " + std::to_string(d));
  return d % 2 == 0 ? 1.0 : std::sqrt((d - 1.0) / d);
}

CMatrix generator_combination(const BlochVector& r) {
  const auto basis = shared_basis(r.dim);
  CMatrix out = CMatrix::Zero(r.dim, r.dim);
  for (int j = 0; j < basis->size(); ++j) {
    for (const auto& e : basis->nonzeros(j)) out(e.row, e.col) += r.coords(j) * e.value;
  }
  return out;
}

BlochVector to_bloch(const CMatrix& x, double tol) {
  const int d = static_cast<int>(x.rows());
  if (x.cols() != d || d < 2) {
    throw DimensionError("observable must be a square matrix of size >= 2");
  }
  const double herm = hermiticity_residual(x);
  if (herm > tol) {
    throw ValidationError("hermitian",
                          "observable is not hermitian: max |X - X^dagger| = " + std::to_string(herm));
  }
  const double trace = std::abs(x.trace());
  if (trace > tol) {
    throw ValidationError("traceless", "observable is not traceless: |tr X| = " + std::to_string(trace));
  }
  const auto basis = shared_basis(d);
  RVector coords(basis->size());
  const double scale = 1.0 / std::sqrt(2.0 * d);
  for (int j = 0; j < basis->size(); ++j) {
    Complex acc = 0.0;
    for (const auto& e : basis->nonzeros(j)) acc += x(e.col, e.row) * e.value;
    coords(j) = scale * acc.real();
  }
  return {d, std::move(coords)};
}

QuditObservable QuditObservable::from_matrix(const CMatrix& x, double tol) {
  BlochVector b = to_bloch(x, tol);
  CMatrix m = 0.5 * (x + x.adjoint());
  return {std::move(m), std::move(b)};
}

QuditObservable QuditObservable::from_bloch(const BlochVector& r) {
  if (!r.coords.allFinite()) throw ValidationError("finite", "Bloch vector has non-finite entries");
  CMatrix m = std::sqrt(r.dim / 2.0) * generator_combination(r);
  return {std::move(m), r};
}

RVector QuditObservable::eigenvalues() const { return hermitian_eigen(matrix_).values; }

double QuditObservable::operator_norm() const { return qbell::operator_norm(matrix_); }

bool is_admissible_bloch(const BlochVector& r, double tol) {
  return qbell::operator_norm(generator_combination(r)) <= std::sqrt(2.0 / r.dim) + tol;
}

bool is_pm1_bloch(const BlochVector& r, double tol) {
  if (r.dim % 2 != 0) return false;
  const double op = qbell::operator_norm(generator_combination(r));
  return std::abs(op - std::sqrt(2.0 / r.dim)) <= tol && std::abs(r.norm() - 1.0) <= tol;
}

QuditObservable make_diag_pm1(int d, std::span<const int> signs) {
  require_even(d, "a +-1 diagonal observable");
  if (static_cast<int>(signs.size()) != d) {
    throw DimensionError("expected " + std::to_string(d) + " signs, got " +
                         std::to_string(signs.size()));
  }
  int sum = 0;
  CMatrix x = CMatrix::Zero(d, d);
  for (int m = 0; m < d; ++m) {
    if (signs[m] != 1 && signs[m] != -1) {
      throw ValidationError("pm1-signs", "diagonal entries must be +1 or -1");
    }
    sum += signs[m];
    x(m, m) = signs[m];
  }
  if (sum != 0) {
    throw ValidationError("traceless", "signs must sum to zero, got " + std::to_string(sum));
  }
  return QuditObservable::from_matrix(x);
}

QuditObservable make_offdiag_real_pm1(int d, std::span<const int> gammas) {
  require_even(d, "a +-1 block observable");
  check_gammas(d, gammas);
  CMatrix x = CMatrix::Zero(d, d);
  for (int b = 0; b < d / 2; ++b) {
    const double s = sign_of_parity(gammas[b]);
    x(2 * b + 1, 2 * b) = s;
    x(2 * b, 2 * b + 1) = s;
  }
  return QuditObservable::from_matrix(x);
}

QuditObservable make_offdiag_imag_pm1(int d, std::span<const int> gammas) {
  require_even(d, "a +-1 block observable");
  check_gammas(d, gammas);
  const Complex i_unit(0.0, 1.0);
  CMatrix x = CMatrix::Zero(d, d);
  for (int b = 0; b < d / 2; ++b) {
    const double s = sign_of_parity(gammas[b]);
    x(2 * b + 1, 2 * b) = -s * i_unit;
    x(2 * b, 2 * b + 1) = s * i_unit;
  }
  return QuditObservable::from_matrix(x);
}

QuditObservable random_pm1_observable(int d, std::uint64_t seed) {
  require_even(d, "a random +-1 observable");
  auto rng = make_rng(seed);
  const CMatrix u = random_unitary(d, rng);
  Eigen::VectorXcd diag(d);
  for (int i = 0; i < d; ++i) diag(i) = i < d / 2 ? 1.0 : -1.0;
  CMatrix x = u * diag.asDiagonal() * u.adjoint();
  x = 0.5 * (x + x.adjoint());
  return QuditObservable::from_matrix(x, 1e-9);
}

QuditObservable round_to_pm1(const CMatrix& x) {
  return QuditObservable::from_matrix(balanced_sign(x), 1e-9);
}

}  // namespace qbell
