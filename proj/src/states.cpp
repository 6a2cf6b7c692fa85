#include "qbell/states.hpp"

#include <cmath>
#include <mutex>
#include <string>

#include "qbell/errors.hpp"

namespace qbell {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

TwoQuditState TwoQuditState::from_density(int d, const CMatrix& rho, const StateTolerances& tol) {
  if (d < 2) throw DimensionError("qudit dimension must be >= 2, got " + std::to_string(d));
  if (rho.rows() != d * d || rho.cols() != d * d) {
    throw DimensionError("density matrix for d=" + std::to_string(d) + " must be " +
                         std::to_string(d * d) + "x" + std::to_string(d * d));
  }
  if (!rho.allFinite()) throw ValidationError("finite", "density matrix has non-finite entries");
  const double herm = hermiticity_residual(rho);
  if (herm > tol.hermitian) {
    throw ValidationError("hermitian", "density matrix is not hermitian: max |rho - rho^dagger| = " +
                                           fmt(herm));
  }
  const double tr_err = std::abs(rho.trace() - 1.0);
  if (tr_err > tol.trace) {
    throw ValidationError("unit-trace", "density matrix trace differs from 1 by " + fmt(tr_err));
  }
  CMatrix h = 0.5 * (rho + rho.adjoint());
  const double min_ev = hermitian_eigen(h).values.minCoeff();
  if (min_ev < tol.min_eigenvalue) {
    throw ValidationError("positive-semidefinite",
                          "density matrix is not positive semidefinite: min eigenvalue = " + fmt(min_ev));
  }
  const CMatrix s = swap_operator(d);
  const bool sym = max_abs_entry(s * h * s - h) <= tol.symmetry;
  return {d, std::move(h), sym};
}

TwoQuditState ghz(int d) {
  if (d < 2) throw DimensionError("qudit dimension must be >= 2, got " + std::to_string(d));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d * d);
  for (int j = 0; j < d; ++j) psi(j * d + j) = 1.0 / std::sqrt(static_cast<double>(d));
  return pure_state(d, psi);
}

TwoQuditState maximally_mixed(int d) {
  if (d < 2) throw DimensionError("qudit dimension must be >= 2, got " + std::to_string(d));
  return TwoQuditState::from_density(d, CMatrix::Identity(d * d, d * d) / double(d * d));
}

TwoQuditState pure_state(int d, const Eigen::VectorXcd& psi) {
  if (psi.size() != d * d) throw DimensionError("state vector must have length d^2");
  return TwoQuditState::from_density(d, psi * psi.adjoint());
}

TwoQuditState product_state(const CMatrix& rho_a, const CMatrix& rho_b) {
  if (rho_a.rows() != rho_b.rows()) throw DimensionError("product factors must share a dimension");
  return TwoQuditState::from_density(static_cast<int>(rho_a.rows()), kron(rho_a, rho_b));
}

TwoQuditState mixture(std::span<const TwoQuditState> states, std::span<const double> weights) {
  if (states.empty() || states.size() != weights.size()) {
    throw DimensionError("mixture needs one weight per state");
  }
  const int d = states.front().dim();
  CMatrix rho = CMatrix::Zero(d * d, d * d);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != d) throw DimensionError("mixture components must share a dimension");
    rho += weights[i] * states[i].rho();
  }
  return TwoQuditState::from_density(d, rho, {1e-10, 1e-10, -1e-10, 1e-12});
}

TwoQuditState local_rotation(const TwoQuditState& state, const CMatrix& u) {
  const CMatrix uu = kron(u, u);
  return TwoQuditState::from_density(state.dim(), uu * state.rho() * uu.adjoint(),
                                     {1e-10, 1e-10, -1e-10, 1e-10});
}

bool is_symmetric(const TwoQuditState& state, double tol) {
  const CMatrix s = swap_operator(state.dim());
  return max_abs_entry(s * state.rho() * s - state.rho()) <= tol;
}

struct CorrelationMatrix::Lazy {
  std::once_flag once;
  SymmetricSpectrum spectrum;
};

CorrelationMatrix::CorrelationMatrix(int d, RMatrix t)
    : dim_(d), t_(std::move(t)), lazy_(std::make_shared<Lazy>()) {
  if (t_.rows() != d * d - 1 || t_.cols() != d * d - 1) {
    throw DimensionError("correlation matrix for d=" + std::to_string(d) + " must be " +
                         std::to_string(d * d - 1) + " square");
  }
}

double CorrelationMatrix::asymmetry() const { return (t_ - t_.transpose()).cwiseAbs().maxCoeff(); }

const SymmetricSpectrum& CorrelationMatrix::spectrum() const {
  const double asym = asymmetry();
  if (asym > 1e-10) {
    throw ValidationError("symmetric-correlation",
                          "correlation matrix is not symmetric (max |T - T^T| = " + fmt(asym) +
                              "); the state must be exchange-symmetric");
  }
  std::call_once(lazy_->once, [this] { lazy_->spectrum = symmetric_spectrum(t_, kClusterTol); });
  return lazy_->spectrum;
}

CorrelationMatrix correlation_matrix(const TwoQuditState& state) {
  const int d = state.dim();
  const auto basis = shared_basis(d);
  const CMatrix& rho = state.rho();
  const int n = basis->size();
  RMatrix t(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      Complex acc = 0.0;
      for (const auto& x : basis->nonzeros(a)) {
        for (const auto& y : basis->nonzeros(b)) {
          acc += rho(x.col * d + y.col, x.row * d + y.row) * x.value * y.value;
        }
      }
      t(a, b) = acc.real();
    }
  }
  return {d, std::move(t)};
}

double product_expectation(const TwoQuditState& state, const QuditObservable& a,
                           const QuditObservable& b) {
  if (a.dim() != state.dim() || b.dim() != state.dim()) {
    throw DimensionError("observable dimension does not match the state");
  }
  return tensor_trace(state.rho(), a.matrix(), b.matrix()).real();
}

double bloch_expectation(const CorrelationMatrix& t, const BlochVector& a, const BlochVector& b) {
  if (a.dim != t.dim() || b.dim != t.dim()) {
    throw DimensionError("Bloch vector dimension does not match the correlation matrix");
  }
  return 0.5 * t.dim() * a.coords.dot(t.matrix() * b.coords);
}

}  // namespace qbell
