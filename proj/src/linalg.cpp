#include "qbell/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "qbell/errors.hpp"

namespace qbell {

namespace {

int factor_dim(const CMatrix& rho, const CMatrix& op) {
  const int d = static_cast<int>(op.rows());
  if (op.cols() != d || rho.rows() != d * d || rho.cols() != d * d) {
    throw DimensionError("operator of size " + std::to_string(op.rows()) + "x" +
                         std::to_string(op.cols()) + " does not act on a factor of a " +
                         std::to_string(rho.rows()) + "-dimensional bipartite state");
  }
  return d;
}

}  // namespace

HermitianEigen hermitian_eigen(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error("hermitian eigendecomposition did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double operator_norm(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  const RVector& ev = solver.eigenvalues();
  return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

double max_abs_entry(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const CMatrix& m) { return max_abs_entry(m - m.adjoint()); }

CMatrix balanced_sign(const CMatrix& h) {
  const int d = static_cast<int>(h.rows());
  if (d % 2 != 0) {
    throw DimensionError("a balanced +/-1 spectrum needs an even dimension, got d=" +
                         std::to_string(d));
  }
  const CMatrix herm = 0.5 * (h + h.adjoint());
  const HermitianEigen eig = hermitian_eigen(herm);
  RVector signs(d);
  for (int i = 0; i < d; ++i) signs(i) = i < d / 2 ? -1.0 : 1.0;
  CMatrix out = eig.vectors * signs.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  return 0.5 * (out + out.adjoint());
}

CMatrix kron(const CMatrix& x, const CMatrix& y) {
  CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return out;
}

CMatrix swap_operator(int d) {
  CMatrix s = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) s(j * d + i, i * d + j) = 1.0;
  }
  return s;
}

Complex tensor_trace(const CMatrix& rho, const CMatrix& x, const CMatrix& y) {
  const int d = factor_dim(rho, x);
  factor_dim(rho, y);
  Complex acc = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
          acc += rho(i * d + j, k * d + l) * x(k, i) * y(l, j);
        }
      }
    }
  }
  return acc;
}

CMatrix reduce_second(const CMatrix& rho, const CMatrix& y) {
  const int d = factor_dim(rho, y);
  CMatrix out = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      Complex acc = 0.0;
      for (int j = 0; j < d; ++j) {
        for (int l = 0; l < d; ++l) acc += rho(i * d + j, k * d + l) * y(l, j);
      }
      out(i, k) = acc;
    }
  }
  return out;
}

CMatrix reduce_first(const CMatrix& rho, const CMatrix& x) {
  const int d = factor_dim(rho, x);
  CMatrix out = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    for (int l = 0; l < d; ++l) {
      Complex acc = 0.0;
      for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) acc += rho(i * d + j, k * d + l) * x(k, i);
      }
      out(j, l) = acc;
    }
  }
  return out;
}

CMatrix random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  // Fix the column phases so the distribution does not depend on the QR sign convention.
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CMatrix unitary_exp(const HermitianEigen& h, double t) {
  const Eigen::Index d = h.values.size();
  Eigen::VectorXcd phases(d);
  for (Eigen::Index i = 0; i < d; ++i) phases(i) = std::polar(1.0, t * h.values(i));
  return h.vectors * phases.asDiagonal() * h.vectors.adjoint();
}

SymmetricSpectrum symmetric_spectrum(const RMatrix& t, double rel_tol) {
  const RMatrix sym = 0.5 * (t + t.transpose());
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error("symmetric eigendecomposition did not converge");
  }
  SymmetricSpectrum out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  const Eigen::Index n = out.eigenvalues.size();
  if (n == 0) return out;
  out.spectral_norm =
      std::max(std::abs(out.eigenvalues(0)), std::abs(out.eigenvalues(n - 1)));
  const double tol = rel_tol * std::max(1.0, out.spectral_norm);

  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i == n || out.eigenvalues(i) - out.eigenvalues(start) > tol) {
      SpectralCluster c;
      c.multiplicity = static_cast<int>(i - start);
      c.value = out.eigenvalues.segment(start, i - start).mean();
      c.vectors = out.eigenvectors.middleCols(start, i - start);
      out.clusters.push_back(std::move(c));
      start = i;
    }
  }
  return out;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x71b3e11u};
  return std::mt19937_64(seq);
}

}  // namespace qbell
