#include "qbell/perfectness.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "qbell/detail/nelder_mead.hpp"
#include "qbell/errors.hpp"
#include "qbell/linalg.hpp"

namespace qbell {

namespace {

constexpr int kCanonicalCap = 64;

void require_even_symmetric(const TwoQuditState& state) {
  const int d = state.dim();
  if (d % 2 != 0) {
    throw DimensionError("perfect-correlation certification needs an even dimension: for d=" +
                         std::to_string(d) + " there is no traceless observable with eigenvalues +-1");
  }
  if (!state.symmetric()) {
    throw ValidationError("symmetric-state", "state is not invariant under exchange of the two qudits");
  }
}

// Balanced sign patterns, reflected binary gamma patterns for both
// off-diagonal families; capped per family.
std::vector<QuditObservable> canonical_pm1_candidates(int d) {
  std::vector<QuditObservable> out;
  std::vector<int> mask(d, 0);
  std::fill(mask.begin(), mask.begin() + d / 2, 1);
  int count = 0;
  do {
    std::vector<int> signs(d);
    for (int m = 0; m < d; ++m) signs[m] = mask[m] ? 1 : -1;
    out.push_back(make_diag_pm1(d, signs));
  } while (++count < kCanonicalCap && std::prev_permutation(mask.begin(), mask.end()));

  const int blocks = d / 2;
  const long patterns = blocks >= 20 ? kCanonicalCap : std::min<long>(1L << blocks, kCanonicalCap);
  for (long p = 0; p < patterns; ++p) {
    std::vector<int> gammas(blocks);
    for (int b = 0; b < blocks; ++b) gammas[b] = static_cast<int>((p >> b) & 1);
    out.push_back(make_offdiag_real_pm1(d, gammas));
  }
  for (long p = 0; p < patterns; ++p) {
    std::vector<int> gammas(blocks);
    for (int b = 0; b < blocks; ++b) gammas[b] = static_cast<int>((p >> b) & 1);
    out.push_back(make_offdiag_imag_pm1(d, gammas));
  }
  return out;
}

double pm1_residual(const RVector& v, int d) {
  const double n = v.norm();
  if (n == 0.0) return std::numeric_limits<double>::infinity();
  const BlochVector unit(d, v / n);
  return std::abs(operator_norm(generator_combination(unit)) - std::sqrt(2.0 / d));
}

double eigen_residual(const CorrelationMatrix& t, const BlochVector& v, double lambda) {
  return (t.matrix() * v.coords - lambda * v.coords).norm();
}

struct SearchOutcome {
  std::optional<QuditObservable> observable;
  double residual = std::numeric_limits<double>::infinity();
};

// One restart of the numerical witness search inside span(V).
SearchOutcome search_restart(const RMatrix& v, int d, std::uint64_t seed, int restart,
                             int max_iters, double tol) {
  auto rng = make_rng(seed, static_cast<std::uint64_t>(restart) + 1);
  std::normal_distribution<double> normal;
  RVector c(v.cols());
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = normal(rng);
  const BlochVector start(d, (v * c).normalized());

  SearchOutcome out;
  if (auto x = project_pm1_into_span(v, from_bloch(start).matrix(), max_iters, tol)) {
    out.residual = 0.0;
    out.observable = std::move(x);
    return out;
  }
  // Simplex refinement of the operator-norm residual over the eigenspace sphere.
  auto f = [&](const RVector& coeffs) { return pm1_residual(v * coeffs, d); };
  const auto res = detail::nelder_mead(f, c.normalized(), 0.25, 200 * static_cast<int>(c.size() + 1),
                                       1e-15);
  out.residual = res.value;
  if (res.value <= tol) {
    const BlochVector refined(d, (v * res.x).normalized());
    if (auto x = project_pm1_into_span(v, from_bloch(refined).matrix(), max_iters, tol)) {
      out.observable = std::move(x);
      out.residual = 0.0;
    }
  }
  return out;
}

// v and -v are equally valid witnesses; report the one whose first
// significant coordinate is positive.
BlochVector sign_normalized(const BlochVector& r) {
  for (Eigen::Index j = 0; j < r.coords.size(); ++j) {
    if (std::abs(r.coords(j)) > 1e-9) return r.coords(j) < 0 ? BlochVector(r.dim, (-r.coords).array() + 0.0) : r;
  }
  return r;
}

SignWitness search_witness(const CorrelationMatrix& t, const SpectralCluster& cluster, int sign,
                           double tol, const WitnessSearchOptions& opts) {
  const int d = t.dim();
  SignWitness w;
  w.sign = sign;
  w.eigenvalue = cluster.value;
  w.multiplicity = cluster.multiplicity;
  w.best_residual = std::numeric_limits<double>::infinity();
  const RMatrix& v = cluster.vectors;

  auto accept = [&](const BlochVector& cand) {
    return is_pm1_bloch(cand, tol) && eigen_residual(t, cand, cluster.value) <= tol;
  };

  for (const auto& cand : canonical_pm1_candidates(d)) {
    const RVector p = v * (v.transpose() * cand.bloch().coords);
    if (p.norm() < 1e-8) continue;
    const BlochVector unit(d, p.normalized());
    w.best_residual = std::min(w.best_residual, pm1_residual(unit.coords, d));
    if (accept(unit)) {
      w.witness = sign_normalized(unit);
      w.source = "canonical";
      w.best_residual = pm1_residual(unit.coords, d);
      return w;
    }
  }
  for (int r = 0; r < opts.restarts; ++r) {
    ++w.restarts_used;
    auto outcome = search_restart(v, d, opts.seed, r, opts.max_iters, tol);
    w.best_residual = std::min(w.best_residual, outcome.residual);
    if (outcome.observable && accept(outcome.observable->bloch())) {
      w.witness = sign_normalized(outcome.observable->bloch());
      w.source = "search";
      w.best_residual = pm1_residual(w.witness->coords, d);
      return w;
    }
  }
  return w;
}

}  // namespace

PerfectnessCertificate check_bell_condition(const TwoQuditState& state, const QuditObservable& b,
                                            double tol) {
  if (b.dim() != state.dim()) throw DimensionError("observable dimension does not match the state");
  const HermitianEigen eig = hermitian_eigen(b.matrix());
  const double lo = eig.values.minCoeff();
  const double hi = eig.values.maxCoeff();
  if (lo < -1.0 - tol || hi > 1.0 + tol) {
    throw ValidationError("eigenvalue-range", "observable eigenvalues must lie in [-1, 1], got [" +
                                                  std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }

  PerfectnessCertificate cert;
  cert.observable = b;
  cert.value = tensor_trace(state.rho(), b.matrix(), b.matrix()).real();
  cert.sign = cert.value >= 0.0 ? 1 : -1;
  cert.residual = std::abs(cert.value - cert.sign);
  cert.operator_norm = std::max(std::abs(lo), std::abs(hi));

  // Eigenprojections of B, grouping numerically equal eigenvalues.
  std::vector<std::pair<double, CMatrix>> projections;
  const int d = b.dim();
  int start = 0;
  for (int i = 1; i <= d; ++i) {
    if (i == d || eig.values(i) - eig.values(start) > kClusterTol) {
      const CMatrix cols = eig.vectors.middleCols(start, i - start);
      projections.emplace_back(eig.values.segment(start, i - start).mean(), cols * cols.adjoint());
      start = i;
    }
  }
  for (const auto& [li, ei] : projections) {
    for (const auto& [lk, ek] : projections) {
      if (std::abs(li * lk - cert.sign) <= tol) continue;
      const double p = tensor_trace(state.rho(), ei, ek).real();
      if (p > tol) cert.spectral_violations.push_back({li, lk, p});
    }
  }
  cert.accepted = cert.residual <= tol && cert.spectral_violations.empty() &&
                  std::abs(cert.operator_norm - 1.0) <= tol;
  return cert;
}

SymmetricSpectrum eig_T(const CorrelationMatrix& t, double rel_tol) {
  const double asym = t.asymmetry();
  if (asym > 1e-10) {
    throw ValidationError("symmetric-correlation",
                          "correlation matrix is not symmetric: max |T - T^T| = " + std::to_string(asym));
  }
  return symmetric_spectrum(t.matrix(), rel_tol);
}

bool bell_condition_spectral_form(const CorrelationMatrix& t, const BlochVector& b, int sign,
                                  double tol) {
  if (sign != 1 && sign != -1) throw DimensionError("sign must be +1 or -1");
  if (b.dim != t.dim()) throw DimensionError("Bloch vector dimension does not match the correlation matrix");
  if (std::abs(b.norm() - 1.0) > tol) {
    throw ValidationError("unit-vector", "Bloch vector must be a unit vector, norm = " +
                                             std::to_string(b.norm()));
  }
  const SymmetricSpectrum& spec = t.spectrum();
  const RVector beta = spec.eigenvectors.transpose() * b.coords;
  const double target = sign * 2.0 / t.dim();
  double acc = 0.0;
  for (Eigen::Index m = 0; m < beta.size(); ++m) {
    acc += (spec.eigenvalues(m) - target) * beta(m) * beta(m);
  }
  return std::abs(acc) <= tol;
}

std::optional<QuditObservable> project_pm1_into_span(const RMatrix& v, const CMatrix& start,
                                                     int max_iters, double tol) {
  const int d = static_cast<int>(start.rows());
  CMatrix x = balanced_sign(start);
  for (int it = 0; it <= max_iters; ++it) {
    const BlochVector r = to_bloch(x, 1e-8);
    const RVector p = v * (v.transpose() * r.coords);
    if ((r.coords - p).norm() <= tol) return QuditObservable::from_matrix(x, 1e-8);
    const double pn = p.norm();
    if (pn < 1e-12 || it == max_iters) break;
    x = balanced_sign(from_bloch(BlochVector(d, p / pn)).matrix());
  }
  return std::nullopt;
}

ClassMembership certify_perfect_class(const TwoQuditState& state, double tol,
                                      const WitnessSearchOptions& opts) {
  require_even_symmetric(state);
  const int d = state.dim();
  const CorrelationMatrix t = correlation_matrix(state);
  const SymmetricSpectrum& spec = t.spectrum();
  const double target = 2.0 / d;

  ClassMembership out;
  out.spectral_norm = spec.spectral_norm;
  out.extreme_eigenvalue = std::abs(spec.clusters.back().value) >= std::abs(spec.clusters.front().value)
                               ? spec.clusters.back().value
                               : spec.clusters.front().value;
  out.best_residual = std::numeric_limits<double>::infinity();
  if (std::abs(spec.spectral_norm - target) > tol) return out;

  for (int sign : {1, -1}) {
    for (const auto& cluster : spec.clusters) {
      if (std::abs(cluster.value - sign * target) > tol) continue;
      SignWitness w = search_witness(t, cluster, sign, tol, opts);
      out.restarts_used += w.restarts_used;
      out.best_residual = std::min(out.best_residual, w.best_residual);
      if (w.witness && !out.in_class) {
        out.in_class = true;
        out.extreme_eigenvalue = w.eigenvalue;
        out.witness_vector = w.witness;
      }
      out.signs.push_back(std::move(w));
    }
  }
  return out;
}

std::vector<QuditObservable> find_perfect_observables(const TwoQuditState& state, int sign,
                                                      int count, std::uint64_t seed, double tol) {
  if (sign != 1 && sign != -1) throw DimensionError("sign must be +1 or -1");
  require_even_symmetric(state);
  const int d = state.dim();
  const CorrelationMatrix t = correlation_matrix(state);
  const SymmetricSpectrum& spec = t.spectrum();
  const double target = 2.0 / d;
  if (std::abs(spec.spectral_norm - target) > tol) {
    throw CertificationError("spectral norm of the correlation matrix is " +
                             std::to_string(spec.spectral_norm) + ", not 2/d = " + std::to_string(target));
  }
  const SpectralCluster* cluster = nullptr;
  for (const auto& c : spec.clusters) {
    if (std::abs(c.value - sign * target) <= tol) cluster = &c;
  }
  if (cluster == nullptr) {
    throw CertificationError(std::string("no eigenvalue ") + (sign > 0 ? "+" : "-") +
                             "2/d in the correlation spectrum");
  }
  const RMatrix& v = cluster->vectors;

  std::vector<QuditObservable> out;
  auto try_add = [&](const QuditObservable& b) {
    if (static_cast<int>(out.size()) >= count) return;
    for (const auto& e : out) {
      if ((e.bloch().coords - b.bloch().coords).norm() < 1e-6) return;
    }
    const auto cert = check_bell_condition(state, b, tol);
    if (cert.accepted && cert.sign == sign) out.push_back(b);
  };

  for (const auto& cand : canonical_pm1_candidates(d)) {
    const RVector p = v * (v.transpose() * cand.bloch().coords);
    if (p.norm() < 1e-8) continue;
    if (auto x = project_pm1_into_span(v, from_bloch(BlochVector(d, p.normalized())).matrix(), 50)) {
      try_add(*x);
    }
  }
  double best = std::numeric_limits<double>::infinity();
  const int attempts = 4 * count + 32;
  for (int r = 0; r < attempts && static_cast<int>(out.size()) < count; ++r) {
    auto outcome = search_restart(v, d, seed, r, 200, tol);
    best = std::min(best, outcome.residual);
    if (outcome.observable) try_add(*outcome.observable);
  }
  if (out.empty()) {
    throw CertificationError("no +-1 observable found in the eigenspace of eigenvalue " +
                             std::to_string(cluster->value) + " after " + std::to_string(attempts) +
                             " restarts (best operator-norm residual " + std::to_string(best) + ")");
  }
  return out;
}

}  // namespace qbell
