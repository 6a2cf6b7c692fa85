#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbell/bloch.hpp"
#include "qbell/states.hpp"

namespace qbell {

/// Joint outcome (lambda_i, lambda_k) whose product is not the perfect value
/// but which still carries probability.
struct SpectralViolation {
  double lambda_i = 0.0;
  double lambda_k = 0.0;
  double probability = 0.0;
};

struct PerfectnessCertificate {
  int sign = 1;
  QuditObservable observable;
  double value = 0.0;          // tr[rho (B (x) B)]
  double residual = 0.0;       // |value - sign|
  double operator_norm = 0.0;  // max |eigenvalue of B|
  std::vector<SpectralViolation> spectral_violations;
  bool accepted = false;
};

/// Tests tr[rho (B (x) B)] = +-1 and its spectral form: the joint
/// probabilities tr[rho (E_i (x) E_k)] of eigenprojections must vanish
/// whenever lambda_i lambda_k != sign. The sign with the smaller residual
/// is chosen. Throws ValidationError if an eigenvalue of B lies outside
/// [-1 - tol, 1 + tol].
PerfectnessCertificate check_bell_condition(const TwoQuditState& state, const QuditObservable& b,
                                            double tol = 1e-9);

/// Clustered eigendecomposition of a symmetric correlation matrix.
SymmetricSpectrum eig_T(const CorrelationMatrix& t, double rel_tol = kClusterTol);

/// <b, T b> = sign * 2/d, evaluated through the eigen-expansion
/// Sum (lambda_m - sign 2/d) beta_m^2 = 0. Throws ValidationError for non-unit b.
bool bell_condition_spectral_form(const CorrelationMatrix& t, const BlochVector& b, int sign,
                                  double tol = 1e-9);

struct WitnessSearchOptions {
  int restarts = 32;
  std::uint64_t seed = 0;
  int max_iters = 200;
};

/// Result of the witness search inside one extreme eigenspace.
struct SignWitness {
  int sign = 1;
  double eigenvalue = 0.0;
  int multiplicity = 0;
  std::optional<BlochVector> witness;
  std::string source;  // "canonical", "search" or "" when none was found
  int restarts_used = 0;
  double best_residual = 0.0;  // best | ||v.G||_op - sqrt(2/d) |
};

struct ClassMembership {
  bool in_class = false;
  double spectral_norm = 0.0;
  double extreme_eigenvalue = 0.0;
  std::optional<BlochVector> witness_vector;
  std::vector<SignWitness> signs;  // one entry per extreme eigenvalue of modulus 2/d
  int restarts_used = 0;
  double best_residual = 0.0;
};

/// Sufficient-condition check for the class of symmetric states with perfect
/// correlations: ||T|| = 2/d and some unit eigenvector of an eigenvalue of
/// modulus 2/d is the Bloch vector of a +-1 observable. A failed search
/// means "not certified", not "not in class".
/// Throws DimensionError for odd d and ValidationError for non-symmetric states.
ClassMembership certify_perfect_class(const TwoQuditState& state, double tol = 1e-9,
                                      const WitnessSearchOptions& opts = {});

/// Up to `count` distinct observables B with tr[rho (B (x) B)] = sign, built
/// from unit vectors of the eigenspace of eigenvalue sign * 2/d. Throws
/// CertificationError when that eigenvalue is not extreme or nothing is found.
std::vector<QuditObservable> find_perfect_observables(const TwoQuditState& state, int sign,
                                                      int count, std::uint64_t seed = 0,
                                                      double tol = 1e-9);

/// Alternating projection between span(V) (orthonormal columns in Bloch
/// space) and the balanced +-1 observables, starting from `start`. Returns
/// the +-1 observable once its Bloch vector leaves span(V) by at most
/// `tol`, or nullopt.
std::optional<QuditObservable> project_pm1_into_span(const RMatrix& v, const CMatrix& start,
                                                     int max_iters = 200, double tol = 1e-13);

}  // namespace qbell
