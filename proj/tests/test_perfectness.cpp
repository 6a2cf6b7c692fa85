#include <doctest.h>

#include <array>

#include "oracles.hpp"
#include "qbell/bloch.hpp"
#include "qbell/errors.hpp"
#include "qbell/linalg.hpp"
#include "qbell/perfectness.hpp"
#include "qbell/states.hpp"

using namespace qbell;

namespace {

BlochVector bv(std::initializer_list<double> xs) {
  RVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return BlochVector(2, v);
}

QuditObservable obs(const CMatrix& m) { return QuditObservable::from_matrix(m); }

bool contains(const std::vector<QuditObservable>& xs, const CMatrix& m) {
  for (const auto& x : xs)
    if (oracle::max_abs(x.matrix() - m) <= 1e-9) return true;
  return false;
}

// Projection of r onto the eigenspace of T for eigenvalues near `value`.
double projection_norm(const RMatrix& t, const RVector& r, double value) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(t);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i) - value) < 1e-8) s += std::pow(es.eigenvectors().col(i).dot(r), 2);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("check_bell_condition examples") {
  CMatrix x = CMatrix::Zero(4, 4);
  x.diagonal() << 1, 1, -1, -1;
  auto c = check_bell_condition(ghz(4), obs(x), 1e-12);
  CHECK(c.accepted);
  CHECK(c.sign == 1);
  CHECK(c.residual <= 1e-12);

  const auto sy = oracle::pauli_y();
  c = check_bell_condition(ghz(4), obs(oracle::block_diag({sy, sy})), 1e-12);
  CHECK(c.accepted);
  CHECK(c.sign == -1);

  const double s = 1 / std::sqrt(2.0);
  c = check_bell_condition(ghz(2), obs((oracle::pauli_x() + oracle::pauli_z()) * s));
  CHECK(c.accepted);
  CHECK(c.sign == 1);
  CHECK(c.value == doctest::Approx(1.0));

  const CMatrix b = (oracle::pauli_x() + oracle::pauli_y()) * s;
  c = check_bell_condition(ghz(2), obs(b));
  CHECK_FALSE(c.accepted);
  CHECK(std::abs(c.value - oracle::trace_product(ghz(2).rho(), b, b).real()) <= 1e-14);
  CHECK(std::abs(c.value) <= 1e-14);
  CHECK_FALSE(c.spectral_violations.empty());
}

TEST_CASE("check_bell_condition needs eigenvalues within [-1, 1]") {
  try {
    check_bell_condition(ghz(2), obs(oracle::pauli_z() * 1.5));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.invariant() == "eigenvalue-range");
  }
}

TEST_CASE("operator norm below one is never accepted") {
  // B = 0.5 sigma_z has no perfect correlations
  const auto c = check_bell_condition(ghz(2), obs(oracle::pauli_z() * 0.5));
  CHECK_FALSE(c.accepted);
  CHECK(c.value == doctest::Approx(0.25));
}

TEST_CASE("eig_T examples") {
  auto s = eig_T(correlation_matrix(ghz(2)));
  CHECK(s.spectral_norm == doctest::Approx(1.0));
  REQUIRE(s.clusters.size() == 2);
  CHECK(s.clusters[0].multiplicity == 1);
  CHECK(s.clusters[1].multiplicity == 2);

  s = eig_T(correlation_matrix(ghz(4)));
  REQUIRE(s.clusters.size() == 2);
  CHECK(s.clusters[0].value == doctest::Approx(-0.5));
  CHECK(s.clusters[0].multiplicity == 6);
  CHECK(s.clusters[1].value == doctest::Approx(0.5));
  CHECK(s.clusters[1].multiplicity == 9);

  s = eig_T(correlation_matrix(maximally_mixed(3)));
  REQUIRE(s.clusters.size() == 1);
  CHECK(s.clusters[0].multiplicity == 8);
  CHECK(s.clusters[0].value == 0.0);
}

TEST_CASE("clusters carry orthonormal eigenvectors") {
  const auto s = eig_T(correlation_matrix(ghz(4)));
  const RMatrix t = correlation_matrix(ghz(4)).matrix();
  for (const auto& c : s.clusters) {
    const RMatrix& v = c.vectors;
    CHECK((v.transpose() * v - RMatrix::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((t * v - c.value * v).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("bell_condition_spectral_form examples") {
  const auto t2 = correlation_matrix(ghz(2));
  CHECK(bell_condition_spectral_form(t2, bv({0, 0, 1}), 1));
  CHECK(bell_condition_spectral_form(t2, bv({0, 1, 0}), -1));
  CHECK_FALSE(bell_condition_spectral_form(t2, bv({0, 1, 0}), 1));
  CMatrix x = CMatrix::Zero(4, 4);
  x.diagonal() << 1, 1, -1, -1;
  CHECK(bell_condition_spectral_form(correlation_matrix(ghz(4)), to_bloch(x), 1));
  try {
    bell_condition_spectral_form(t2, bv({0, 0, 2}), 1);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.invariant() == "unit-vector");
  }
}

TEST_CASE("spectral form agrees with the direct trace") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> n;
  const double tol = 1e-9;
  int positives = 0;
  for (int d : {2, 4}) {
    for (int k = 0; k < 200; ++k) {
      // a third of the states are GHZ-like so that both outcomes occur
      TwoQuditState s = k % 3 == 0 ? local_rotation(ghz(d), random_unitary(d, rng))
                                   : TwoQuditState::from_density(d, oracle::random_symmetric_density(d, rng));
      const auto t = correlation_matrix(s);
      RVector b(d * d - 1);
      if (k % 3 == 0) {
        b = eig_T(t).clusters.back().vectors.col(0);
      } else {
        for (auto& x : b) x = n(rng);
        b.normalize();
      }
      // unit b maps to an observable with tr B^2 = d; (d/2) <b,Tb> = tr[rho B (x) B]
      const auto obs_b = from_bloch(BlochVector(d, b));
      const double direct = oracle::trace_product(s.rho(), obs_b.matrix(), obs_b.matrix()).real();
      for (int sign : {1, -1}) {
        const bool spectral = bell_condition_spectral_form(t, BlochVector(d, b), sign, tol);
        const bool trace_form = std::abs(direct * 2.0 / d - sign * 2.0 / d) <= tol;
        CHECK(spectral == trace_form);
        positives += spectral;
      }
    }
  }
  CHECK(positives > 0);
}

TEST_CASE("certify_perfect_class examples") {
  auto m = certify_perfect_class(ghz(2));
  CHECK(m.in_class);
  REQUIRE(m.witness_vector.has_value());
  CHECK((m.witness_vector->coords - bv({0, 0, 1}).coords).norm() <= 1e-12);

  m = certify_perfect_class(ghz(4));
  CHECK(m.in_class);
  REQUIRE(m.witness_vector.has_value());
  CMatrix x = CMatrix::Zero(4, 4);
  x.diagonal() << 1, 1, -1, -1;
  CHECK((m.witness_vector->coords - to_bloch(x).coords).norm() <= 1e-12);
  REQUIRE(m.signs.size() == 2);
  CHECK(m.signs[0].witness.has_value());
  CHECK(m.signs[1].witness.has_value());

  m = certify_perfect_class(maximally_mixed(4));
  CHECK_FALSE(m.in_class);
  CHECK(m.spectral_norm == 0.0);
}

TEST_CASE("membership invariants hold for certified witnesses") {
  for (int d : {2, 4, 6}) {
    const auto t = correlation_matrix(ghz(d));
    const auto m = certify_perfect_class(ghz(d));
    REQUIRE(m.in_class);
    CHECK(std::abs(m.spectral_norm - 2.0 / d) <= 1e-9);
    for (const auto& s : m.signs) {
      REQUIRE(s.witness.has_value());
      CHECK(is_pm1_bloch(*s.witness));
      CHECK((t.matrix() * s.witness->coords - s.eigenvalue * s.witness->coords).norm() <= 1e-9);
    }
  }
}

TEST_CASE("certification preconditions") {
  CHECK_THROWS_AS(certify_perfect_class(ghz(3)), DimensionError);
  CMatrix p0 = CMatrix::Zero(2, 2), p1 = CMatrix::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  try {
    certify_perfect_class(product_state(p0, p1));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.invariant() == "symmetric-state");
  }
}

TEST_CASE("the numerical search finds witnesses when canonical candidates miss") {
  // U (x) U rotates T by an orthogonal map, so canonical candidates generally
  // leave the +-1 set after projection; the class is unchanged.
  std::mt19937_64 rng(12);
  const auto s = local_rotation(ghz(4), random_unitary(4, rng));
  const auto m = certify_perfect_class(s, 1e-9, {32, 3, 200});
  CHECK(m.in_class);
  for (const auto& w : m.signs) {
    CAPTURE(w.sign);
    REQUIRE(w.witness.has_value());
    CHECK(is_pm1_bloch(*w.witness));
  }
}

TEST_CASE("find_perfect_observables examples") {
  auto plus = find_perfect_observables(ghz(2), 1, 8);
  CHECK(contains(plus, oracle::pauli_z()));
  CHECK(contains(plus, oracle::pauli_x()));
  auto minus = find_perfect_observables(ghz(2), -1, 4);
  CHECK((contains(minus, oracle::pauli_y()) || contains(minus, -oracle::pauli_y())));
  const auto sy = oracle::pauli_y();
  minus = find_perfect_observables(ghz(4), -1, 16);
  CHECK(contains(minus, oracle::block_diag({sy, sy})));
}

TEST_CASE("every found observable passes check_bell_condition") {
  std::mt19937_64 rng(9);
  std::vector<TwoQuditState> states{ghz(2), ghz(4), ghz(6)};
  states.push_back(local_rotation(ghz(2), random_unitary(2, rng)));
  states.push_back(local_rotation(ghz(4), random_unitary(4, rng)));
  for (const auto& s : states) {
    if (!certify_perfect_class(s).in_class) continue;
    for (int sign : {1, -1}) {
      for (const auto& b : find_perfect_observables(s, sign, 6, 1)) {
        const auto c = check_bell_condition(s, b);
        CHECK(c.accepted);
        CHECK(c.sign == sign);
        // direct trace recomputed independently
        CHECK(std::abs(oracle::trace_product(s.rho(), b.matrix(), b.matrix()).real() - sign) <= 1e-9);
      }
    }
  }
}

TEST_CASE("find_perfect_observables refuses uncertified states") {
  CHECK_THROWS_AS(find_perfect_observables(maximally_mixed(2), 1, 2), CertificationError);
}

TEST_CASE("GHZ eigenspace mapping of the canonical constructions") {
  for (int d : {2, 4, 6}) {
    const RMatrix t = correlation_matrix(ghz(d)).matrix();
    std::vector<int> g(d / 2);
    for (int mask = 0; mask < (1 << (d / 2)); ++mask) {
      for (int b = 0; b < d / 2; ++b) g[b] = (mask >> b) & 1;
      CHECK(projection_norm(t, make_offdiag_real_pm1(d, g).bloch().coords, -2.0 / d) <= 1e-10);
      CHECK(projection_norm(t, make_offdiag_imag_pm1(d, g).bloch().coords, 2.0 / d) <= 1e-10);
    }
    std::vector<int> signs(d, 1);
    std::fill(signs.begin() + d / 2, signs.end(), -1);
    CHECK(projection_norm(t, make_diag_pm1(d, signs).bloch().coords, -2.0 / d) <= 1e-10);
  }
}

TEST_CASE("project_pm1_into_span stays on both sets") {
  const auto s = eig_T(correlation_matrix(ghz(4)));
  const RMatrix& v = s.clusters[1].vectors;
  const auto x = project_pm1_into_span(v, random_pm1_observable(4, 5).matrix());
  REQUIRE(x.has_value());
  CHECK(is_pm1_bloch(x->bloch()));
  const RVector r = x->bloch().coords;
  CHECK((r - v * (v.transpose() * r)).norm() <= 1e-12);
}
