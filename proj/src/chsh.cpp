#include <cmath>
#include <limits>

#include "qbell/bellmax.hpp"
#include "qbell/errors.hpp"
#include "qbell/linalg.hpp"

namespace qbell {

double chsh_value(const TwoQuditState& state, const QuditObservable& a1, const QuditObservable& a2,
                  const QuditObservable& b1, const QuditObservable& b2) {
  for (const auto* x : {&a1, &a2, &b1, &b2}) {
    if (x->dim() != state.dim()) throw DimensionError("observable dimension does not match the state");
  }
  const CMatrix& rho = state.rho();
  auto e = [&](const QuditObservable& x, const QuditObservable& y) {
    return tensor_trace(rho, x.matrix(), y.matrix()).real();
  };
  return std::abs(e(a1, b1) + e(a1, b2) + e(a2, b1) - e(a2, b2));
}

ChshResult maximize_chsh(const TwoQuditState& state, int restarts, std::uint64_t seed, int max_iters) {
  const int d = state.dim();
  if (d % 2 != 0) throw DimensionError("CHSH maximization over +-1 observables needs an even dimension");
  const CMatrix& rho = state.rho();
  ChshResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    auto rng = make_rng(seed, 0xc4540000ULL + r);
    CMatrix b1 = random_pm1_observable(d, rng()).matrix();
    CMatrix b2 = random_pm1_observable(d, rng()).matrix();
    CMatrix a1, a2;
    double value = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iters; ++it) {
      // The signed CHSH combination is linear in each observable.
      a1 = balanced_sign(reduce_second(rho, b1 + b2));
      a2 = balanced_sign(reduce_second(rho, b1 - b2));
      b1 = balanced_sign(reduce_first(rho, a1 + a2));
      b2 = balanced_sign(reduce_first(rho, a1 - a2));
      const double v = tensor_trace(rho, a1, b1 + b2).real() + tensor_trace(rho, a2, b1 - b2).real();
      if (v - value <= 1e-13) {
        value = std::max(value, v);
        break;
      }
      value = v;
    }
    if (value > best.value) {
      best.a1 = QuditObservable::from_matrix(a1, 1e-8);
      best.a2 = QuditObservable::from_matrix(a2, 1e-8);
      best.b1 = QuditObservable::from_matrix(b1, 1e-8);
      best.b2 = QuditObservable::from_matrix(b2, 1e-8);
      best.value = chsh_value(state, best.a1, best.a2, best.b1, best.b2);
    }
  }
  return best;
}

}  // namespace qbell
