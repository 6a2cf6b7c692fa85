#include "qbell/lhv.hpp"

#include <algorithm>
#include <cmath>

#include "qbell/errors.hpp"
#include "qbell/linalg.hpp"

namespace qbell {

namespace {

constexpr std::size_t kOutcomes = kLhvOutcomes.size();

OutcomeDistribution point_mass(std::size_t index) {
  OutcomeDistribution p{};
  p[index] = 1.0;
  return p;
}

std::size_t outcome_index(double value) {
  const auto it = std::find(kLhvOutcomes.begin(), kLhvOutcomes.end(), value);
  return static_cast<std::size_t>(it - kLhvOutcomes.begin());
}

OutcomeDistribution random_distribution(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<std::size_t> pick(0, kOutcomes - 1);
  switch (kind(rng)) {
    case 0:
      return point_mass(pick(rng));
    case 1:
      return point_mass(std::bernoulli_distribution(0.5)(rng) ? kOutcomes - 1 : 0);
    default: {
      std::exponential_distribution<double> expo(1.0);
      OutcomeDistribution p{};
      double total = 0.0;
      for (auto& x : p) total += (x = expo(rng));
      for (auto& x : p) x /= total;
      return p;
    }
  }
}

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw DimensionError("sign must be +1 or -1");
}

}  // namespace

double lhv_correlation(const LhvModel& model, const std::vector<OutcomeDistribution>& x,
                       const std::vector<OutcomeDistribution>& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < kOutcomes; ++i) {
    for (std::size_t j = 0; j < kOutcomes; ++j) {
      double joint = 0.0;
      for (std::size_t w = 0; w < model.weights.size(); ++w) joint += x[w][i] * y[w][j] * model.weights[w];
      acc += kLhvOutcomes[i] * kLhvOutcomes[j] * joint;
    }
  }
  return acc;
}

double lhv_bell_value(const LhvModel& model, int sign) {
  check_sign(sign);
  return std::abs(lhv_correlation(model, model.a1, model.b1) - lhv_correlation(model, model.a1, model.b2)) +
         sign * lhv_correlation(model, model.a2, model.b2);
}

double lhv_constraint_residual(const LhvModel& model, int sign) {
  return std::abs(lhv_correlation(model, model.a2, model.b1) - sign);
}

double lhv_forbidden_mass(const LhvModel& model, int sign) {
  double mass = 0.0;
  for (std::size_t i = 0; i < kOutcomes; ++i) {
    for (std::size_t j = 0; j < kOutcomes; ++j) {
      if (kLhvOutcomes[i] * kLhvOutcomes[j] == sign) continue;
      for (std::size_t w = 0; w < model.weights.size(); ++w) {
        mass += model.a2[w][i] * model.b1[w][j] * model.weights[w];
      }
    }
  }
  return mass;
}

LhvModel sample_lhv_model(std::mt19937_64& rng, int sign) {
  check_sign(sign);
  std::uniform_int_distribution<int> states(2, 8);
  std::exponential_distribution<double> expo(1.0);
  std::bernoulli_distribution coin(0.5);
  const int n = states(rng);
  LhvModel m;
  double total = 0.0;
  for (int w = 0; w < n; ++w) {
    m.weights.push_back(expo(rng));
    total += m.weights.back();
  }
  for (auto& x : m.weights) x /= total;
  // A product distribution supported on {la * lb = sign} is a pair of point masses.
  const std::size_t plus = outcome_index(1.0), minus = outcome_index(-1.0);
  for (int w = 0; w < n; ++w) {
    const bool up = coin(rng);
    m.a2.push_back(point_mass(up ? plus : minus));
    m.b1.push_back(point_mass((up == (sign > 0)) ? plus : minus));
    m.a1.push_back(random_distribution(rng));
    m.b2.push_back(random_distribution(rng));
  }
  return m;
}

LhvCheckReport lhv_monte_carlo(int sign, long n_models, std::uint64_t seed) {
  check_sign(sign);
  if (n_models < 1) throw DimensionError("at least one model must be sampled");
  auto rng = make_rng(seed, 0x1770ULL);
  LhvCheckReport r;
  r.sign = sign;
  r.seed = seed;
  r.models_sampled = n_models;
  r.max_bell_value = -1e300;
  for (long i = 0; i < n_models; ++i) {
    const LhvModel m = sample_lhv_model(rng, sign);
    r.max_bell_value = std::max(r.max_bell_value, lhv_bell_value(m, sign));
    r.constraint_residual_max = std::max(r.constraint_residual_max, lhv_constraint_residual(m, sign));
  }
  return r;
}

}  // namespace qbell
