#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace qbell {

/// Outcome grid shared by every conditional distribution.
inline constexpr std::array<double, 5> kLhvOutcomes{-1.0, -0.5, 0.0, 0.5, 1.0};

using OutcomeDistribution = std::array<double, kLhvOutcomes.size()>;

/// Finite local hidden-variable model: a distribution over hidden states
/// and, per state, local outcome distributions for settings a1, a2 (Alice)
/// and b1, b2 (Bob).
struct LhvModel {
  std::vector<double> weights;
  std::vector<OutcomeDistribution> a1, a2, b1, b2;
};

/// Expectation of the product of outcomes,
/// Sum_{la, lb} la lb Sum_w P_x(la|w) P_y(lb|w) nu(w).
double lhv_correlation(const LhvModel& model, const std::vector<OutcomeDistribution>& x,
                       const std::vector<OutcomeDistribution>& y);

/// |<a1 b1> - <a1 b2>| + sign <a2 b2>.
double lhv_bell_value(const LhvModel& model, int sign);

/// |<a2 b1> - sign|.
double lhv_constraint_residual(const LhvModel& model, int sign);

/// Total joint probability of (a2, b1) outcome pairs whose product is not `sign`.
double lhv_forbidden_mass(const LhvModel& model, int sign);

/// Random model with 2..8 hidden states satisfying <a2 b1> = sign exactly:
/// per hidden state a2 and b1 are deterministic with product `sign`.
LhvModel sample_lhv_model(std::mt19937_64& rng, int sign);

struct LhvCheckReport {
  int sign = 1;
  long models_sampled = 0;
  double max_bell_value = 0.0;
  double constraint_residual_max = 0.0;
  std::uint64_t seed = 0;
};

LhvCheckReport lhv_monte_carlo(int sign, long n_models, std::uint64_t seed);

}  // namespace qbell
