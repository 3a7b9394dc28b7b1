#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "bsg/errors.hpp"
#include "bsg/rng.hpp"

namespace bsg {

// Index into one agent's action set, 0 <= value < K.
struct ActionIndex {
  std::size_t value = 0;

  friend bool operator==(ActionIndex, ActionIndex) = default;
  friend auto operator<=>(ActionIndex, ActionIndex) = default;
};

// Probability vector over K actions. Entries are nonnegative and sum to 1
// within 1e-12.
class SimplexDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  SimplexDistribution() = default;

  // Normalizes a nonnegative weight vector with positive mass.
  static SimplexDistribution from_weights(std::span<const double> weights) {
    if (weights.empty()) throw ParameterError("distribution needs at least one entry");
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw ParameterError("weights must be finite and nonnegative");
      total += w;
    }
    if (!(total > 0.0)) throw ParameterError("weights must have positive mass");
    SimplexDistribution d;
    d.probs_.reserve(weights.size());
    for (double w : weights) d.probs_.push_back(w / total);
    return d;
  }

  // softmax(log_weights) with max subtraction.
  static SimplexDistribution from_log_weights(std::span<const double> log_weights) {
    if (log_weights.empty()) throw ParameterError("distribution needs at least one entry");
    const double top = *std::max_element(log_weights.begin(), log_weights.end());
    if (!std::isfinite(top)) throw ParameterError("log weights must have a finite maximum");
    std::vector<double> w(log_weights.size());
    std::transform(log_weights.begin(), log_weights.end(), w.begin(),
                   [top](double lw) { return std::exp(lw - top); });
    return from_weights(w);
  }

  static SimplexDistribution uniform(std::size_t k) {
    if (k == 0) throw ParameterError("distribution needs at least one entry");
    SimplexDistribution d;
    d.probs_.assign(k, 1.0 / static_cast<double>(k));
    return d;
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  bool valid(double tol = kSumTolerance) const {
    if (probs_.empty()) return false;
    double total = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0)) return false;
      total += p;
    }
    return std::abs(total - 1.0) <= tol;
  }

 private:
  std::vector<double> probs_;
};

// Inverse-CDF draw; consumes exactly one engine value.
inline ActionIndex sample_action(const SimplexDistribution& dist, Rng& rng) {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] <= 0.0) continue;
    cumulative += dist[i];
    last_positive = i;
    if (u < cumulative) return ActionIndex{i};
  }
  // u landed in the rounding gap above the cumulative total.
  return ActionIndex{last_positive};
}

}  // namespace bsg
