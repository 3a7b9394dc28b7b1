#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "bsg/errors.hpp"
#include "bsg/simplex.hpp"

namespace bsg {

// Which probability sits in the implicit-exploration denominator of every
// subroutine's reward estimate. Aggregate uses the mixed distribution the
// action was actually drawn from; PerSubroutine uses each subroutine's own
// distribution (classical EXP3-SIX).
enum class EstimatorDenominator { Aggregate, PerSubroutine };

namespace detail {

// log(exp(a) + exp(b)) with -inf handling.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

inline double log_sum_exp(std::span<const double> xs) {
  const double hi = *std::max_element(xs.begin(), xs.end());
  double s = 0.0;
  for (double x : xs) s += std::exp(x - hi);
  return hi + std::log(s);
}

inline void shift_to_zero_max(std::vector<double>& xs) {
  const double hi = *std::max_element(xs.begin(), xs.end());
  for (double& x : xs) x -= hi;
}

}  // namespace detail

// One EXP3-SIX copy inside the doubling construction.
struct Exp3SixSubroutine {
  double learning_rate = 0.0;  // eta^(j)
  double exploration = 0.0;    // gamma^(j) = eta^(j) / 2
  std::vector<double> log_weights;
};

// Implicit-exploration reward estimate for one subroutine: 1 for every
// unchosen action, 1 - (1 - reward) / (p_chosen + gamma) for the chosen one.
inline std::vector<double> implicit_exploration_estimate(std::size_t num_actions, ActionIndex chosen,
                                                         double reward, double p_chosen,
                                                         double exploration) {
  std::vector<double> est(num_actions, 1.0);
  est[chosen.value] = 1.0 - (1.0 - reward) / (p_chosen + exploration);
  return est;
}

struct Exp3TraceRow {
  std::size_t t = 0;  // 1-based step
  std::vector<double> probs;
  std::size_t chosen = 0;
  double reward = 0.0;
};

inline void write_trace_csv(std::ostream& out, std::span<const Exp3TraceRow> rows) {
  out << "t,chosen,reward";
  const std::size_t k = rows.empty() ? 0 : rows.front().probs.size();
  for (std::size_t i = 0; i < k; ++i) out << ",p" << i;
  out << '\n';
  for (const auto& row : rows) {
    out << row.t << ',' << row.chosen << ',' << row.reward;
    for (double p : row.probs) out << ',' << p;
    out << '\n';
  }
}

// Tracking-the-best-action learner with bandit feedback: J = ceil(log2 T)
// fixed-share EXP3-SIX subroutines with geometrically spaced learning rates,
// combined by multiplicative weights. Weights are kept in log space and
// re-anchored at max 0 after every update.
//
// next_distribution() and update() must alternate; update() consumes the
// distribution cached by the preceding next_distribution().
template <EstimatorDenominator Denominator = EstimatorDenominator::Aggregate>
class Exp3StarSix {
 public:
  Exp3StarSix(std::size_t horizon, std::size_t num_actions)
      : horizon_(horizon), num_actions_(num_actions) {
    if (horizon == 0) throw ParameterError("horizon must be at least 1");
    if (num_actions == 0) throw ParameterError("action set must be nonempty");

    const double t = static_cast<double>(horizon);
    const double k = static_cast<double>(num_actions);
    if (horizon == 1) {
      num_subroutines_ = 1;
      meta_rate_ = 0.0;
      share_rate_ = 0.0;
    } else {
      num_subroutines_ = static_cast<std::size_t>(std::ceil(std::log2(t)));
      meta_rate_ = num_subroutines_ == 1
                       ? 0.0
                       : std::sqrt(std::log(static_cast<double>(num_subroutines_)) / (2.0 * t));
      share_rate_ = 1.0 / (t - 1.0);
    }

    subroutines_.resize(num_subroutines_);
    for (std::size_t j = 0; j < num_subroutines_; ++j) {
      auto& sub = subroutines_[j];
      sub.learning_rate = std::sqrt(std::log(k * t) / (std::ldexp(1.0, static_cast<int>(j)) * k));
      sub.exploration = sub.learning_rate / 2.0;
      sub.log_weights.assign(num_actions, 0.0);
    }
    meta_log_weights_.assign(num_subroutines_, 0.0);
  }

  std::size_t horizon() const { return horizon_; }
  std::size_t num_actions() const { return num_actions_; }
  std::size_t num_subroutines() const { return num_subroutines_; }
  double meta_rate() const { return meta_rate_; }
  double share_rate() const { return share_rate_; }
  std::span<const double> meta_log_weights() const { return meta_log_weights_; }
  std::span<const Exp3SixSubroutine> subroutines() const { return subroutines_; }
  std::size_t steps_taken() const { return steps_; }

  // Additions and multiplications performed so far (exp/log count as one).
  std::uint64_t arithmetic_ops() const { return ops_; }

  bool has_cached_distribution() const { return cached_.has_value(); }
  const std::vector<SimplexDistribution>& cached_subroutine_distributions() const {
    return cached_subs_;
  }

  // q_t = normalized meta weights; p_t = sum_j q_j p^(j).
  const SimplexDistribution& next_distribution() {
    if (cached_) return *cached_;
    cached_subs_.clear();
    cached_subs_.reserve(num_subroutines_);
    for (const auto& sub : subroutines_) {
      cached_subs_.push_back(SimplexDistribution::from_log_weights(sub.log_weights));
      ops_ += 3 * num_actions_;
    }
    cached_meta_ = SimplexDistribution::from_log_weights(meta_log_weights_);
    ops_ += 3 * num_subroutines_;

    std::vector<double> mixed(num_actions_, 0.0);
    for (std::size_t j = 0; j < num_subroutines_; ++j) {
      const double qj = cached_meta_[j];
      const auto pj = cached_subs_[j].probs();
      for (std::size_t i = 0; i < num_actions_; ++i) mixed[i] += qj * pj[i];
      ops_ += 2 * num_actions_;
    }
    cached_ = SimplexDistribution::from_weights(mixed);
    ops_ += 2 * num_actions_;
    return *cached_;
  }

  void update(ActionIndex chosen, double reward) {
    if (!cached_) throw StateError("update() requires a preceding next_distribution()");
    if (!(reward >= 0.0 && reward <= 1.0)) throw ParameterError("reward must lie in [0, 1]");
    if (chosen.value >= num_actions_) throw ParameterError("chosen action out of range");

    if (trace_enabled_) {
      trace_.push_back({steps_ + 1, std::vector<double>(cached_->probs().begin(), cached_->probs().end()),
                        chosen.value, reward});
    }

    const double log_k = std::log(static_cast<double>(num_actions_));
    const double log_share = share_rate_ > 0.0 ? std::log(share_rate_) : -std::numeric_limits<double>::infinity();
    const double log_keep = share_rate_ < 1.0 ? std::log1p(-share_rate_) : -std::numeric_limits<double>::infinity();

    std::vector<double> v(num_actions_);
    for (std::size_t j = 0; j < num_subroutines_; ++j) {
      auto& sub = subroutines_[j];
      const auto& pj = cached_subs_[j];
      const double p_chosen =
          Denominator == EstimatorDenominator::Aggregate ? (*cached_)[chosen.value] : pj[chosen.value];
      const auto est = implicit_exploration_estimate(num_actions_, chosen, reward, p_chosen, sub.exploration);
      ops_ += 4;

      for (std::size_t i = 0; i < num_actions_; ++i) v[i] = sub.log_weights[i] + sub.learning_rate * est[i];
      const double log_total = detail::log_sum_exp(v);
      const double log_floor = log_share + log_total - log_k;
      for (std::size_t i = 0; i < num_actions_; ++i) {
        sub.log_weights[i] = detail::log_add_exp(log_floor, log_keep + v[i]);
      }
      detail::shift_to_zero_max(sub.log_weights);
      ops_ += 2 * num_actions_ + 2 * num_actions_ + 3 * num_actions_ + num_actions_;

      double dot = 0.0;
      for (std::size_t i = 0; i < num_actions_; ++i) dot += est[i] * pj[i];
      meta_log_weights_[j] += meta_rate_ * dot;
      ops_ += 2 * num_actions_ + 2;
    }
    detail::shift_to_zero_max(meta_log_weights_);
    ops_ += num_subroutines_;

    cached_.reset();
    cached_subs_.clear();
    ++steps_;
  }

  void enable_trace(bool on = true) { trace_enabled_ = on; }
  const std::vector<Exp3TraceRow>& trace() const { return trace_; }

 private:
  std::size_t horizon_;
  std::size_t num_actions_;
  std::size_t num_subroutines_ = 1;
  double meta_rate_ = 0.0;
  double share_rate_ = 0.0;
  std::vector<double> meta_log_weights_;
  std::vector<Exp3SixSubroutine> subroutines_;

  std::optional<SimplexDistribution> cached_;
  SimplexDistribution cached_meta_;
  std::vector<SimplexDistribution> cached_subs_;

  std::size_t steps_ = 0;
  std::uint64_t ops_ = 0;
  bool trace_enabled_ = false;
  std::vector<Exp3TraceRow> trace_;
};

}  // namespace bsg
