#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "bsg/action_bundle.hpp"
#include "bsg/errors.hpp"
#include "bsg/exp3_star_six.hpp"
#include "bsg/objective.hpp"
#include "bsg/rng.hpp"

namespace bsg {

// How marginal gains become rewards in [0, 1].
//   Absolute:  r = gain / scale
//   Increment: r = 1/2 + (gain - previous gain of the same agent) / (2 scale)
// Increment subtracts an offset fixed before the agent draws, so regret is
// unchanged up to the factor 2 scale; the first step has no baseline and
// feeds 1/2.
enum class RewardMode { Absolute, Increment };

struct BsgStepResult {
  ActionBundle bundle;
  std::vector<double> marginal_gains;    // raw f_t(a_i | A_{i-1})
  std::vector<double> rewards;           // normalized, clamped to [0, 1]
  double value = 0.0;                    // f_t of the full executed bundle
  std::size_t clamped = 0;               // rewards that needed clamping
};

// Bandit Sequential Greedy: one EXP3*-SIX learner per agent, actions drawn
// in roster order, each learner fed its agent's normalized marginal gain
// along the executed prefix chain.
template <EstimatorDenominator Denominator = EstimatorDenominator::Aggregate>
class BsgCoordinator {
 public:
  using Learner = Exp3StarSix<Denominator>;

  BsgCoordinator(AgentRoster roster, std::size_t horizon, double reward_scale,
                 RewardMode mode = RewardMode::Absolute)
      : BsgCoordinator(roster, horizon, std::vector<double>(roster.size(), reward_scale), mode) {}

  // One scale per agent, roster order.
  BsgCoordinator(AgentRoster roster, std::size_t horizon, std::vector<double> reward_scales,
                 RewardMode mode = RewardMode::Absolute)
      : roster_(std::move(roster)), horizon_(horizon), reward_scales_(std::move(reward_scales)), mode_(mode) {
    if (roster_.size() == 0) throw ParameterError("roster must contain at least one agent");
    if (reward_scales_.size() != roster_.size()) throw ParameterError("need one reward scale per agent");
    for (double s : reward_scales_) {
      if (!(s > 0.0) || !std::isfinite(s)) throw ParameterError("reward scale must be positive");
    }
    learners_.reserve(roster_.size());
    for (const auto& agent : roster_) learners_.emplace_back(horizon, agent.num_actions);
  }

  const AgentRoster& roster() const { return roster_; }
  std::size_t horizon() const { return horizon_; }
  const std::vector<double>& reward_scales() const { return reward_scales_; }
  RewardMode reward_mode() const { return mode_; }
  std::size_t steps_taken() const { return step_counter_; }
  const std::vector<Learner>& learners() const { return learners_; }
  std::size_t total_clamped() const { return total_clamped_; }

  std::uint64_t learner_arithmetic_ops() const {
    std::uint64_t n = 0;
    for (const auto& l : learners_) n += l.arithmetic_ops();
    return n;
  }

  // Draw every agent's action for this step.
  const ActionBundle& select(Rng& rng) {
    if (step_counter_ >= horizon_) throw StateError("BSG stepped beyond its horizon");
    if (pending_) throw StateError("select() called twice without observe()");
    ActionBundle bundle;
    for (std::size_t i = 0; i < roster_.size(); ++i) {
      const auto& dist = learners_[i].next_distribution();
      bundle.insert({roster_[i].id, sample_action(dist, rng)});
    }
    pending_ = std::move(bundle);
    return *pending_;
  }

  // Observe f_t on the executed prefixes (one evaluation per agent; f(empty)
  // is 0 by normalization) and update every learner.
  BsgStepResult observe(StepObjective& oracle) {
    if (!pending_) throw StateError("observe() requires a preceding select()");
    BsgStepResult res;
    res.bundle = std::move(*pending_);
    pending_.reset();

    ActionBundle prefix;
    double prev = 0.0;
    for (std::size_t i = 0; i < roster_.size(); ++i) {
      const ActionIndex a = *res.bundle.action_of(roster_[i].id);
      prefix.insert({roster_[i].id, a});
      const double value = oracle.evaluate(prefix);
      const double gain = value - prev;
      prev = value;

      double r = 0.5;
      if (mode_ == RewardMode::Absolute) {
        r = gain / reward_scales_[i];
      } else if (!previous_gains_.empty()) {
        r = 0.5 + (gain - previous_gains_[i]) / (2.0 * reward_scales_[i]);
      }
      if (r < 0.0 || r > 1.0) {
        r = std::clamp(r, 0.0, 1.0);
        ++res.clamped;
      }
      learners_[i].update(a, r);
      res.marginal_gains.push_back(gain);
      res.rewards.push_back(r);
    }
    res.value = prev;
    previous_gains_ = res.marginal_gains;
    total_clamped_ += res.clamped;
    ++step_counter_;
    return res;
  }

  // select + observe against a full-information f_t, seen only through a
  // prefix-restricted bandit view.
  BsgStepResult step(StepObjective& f_t, Rng& rng) {
    const ActionBundle executed = select(rng);
    PrefixOracle oracle(f_t, roster_, executed);
    return observe(oracle);
  }

 private:
  AgentRoster roster_;
  std::size_t horizon_;
  std::vector<double> reward_scales_;
  RewardMode mode_;
  std::vector<double> previous_gains_;
  std::vector<Learner> learners_;
  std::optional<ActionBundle> pending_;
  std::size_t step_counter_ = 0;
  std::size_t total_clamped_ = 0;
};

namespace detail {

struct GreedyChoice {
  ActionIndex action;
  double value = 0.0;
  bool all_equal = false;
};

// Best f(base + a) over one agent's actions; strict comparison keeps the
// lowest index among ties.
inline GreedyChoice greedy_choice(StepObjective& f, const AgentSpec& agent, const ActionBundle& base) {
  GreedyChoice best;
  best.value = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < agent.num_actions; ++a) {
    const double v = f.evaluate(base.with({agent.id, ActionIndex{a}}));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    if (v > best.value) best = {ActionIndex{a}, v, false};
  }
  best.all_equal = hi - lo <= 1e-12 * std::max(1.0, std::abs(hi));
  return best;
}

}  // namespace detail

// Sequential Greedy with full access to f: each agent in roster order picks
// the action of largest marginal gain given its predecessors.
inline ActionBundle sg_full_information(const AgentRoster& roster, StepObjective& f) {
  ActionBundle bundle;
  for (const auto& agent : roster) {
    // f(base) is common to every candidate, so the argmax of f(base + a) is
    // the argmax of the marginal gain.
    bundle.insert({agent.id, detail::greedy_choice(f, agent, bundle).action});
  }
  return bundle;
}

inline ActionBundle random_bundle(const AgentRoster& roster, Rng& rng) {
  ActionBundle bundle;
  for (const auto& agent : roster) bundle.insert({agent.id, ActionIndex{uniform_index(rng, agent.num_actions)}});
  return bundle;
}

// Greedy pass on the previous step's objective. With no previous objective,
// or when an agent's candidates all score the same, that agent's action is
// drawn uniformly from rng.
inline ActionBundle sg_heuristic_step(const AgentRoster& roster, StepObjective* previous, Rng& rng) {
  if (!previous) return random_bundle(roster, rng);
  ActionBundle bundle;
  for (const auto& agent : roster) {
    auto choice = detail::greedy_choice(*previous, agent, bundle);
    if (choice.all_equal) choice.action = ActionIndex{uniform_index(rng, agent.num_actions)};
    bundle.insert({agent.id, choice.action});
  }
  return bundle;
}

struct OptimumResult {
  ActionBundle bundle;
  double value = 0.0;
};

inline constexpr std::size_t kMaxJointActions = 1'000'000;

// Exhaustive argmax over the joint action space; the lexicographically
// smallest maximizer (first agent most significant) wins ties.
inline OptimumResult brute_force_optimum(const AgentRoster& roster, StepObjective& f) {
  const std::size_t total = roster.joint_action_count(kMaxJointActions);
  if (total > kMaxJointActions) throw CapacityError("joint action space exceeds 10^6");

  std::vector<std::size_t> digits(roster.size(), 0);
  OptimumResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < total; ++n) {
    ActionBundle b;
    for (std::size_t i = 0; i < roster.size(); ++i) b.insert({roster[i].id, ActionIndex{digits[i]}});
    const double v = f.evaluate(b);
    if (v > best.value) best = {std::move(b), v};
    for (std::size_t i = roster.size(); i-- > 0;) {
      if (++digits[i] < roster[i].num_actions) break;
      digits[i] = 0;
    }
  }
  return best;
}

}  // namespace bsg
