#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bsg/action_bundle.hpp"
#include "bsg/errors.hpp"

namespace bsg {

struct AgentSpec {
  AgentId id = 0;
  std::size_t num_actions = 0;
};

// Agents in the fixed order used by every sequential pass.
class AgentRoster {
 public:
  AgentRoster() = default;
  explicit AgentRoster(std::vector<AgentSpec> agents) : agents_(std::move(agents)) {
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      if (agents_[i].num_actions == 0) throw ParameterError("agent action sets must be nonempty");
      for (std::size_t k = 0; k < i; ++k) {
        if (agents_[k].id == agents_[i].id) throw ParameterError("duplicate agent id in roster");
      }
    }
  }

  // Agents 0..n-1 with the given action-set sizes.
  static AgentRoster uniform(std::size_t num_agents, std::size_t num_actions) {
    std::vector<AgentSpec> specs;
    for (std::size_t i = 0; i < num_agents; ++i) specs.push_back({i, num_actions});
    return AgentRoster(std::move(specs));
  }

  std::size_t size() const { return agents_.size(); }
  const AgentSpec& operator[](std::size_t i) const { return agents_[i]; }
  auto begin() const { return agents_.begin(); }
  auto end() const { return agents_.end(); }

  // Product of action-set sizes, saturating at limit + 1.
  std::size_t joint_action_count(std::size_t limit) const {
    std::size_t n = 1;
    for (const auto& a : agents_) {
      if (n > limit / a.num_actions) return limit + 1;
      n *= a.num_actions;
    }
    return n;
  }

 private:
  std::vector<AgentSpec> agents_;
};

// One time step's set function f_t. evaluate() counts every call.
class StepObjective {
 public:
  virtual ~StepObjective() = default;

  double evaluate(const ActionBundle& bundle) {
    ++evaluations_;
    return do_evaluate(bundle);
  }

  std::size_t evaluations() const { return evaluations_; }

 protected:
  virtual double do_evaluate(const ActionBundle& bundle) = 0;

 private:
  std::size_t evaluations_ = 0;
};

// Full-information objective backed by any callable double(const ActionBundle&).
template <typename F>
class FunctionObjective final : public StepObjective {
 public:
  explicit FunctionObjective(F fn) : fn_(std::move(fn)) {}

 protected:
  double do_evaluate(const ActionBundle& bundle) override { return fn_(bundle); }

 private:
  F fn_;
};

template <typename F>
FunctionObjective<F> make_objective(F fn) {
  return FunctionObjective<F>(std::move(fn));
}

// f(base + a) - f(base). Pass base_value to reuse a cached f(base) so only
// one evaluation is spent.
inline double marginal_gain(StepObjective& f, GroundAction a, const ActionBundle& base,
                            std::optional<double> base_value = std::nullopt) {
  if (base.contains_agent(a.agent)) {
    throw ParameterError("marginal gain: agent " + std::to_string(a.agent) + " already in base bundle");
  }
  const double with_a = f.evaluate(base.with(a));
  const double without = base_value ? *base_value : f.evaluate(base);
  return with_a - without;
}

// Bandit-feedback view of a full-information objective: only the prefixes
// (in roster order) of the executed bundle may be queried. Every query is
// logged; anything else throws ContractViolation.
class PrefixOracle final : public StepObjective {
 public:
  PrefixOracle(StepObjective& full, const AgentRoster& roster, const ActionBundle& executed)
      : full_(full) {
    ActionBundle prefix;
    prefixes_.push_back(prefix);
    for (const auto& agent : roster) {
      auto a = executed.action_of(agent.id);
      if (!a) break;
      prefix.insert({agent.id, *a});
      prefixes_.push_back(prefix);
    }
  }

  const std::vector<ActionBundle>& query_log() const { return queries_; }
  const std::vector<ActionBundle>& allowed_prefixes() const { return prefixes_; }

 protected:
  double do_evaluate(const ActionBundle& bundle) override {
    queries_.push_back(bundle);
    for (const auto& p : prefixes_) {
      if (p == bundle) return full_.evaluate(bundle);
    }
    throw ContractViolation("bandit oracle queried on a bundle that is not an executed prefix");
  }

 private:
  StepObjective& full_;
  std::vector<ActionBundle> prefixes_;
  std::vector<ActionBundle> queries_;
};

}  // namespace bsg
