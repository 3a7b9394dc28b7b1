#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bsg/action_bundle.hpp"
#include "bsg/errors.hpp"
#include "bsg/objective.hpp"

namespace bsg {

// Distances at or below this are treated as exactly zero.
inline constexpr double kZeroDistance = 1e-9;

struct TrackingObjectiveParams {
  double max_sensing_range = 150.0;  // d_max
  std::size_t num_targets = 0;

  // Penalty of an unobserved target, -4 d_max.
  double unobserved_term() const { return -4.0 * max_sensing_range; }
  // Constant making f(empty) = 0.
  double shift() const { return 4.0 * max_sensing_range * static_cast<double>(num_targets); }
  // Upper bound on any single marginal gain of the shifted objective.
  double reward_scale() const { return shift(); }

  void validate() const {
    if (!(max_sensing_range > 0.0)) throw ParameterError("max sensing range must be positive");
  }
};

// Per-target contribution -[sum_i 1/d_i]^-1 over the observing robots'
// distances; -4 d_max when nobody observes, 0 when some robot is on top of
// the target.
inline double harmonic_term(const std::vector<double>& observing_distances, const TrackingObjectiveParams& params) {
  if (observing_distances.empty()) return params.unobserved_term();
  double inv_sum = 0.0;
  for (double d : observing_distances) {
    if (d < 0.0) throw ParameterError("distances must be nonnegative");
    if (d <= kZeroDistance) return 0.0;
    inv_sum += 1.0 / d;
  }
  return -1.0 / inv_sum;
}

// distance(target j, agent, action) or nullopt if that action leaves target j
// outside the agent's sensing range.
class DistanceTable {
 public:
  DistanceTable() = default;
  DistanceTable(std::size_t num_targets, const AgentRoster& roster) : roster_(roster) {
    cells_.resize(num_targets);
    for (auto& per_target : cells_) {
      per_target.resize(roster.size());
      for (std::size_t i = 0; i < roster.size(); ++i) per_target[i].assign(roster[i].num_actions, std::nullopt);
    }
  }

  std::size_t num_targets() const { return cells_.size(); }
  const AgentRoster& roster() const { return roster_; }

  void set(std::size_t target, std::size_t agent_slot, ActionIndex action, std::optional<double> d) {
    if (d && *d < 0.0) throw ParameterError("distances must be nonnegative");
    cells_.at(target).at(agent_slot).at(action.value) = d;
  }

  std::optional<double> get(std::size_t target, std::size_t agent_slot, ActionIndex action) const {
    return cells_.at(target).at(agent_slot).at(action.value);
  }

  // Roster slot of an agent id.
  std::size_t slot_of(AgentId id) const {
    for (std::size_t i = 0; i < roster_.size(); ++i) {
      if (roster_[i].id == id) return i;
    }
    throw ParameterError("agent " + std::to_string(id) + " not in roster");
  }

 private:
  AgentRoster roster_;
  std::vector<std::vector<std::vector<std::optional<double>>>> cells_;
};

// Shifted harmonic-distance tracking objective:
//   shift + sum_j -[sum_{i in N_j} 1/d_j(i)]^-1
inline double eval_tracking_objective(const ActionBundle& bundle, const DistanceTable& distances,
                                      const TrackingObjectiveParams& params) {
  params.validate();
  double total = params.shift();
  std::vector<double> observing;
  for (std::size_t j = 0; j < distances.num_targets(); ++j) {
    observing.clear();
    for (const auto& ga : bundle) {
      if (auto d = distances.get(j, distances.slot_of(ga.agent), ga.action)) observing.push_back(*d);
    }
    total += harmonic_term(observing, params);
  }
  return total;
}

class TableTrackingObjective final : public StepObjective {
 public:
  TableTrackingObjective(DistanceTable distances, TrackingObjectiveParams params)
      : distances_(std::move(distances)), params_(params) {}

  const TrackingObjectiveParams& params() const { return params_; }

 protected:
  double do_evaluate(const ActionBundle& bundle) override {
    return eval_tracking_objective(bundle, distances_, params_);
  }

 private:
  DistanceTable distances_;
  TrackingObjectiveParams params_;
};

}  // namespace bsg
