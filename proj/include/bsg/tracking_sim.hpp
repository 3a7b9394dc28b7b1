#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "bsg/action_bundle.hpp"
#include "bsg/errors.hpp"
#include "bsg/objective.hpp"
#include "bsg/rng.hpp"
#include "bsg/tracking_objective.hpp"

namespace bsg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

// ---------------------------------------------------------------------------
// Robots

inline constexpr std::size_t kNumMotionActions = 8;

// Action order: upward, downward, left, right, upleft, upright, downleft,
// downright.
inline constexpr std::array<std::string_view, kNumMotionActions> kMotionActionNames = {
    "upward", "downward", "left", "right", "upleft", "upright", "downleft", "downright"};

// Unit vector of a motion action; diagonals are normalized so ground speed is
// the same in all eight directions.
inline Vec2 motion_direction(ActionIndex action) {
  constexpr double h = std::numbers::sqrt2 / 2.0;
  static constexpr std::array<Vec2, kNumMotionActions> dirs = {
      Vec2{0.0, 1.0}, Vec2{0.0, -1.0}, Vec2{-1.0, 0.0}, Vec2{1.0, 0.0},
      Vec2{-h, h},    Vec2{h, h},      Vec2{-h, -h},    Vec2{h, -h}};
  if (action.value >= kNumMotionActions) throw ParameterError("motion action must be in [0, 8)");
  return dirs[action.value];
}

// Range noise standard deviation grows linearly with distance.
struct NoiseModel {
  double sigma0 = 1.0;  // m
  double slope = 0.02;  // m per m

  double sigma(double d) const { return sigma0 + slope * d; }
  bool noiseless() const { return sigma0 == 0.0 && slope == 0.0; }
};

struct RobotState {
  Vec2 position;
  double speed = 10.0;        // m/s
  double fov_radius = 150.0;  // m
  NoiseModel noise;
};

inline RobotState apply_robot_action(RobotState robot, ActionIndex action, double dt) {
  robot.position = robot.position + (robot.speed * dt) * motion_direction(action);
  return robot;
}

// ---------------------------------------------------------------------------
// Targets

struct ScriptedMotion {
  std::vector<Vec2> waypoints;
  std::size_t next = 0;  // index of the waypoint being approached
};

// Random walk that flees at boosted speed once a robot comes close.
struct AdversarialMotion {
  double walk_step = 10.0;       // m travelled between random heading changes
  double trigger_radius = 50.0;  // m
  double boost = 10.0;           // m/s added while fleeing
  double boost_duration = 5.0;   // s
  double boost_timer = 0.0;      // s remaining
  double heading = 0.0;          // rad, current random-walk heading
  double until_turn = 0.0;       // m left before the next heading draw
};

struct TargetState {
  Vec2 position;
  double speed = 5.0;  // m/s
  std::variant<ScriptedMotion, AdversarialMotion> motion = ScriptedMotion{};

  bool adversarial() const { return std::holds_alternative<AdversarialMotion>(motion); }
};

struct WorldState {
  std::size_t time_step = 0;
  double dt = 0.05;
  std::vector<RobotState> robots;
  std::vector<TargetState> targets;
  Rng rng{0};

  std::vector<Vec2> robot_positions() const {
    std::vector<Vec2> out;
    for (const auto& r : robots) out.push_back(r.position);
    return out;
  }
};

inline constexpr std::size_t kEvasionDirections = 64;

inline Vec2 grid_direction(std::size_t k) {
  const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(kEvasionDirections);
  return {std::cos(a), std::sin(a)};
}

// Grid direction whose step of length step_length maximizes the mean
// distance to the robots; lowest index on ties.
inline std::size_t evasion_direction(Vec2 from, double step_length, const std::vector<Vec2>& robots) {
  std::size_t best = 0;
  double best_mean = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < kEvasionDirections; ++k) {
    const Vec2 p = from + step_length * grid_direction(k);
    double sum = 0.0;
    for (const auto& r : robots) sum += distance(p, r);
    const double mean = robots.empty() ? 0.0 : sum / static_cast<double>(robots.size());
    if (mean > best_mean) {
      best_mean = mean;
      best = k;
    }
  }
  return best;
}

namespace detail {

inline void advance_scripted(TargetState& target, ScriptedMotion& m, double dt) {
  double budget = target.speed * dt;
  while (budget > 0.0 && m.next < m.waypoints.size()) {
    const Vec2 goal = m.waypoints[m.next];
    const double gap = distance(target.position, goal);
    if (gap <= budget) {
      target.position = goal;
      budget -= gap;
      ++m.next;
    } else {
      target.position = target.position + (budget / gap) * (goal - target.position);
      budget = 0.0;
    }
  }
}

inline void advance_adversarial(TargetState& target, AdversarialMotion& m, const std::vector<Vec2>& robots,
                                double dt, Rng& rng) {
  bool threatened = false;
  for (const auto& r : robots) threatened = threatened || distance(target.position, r) <= m.trigger_radius;
  if (threatened) m.boost_timer = m.boost_duration;

  if (m.boost_timer > 0.0) {
    const double step = (target.speed + m.boost) * dt;
    target.position = target.position + step * grid_direction(evasion_direction(target.position, step, robots));
    m.boost_timer = std::max(0.0, m.boost_timer - dt);
    return;
  }

  double budget = target.speed * dt;
  while (budget > 0.0) {
    if (m.until_turn <= 0.0) {
      m.heading = 2.0 * std::numbers::pi * uniform01(rng);
      m.until_turn = m.walk_step;
    }
    const double leg = std::min(budget, m.until_turn);
    target.position = target.position + leg * Vec2{std::cos(m.heading), std::sin(m.heading)};
    m.until_turn -= leg;
    budget -= leg;
  }
}

}  // namespace detail

// Moves every target by one step of length dt given the current robot
// positions. Consumes world.rng only for random-walk heading draws.
inline void advance_targets(WorldState& world) {
  const auto robots = world.robot_positions();
  for (auto& target : world.targets) {
    if (auto* s = std::get_if<ScriptedMotion>(&target.motion)) {
      detail::advance_scripted(target, *s, world.dt);
    } else {
      detail::advance_adversarial(target, std::get<AdversarialMotion>(target.motion), robots, world.dt, world.rng);
    }
  }
}

// ---------------------------------------------------------------------------
// Sensing

struct Detection {
  std::size_t target = 0;
  double range = 0.0;    // m
  double bearing = 0.0;  // rad
};

struct ObservationSnapshot {
  std::vector<std::vector<Detection>> per_robot;  // robot slot -> detections
  std::vector<std::optional<Vec2>> fused;         // target -> estimate
  std::vector<Vec2> robot_positions;              // where the readings were taken

  bool detects(std::size_t robot, std::size_t target) const {
    for (const auto& d : per_robot[robot]) {
      if (d.target == target) return true;
    }
    return false;
  }
};

// Noisy range-bearing readings of every target inside a robot's field of
// view, fused across robots by averaging the implied position fixes.
//
// Range noise has standard deviation sigma(d); bearing noise has standard
// deviation sigma(d) / d, i.e. the same sigma(d) meters across range. Fix
// errors are formed relative to the true position so that a noiseless sensor
// reproduces it bit-for-bit.
inline ObservationSnapshot sense(WorldState& world) {
  ObservationSnapshot snap;
  snap.per_robot.resize(world.robots.size());
  snap.fused.assign(world.targets.size(), std::nullopt);
  snap.robot_positions = world.robot_positions();

  std::vector<Vec2> error_sum(world.targets.size());
  std::vector<std::size_t> fixes(world.targets.size(), 0);

  for (std::size_t i = 0; i < world.robots.size(); ++i) {
    const auto& robot = world.robots[i];
    for (std::size_t j = 0; j < world.targets.size(); ++j) {
      const Vec2 rel = world.targets[j].position - robot.position;
      const double d = norm(rel);
      if (d > robot.fov_radius) continue;

      double eps_r = 0.0;
      double eps_b = 0.0;
      if (!robot.noise.noiseless()) {
        const double sigma = robot.noise.sigma(d);
        eps_r = sigma * standard_normal(world.rng);
        const double zb = standard_normal(world.rng);
        eps_b = d > kZeroDistance ? (sigma / d) * zb : 0.0;
      }
      const double theta = std::atan2(rel.y, rel.x);
      snap.per_robot[i].push_back({j, d + eps_r, theta + eps_b});

      Vec2 err;
      if (d > kZeroDistance) {
        const double scale = 1.0 + eps_r / d;
        const double c = std::cos(eps_b);
        const double s = std::sin(eps_b);
        const Vec2 rotated{c * rel.x - s * rel.y, s * rel.x + c * rel.y};
        err = scale * rotated - rel;
      } else {
        err = Vec2{eps_r, 0.0} - rel;
      }
      error_sum[j] = error_sum[j] + err;
      ++fixes[j];
    }
  }
  for (std::size_t j = 0; j < world.targets.size(); ++j) {
    if (fixes[j]) snap.fused[j] = world.targets[j].position + (1.0 / static_cast<double>(fixes[j])) * error_sum[j];
  }
  return snap;
}

// Sum over targets of the distance to the nearest robot (ground truth).
inline double total_min_distance(const WorldState& world) {
  double total = 0.0;
  for (const auto& target : world.targets) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& robot : world.robots) best = std::min(best, distance(robot.position, target.position));
    if (std::isfinite(best)) total += best;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Step objectives

// Robots are agents 0..n-1 with the eight motion actions each.
inline AgentRoster robot_roster(std::size_t num_robots) { return AgentRoster::uniform(num_robots, kNumMotionActions); }

inline TrackingObjectiveParams tracking_params(const WorldState& world) {
  TrackingObjectiveParams p;
  p.max_sensing_range = 0.0;
  for (const auto& r : world.robots) p.max_sensing_range = std::max(p.max_sensing_range, r.fov_radius);
  p.num_targets = world.targets.size();
  return p;
}

// Distance table for robots that would take each action from `from`; a
// target counts as observed from a candidate position iff its (true or
// estimated) position lies within that robot's field of view.
inline DistanceTable candidate_distance_table(const std::vector<RobotState>& from, double dt,
                                              const std::vector<std::optional<Vec2>>& target_positions) {
  const auto roster = robot_roster(from.size());
  DistanceTable table(target_positions.size(), roster);
  for (std::size_t i = 0; i < from.size(); ++i) {
    for (std::size_t a = 0; a < kNumMotionActions; ++a) {
      const Vec2 p = apply_robot_action(from[i], ActionIndex{a}, dt).position;
      for (std::size_t j = 0; j < target_positions.size(); ++j) {
        if (!target_positions[j]) continue;
        const double d = distance(p, *target_positions[j]);
        if (d <= from[i].fov_radius) table.set(j, i, ActionIndex{a}, d);
      }
    }
  }
  return table;
}

// Full-information f_t: ground-truth target positions at step t, robots
// starting from their pre-action states. Accepts every bundle.
inline TableTrackingObjective full_information_objective(const std::vector<RobotState>& pre_action, double dt,
                                                         const std::vector<TargetState>& targets,
                                                         const TrackingObjectiveParams& params) {
  std::vector<std::optional<Vec2>> truth;
  for (const auto& t : targets) truth.emplace_back(t.position);
  return TableTrackingObjective(candidate_distance_table(pre_action, dt, truth), params);
}

// f_{t-1} as the heuristic baseline sees it: last step's fused estimates,
// robots moving from their current states.
inline TableTrackingObjective estimated_objective(const std::vector<RobotState>& current, double dt,
                                                  const ObservationSnapshot& previous,
                                                  const TrackingObjectiveParams& params) {
  return TableTrackingObjective(candidate_distance_table(current, dt, previous.fused), params);
}

// Bandit-feedback f_t built from this step's shared measurements: robot i
// observes target j iff it detected j, at distance from its post-action
// position to the fused estimate. Only prefixes of the executed bundle in
// roster order may be evaluated.
class BanditTrackingOracle final : public StepObjective {
 public:
  BanditTrackingOracle(ObservationSnapshot snapshot, const ActionBundle& executed, TrackingObjectiveParams params)
      : snap_(std::move(snapshot)), params_(params) {
    const auto roster = robot_roster(snap_.per_robot.size());
    ActionBundle prefix;
    prefixes_.push_back(prefix);
    for (const auto& agent : roster) {
      auto a = executed.action_of(agent.id);
      if (!a) throw ParameterError("executed bundle must assign every robot an action");
      prefix.insert({agent.id, *a});
      prefixes_.push_back(prefix);
    }
  }

  const std::vector<ActionBundle>& query_log() const { return queries_; }
  const ObservationSnapshot& snapshot() const { return snap_; }

 protected:
  double do_evaluate(const ActionBundle& bundle) override {
    queries_.push_back(bundle);
    bool allowed = false;
    for (const auto& p : prefixes_) allowed = allowed || p == bundle;
    if (!allowed) throw ContractViolation("bandit oracle queried on a bundle that is not an executed prefix");

    double total = params_.shift();
    std::vector<double> observing;
    for (std::size_t j = 0; j < snap_.fused.size(); ++j) {
      observing.clear();
      for (const auto& ga : bundle) {
        if (snap_.fused[j] && snap_.detects(ga.agent, j)) {
          observing.push_back(distance(snap_.robot_positions[ga.agent], *snap_.fused[j]));
        }
      }
      total += harmonic_term(observing, params_);
    }
    return total;
  }

 private:
  ObservationSnapshot snap_;
  TrackingObjectiveParams params_;
  std::vector<ActionBundle> prefixes_;
  std::vector<ActionBundle> queries_;
};

}  // namespace bsg
