#include <gtest/gtest.h>

#include "bsg/rng.hpp"
#include "bsg/submodularity.hpp"
#include "bsg/tracking_objective.hpp"

using namespace bsg;

namespace {

TrackingObjectiveParams params(std::size_t targets) {
  TrackingObjectiveParams p;
  p.max_sensing_range = 150.0;
  p.num_targets = targets;
  return p;
}

}  // namespace

TEST(TrackingObjective, SingleRobotSingleTarget) {
  const auto roster = AgentRoster::uniform(1, 1);
  DistanceTable d(1, roster);
  d.set(0, 0, ActionIndex{0}, 100.0);
  const ActionBundle b{{0, ActionIndex{0}}};
  EXPECT_DOUBLE_EQ(eval_tracking_objective(b, d, params(1)), 500.0);
}

TEST(TrackingObjective, TwoRobotsHarmonic) {
  const auto roster = AgentRoster::uniform(2, 1);
  DistanceTable d(1, roster);
  d.set(0, 0, ActionIndex{0}, 100.0);
  d.set(0, 1, ActionIndex{0}, 100.0);
  const ActionBundle both{{0, ActionIndex{0}}, {1, ActionIndex{0}}};
  EXPECT_DOUBLE_EQ(eval_tracking_objective(both, d, params(1)), 550.0);

  TableTrackingObjective f(d, params(1));
  EXPECT_DOUBLE_EQ(marginal_gain(f, {1, ActionIndex{0}}, ActionBundle{{0, ActionIndex{0}}}), 50.0);
}

TEST(TrackingObjective, EmptyBundleIsZero) {
  const auto roster = AgentRoster::uniform(2, 2);
  DistanceTable d(2, roster);
  EXPECT_DOUBLE_EQ(eval_tracking_objective({}, d, params(2)), 0.0);
  EXPECT_DOUBLE_EQ(params(2).shift() + 2 * params(2).unobserved_term(), 0.0);
}

TEST(TrackingObjective, ZeroDistanceTerm) {
  const auto roster = AgentRoster::uniform(2, 1);
  DistanceTable d(1, roster);
  d.set(0, 0, ActionIndex{0}, 0.0);
  d.set(0, 1, ActionIndex{0}, 80.0);
  EXPECT_DOUBLE_EQ(eval_tracking_objective(ActionBundle{{0, ActionIndex{0}}}, d, params(1)), 600.0);
  EXPECT_DOUBLE_EQ(eval_tracking_objective(ActionBundle{{0, ActionIndex{0}}, {1, ActionIndex{0}}}, d, params(1)),
                   600.0);
  EXPECT_DOUBLE_EQ(harmonic_term({5e-10}, params(1)), 0.0);
}

TEST(TrackingObjective, UnobservedTargetPenalty) {
  const auto roster = AgentRoster::uniform(1, 2);
  DistanceTable d(2, roster);
  d.set(0, 0, ActionIndex{0}, 30.0);
  // Target 1 is out of view for both actions.
  EXPECT_DOUBLE_EQ(eval_tracking_objective(ActionBundle{{0, ActionIndex{0}}}, d, params(2)), 1200.0 - 30.0 - 600.0);
  EXPECT_DOUBLE_EQ(eval_tracking_objective(ActionBundle{{0, ActionIndex{1}}}, d, params(2)), 0.0);
}

TEST(TrackingObjective, RejectsNegativeDistance) {
  const auto roster = AgentRoster::uniform(1, 1);
  DistanceTable d(1, roster);
  EXPECT_THROW(d.set(0, 0, ActionIndex{0}, -1.0), ParameterError);
  EXPECT_THROW(harmonic_term({-1.0}, params(1)), ParameterError);
  EXPECT_THROW(d.slot_of(7), ParameterError);
}

TEST(TrackingObjective, RandomInstancesAreMonotoneSubmodular) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t agents = 2 + uniform_index(rng, 2);
    const std::size_t actions = 2 + uniform_index(rng, 3);
    const std::size_t targets = 1 + uniform_index(rng, 4);
    const auto roster = AgentRoster::uniform(agents, actions);
    DistanceTable d(targets, roster);
    for (std::size_t j = 0; j < targets; ++j) {
      for (std::size_t i = 0; i < agents; ++i) {
        for (std::size_t a = 0; a < actions; ++a) {
          if (uniform01(rng) < 0.7) d.set(j, i, ActionIndex{a}, 150.0 * uniform01(rng));
        }
      }
    }
    TableTrackingObjective f(d, params(targets));
    const auto rep = check_monotone_submodular(f, roster, 1e-9);
    EXPECT_TRUE(rep.all()) << "trial " << trial << " worst " << rep.worst_violation;
  }
}
