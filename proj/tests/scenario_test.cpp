#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "bsg/scenario.hpp"

using namespace bsg;

namespace {

int error_line(const std::string& text) {
  try {
    parse_scenario_text(text);
  } catch (const ScenarioError& e) {
    return e.line();
  }
  return -1;
}

const char* kValid = R"(# comment line
[world]
dt = 0.1
horizon_steps = 20
seed = 4

[robot]
position = 1, 2
speed = 12
fov = 120
noise = 0.5, 0.01

[target]
mode = scripted
speed = 3
waypoints = 10 0; 10 10  # trailing comment

[target]
mode = adversarial
position = -5, 5
speed = 2
walk_step = 7
trigger_radius = 40
boost = 8
boost_duration = 3
)";

}  // namespace

TEST(Scenario, ParsesAllSections) {
  const auto sc = parse_scenario_text(kValid);
  EXPECT_DOUBLE_EQ(sc.dt, 0.1);
  EXPECT_EQ(sc.horizon_steps, 20u);
  EXPECT_EQ(sc.seed, 4u);
  EXPECT_DOUBLE_EQ(sc.horizon_seconds(), 2.0);
  ASSERT_EQ(sc.robots.size(), 1u);
  EXPECT_EQ(sc.robots[0].position, (Vec2{1, 2}));
  EXPECT_DOUBLE_EQ(sc.robots[0].fov_radius, 120.0);
  EXPECT_DOUBLE_EQ(sc.robots[0].noise.slope, 0.01);
  ASSERT_EQ(sc.targets.size(), 2u);
  // No position: starts on its first waypoint and heads for the second.
  EXPECT_EQ(sc.targets[0].position, (Vec2{10, 0}));
  EXPECT_EQ(std::get<ScriptedMotion>(sc.targets[0].motion).next, 1u);
  const auto& adv = std::get<AdversarialMotion>(sc.targets[1].motion);
  EXPECT_DOUBLE_EQ(adv.walk_step, 7.0);
  EXPECT_DOUBLE_EQ(adv.trigger_radius, 40.0);
  EXPECT_DOUBLE_EQ(adv.boost, 8.0);
  EXPECT_DOUBLE_EQ(adv.boost_duration, 3.0);
}

TEST(Scenario, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("[world]\ndt = abc\n"), 2);
  EXPECT_EQ(error_line("[world]\ndt = 0.1\n[planet]\n"), 3);
  EXPECT_EQ(error_line("speed = 3\n"), 1);
  EXPECT_EQ(error_line("[robot]\nposition = 1\n"), 2);
  EXPECT_EQ(error_line("[robot]\nspeed = -1\n"), 2);
  EXPECT_EQ(error_line("[robot]\n[target]\nmode = flying\n"), 3);
  EXPECT_EQ(error_line("[robot]\n[target]\nmode = adversarial\nwaypoints = 1 2\n"), 4);
  EXPECT_EQ(error_line("[robot]\n[target]\nspeed = 2\n\n[robot]\n"), 2);
  EXPECT_EQ(error_line("[world\n"), 1);
  EXPECT_EQ(error_line("[robot]\njust words\n"), 2);
  EXPECT_EQ(error_line("[world]\n[world]\n"), 2);
}

TEST(Scenario, RequiresRobotsAndTargets) {
  EXPECT_THROW(parse_scenario_text("[world]\ndt = 0.1\n"), ScenarioError);
  EXPECT_THROW(parse_scenario_text("[robot]\n"), ScenarioError);
  EXPECT_THROW(load_scenario("/nonexistent/file.ini"), ScenarioError);
}

TEST(Scenario, MessageIncludesLine) {
  try {
    parse_scenario_text("[world]\n\nseed = -3\n");
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Scenario, ShippedScenariosLoad) {
  const std::filesystem::path dir = BSG_SCENARIO_DIR;
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".ini") continue;
    const auto sc = load_scenario(entry.path().string());
    EXPECT_EQ(sc.robots.size(), 2u) << entry.path();
    EXPECT_GE(sc.targets.size(), 2u) << entry.path();
    for (const auto& t : sc.targets) {
      for (const auto& r : sc.robots) EXPECT_LT(t.speed, r.speed) << entry.path();
    }
    ++count;
  }
  EXPECT_EQ(count, 6u);
}
