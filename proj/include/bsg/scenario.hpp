#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bsg/errors.hpp"
#include "bsg/tracking_sim.hpp"

namespace bsg {

// Scenario file contents: world timing plus the initial robots and targets.
struct Scenario {
  double dt = 0.05;
  std::size_t horizon_steps = 600;
  std::uint64_t seed = 1;
  std::vector<RobotState> robots;
  std::vector<TargetState> targets;

  double horizon_seconds() const { return dt * static_cast<double>(horizon_steps); }

  WorldState make_world(double step_dt, std::uint64_t rng_seed) const {
    WorldState w;
    w.dt = step_dt;
    w.robots = robots;
    w.targets = targets;
    w.rng.seed(rng_seed);
    return w;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline double parse_number(std::string_view text, int line) {
  text = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v)) {
    throw ScenarioError("expected a number, got '" + std::string(text) + "'", line);
  }
  return v;
}

inline std::uint64_t parse_unsigned(std::string_view text, int line) {
  text = trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ScenarioError("expected a nonnegative integer, got '" + std::string(text) + "'", line);
  }
  return v;
}

// Splits on any of the separator characters, dropping empty pieces.
inline std::vector<std::string_view> split(std::string_view s, std::string_view seps) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || seps.find(s[i]) != std::string_view::npos) {
      auto piece = trim(s.substr(start, i - start));
      if (!piece.empty()) out.push_back(piece);
      start = i + 1;
    }
  }
  return out;
}

inline std::vector<double> parse_numbers(std::string_view text, std::size_t expected, int line) {
  std::vector<double> out;
  for (auto piece : split(text, ", \t")) out.push_back(parse_number(piece, line));
  if (expected && out.size() != expected) {
    throw ScenarioError("expected " + std::to_string(expected) + " numbers, got " + std::to_string(out.size()), line);
  }
  return out;
}

inline Vec2 parse_point(std::string_view text, int line) {
  auto v = parse_numbers(text, 2, line);
  return {v[0], v[1]};
}

}  // namespace detail

// INI-style scenario text:
//
//   [world]   dt, horizon_steps, seed
//   [robot]   position = x, y; speed; fov; noise = sigma0, slope
//   [target]  mode = scripted | adversarial; position; speed;
//             waypoints = x y; x y; ...   (scripted)
//             walk_step, trigger_radius, boost, boost_duration  (adversarial)
//
// '#' starts a comment. Errors carry the offending 1-based line.
inline Scenario parse_scenario(std::istream& in) {
  using namespace detail;
  enum class Section { None, World, Robot, Target };

  Scenario sc;
  Section section = Section::None;
  bool target_has_position = false;
  int target_line = 0;
  bool saw_world = false;

  auto finish_target = [&](int line) {
    if (sc.targets.empty() || target_has_position) return;
    auto& t = sc.targets.back();
    auto* s = std::get_if<ScriptedMotion>(&t.motion);
    if (s && !s->waypoints.empty()) {
      t.position = s->waypoints.front();
      s->next = 1;
    } else {
      throw ScenarioError("target needs a position (or waypoints)", line ? line : target_line);
    }
  };

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = raw;
    if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;

    if (text.front() == '[') {
      if (text.back() != ']') throw ScenarioError("unterminated section header", line);
      const auto name = trim(text.substr(1, text.size() - 2));
      if (section == Section::Target) finish_target(target_line);
      if (name == "world") {
        if (saw_world) throw ScenarioError("duplicate [world] section", line);
        saw_world = true;
        section = Section::World;
      } else if (name == "robot") {
        section = Section::Robot;
        sc.robots.emplace_back();
      } else if (name == "target") {
        section = Section::Target;
        sc.targets.emplace_back();
        target_has_position = false;
        target_line = line;
      } else {
        throw ScenarioError("unknown section [" + std::string(name) + "]", line);
      }
      continue;
    }

    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ScenarioError("expected key = value", line);
    const auto key = trim(text.substr(0, eq));
    const auto value = trim(text.substr(eq + 1));

    switch (section) {
      case Section::None:
        throw ScenarioError("key outside of any section", line);
      case Section::World:
        if (key == "dt") {
          sc.dt = parse_number(value, line);
          if (!(sc.dt > 0.0)) throw ScenarioError("dt must be positive", line);
        } else if (key == "horizon_steps") {
          sc.horizon_steps = parse_unsigned(value, line);
          if (sc.horizon_steps == 0) throw ScenarioError("horizon_steps must be at least 1", line);
        } else if (key == "seed") {
          sc.seed = parse_unsigned(value, line);
        } else {
          throw ScenarioError("unknown [world] key '" + std::string(key) + "'", line);
        }
        break;
      case Section::Robot: {
        auto& r = sc.robots.back();
        if (key == "position") {
          r.position = parse_point(value, line);
        } else if (key == "speed") {
          r.speed = parse_number(value, line);
          if (!(r.speed > 0.0)) throw ScenarioError("robot speed must be positive", line);
        } else if (key == "fov") {
          r.fov_radius = parse_number(value, line);
          if (!(r.fov_radius > 0.0)) throw ScenarioError("fov must be positive", line);
        } else if (key == "noise") {
          auto v = parse_numbers(value, 2, line);
          if (v[0] < 0.0 || v[1] < 0.0) throw ScenarioError("noise parameters must be nonnegative", line);
          r.noise = {v[0], v[1]};
        } else {
          throw ScenarioError("unknown [robot] key '" + std::string(key) + "'", line);
        }
        break;
      }
      case Section::Target: {
        auto& t = sc.targets.back();
        if (key == "mode") {
          if (value == "scripted") {
            if (!std::holds_alternative<ScriptedMotion>(t.motion)) t.motion = ScriptedMotion{};
          } else if (value == "adversarial") {
            if (!std::holds_alternative<AdversarialMotion>(t.motion)) t.motion = AdversarialMotion{};
          } else {
            throw ScenarioError("mode must be scripted or adversarial", line);
          }
        } else if (key == "position") {
          t.position = parse_point(value, line);
          target_has_position = true;
        } else if (key == "speed") {
          t.speed = parse_number(value, line);
          if (t.speed < 0.0) throw ScenarioError("target speed must be nonnegative", line);
        } else if (key == "waypoints") {
          auto* s = std::get_if<ScriptedMotion>(&t.motion);
          if (!s) throw ScenarioError("waypoints only apply to scripted targets", line);
          s->waypoints.clear();
          for (auto piece : split(value, ";")) s->waypoints.push_back(parse_point(piece, line));
          if (s->waypoints.empty()) throw ScenarioError("waypoints list is empty", line);
        } else {
          auto* a = std::get_if<AdversarialMotion>(&t.motion);
          if (!a) throw ScenarioError("unknown [target] key '" + std::string(key) + "' (set mode first?)", line);
          const double v = parse_number(value, line);
          if (v < 0.0) throw ScenarioError(std::string(key) + " must be nonnegative", line);
          if (key == "walk_step") a->walk_step = v;
          else if (key == "trigger_radius") a->trigger_radius = v;
          else if (key == "boost") a->boost = v;
          else if (key == "boost_duration") a->boost_duration = v;
          else throw ScenarioError("unknown [target] key '" + std::string(key) + "'", line);
        }
        break;
      }
    }
  }
  if (section == Section::Target) finish_target(target_line);
  if (sc.robots.empty()) throw ScenarioError("scenario defines no [robot]", 0);
  if (sc.targets.empty()) throw ScenarioError("scenario defines no [target]", 0);
  return sc;
}

inline Scenario parse_scenario_text(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'", 0);
  return parse_scenario(in);
}

}  // namespace bsg
