#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "bsg/coordination.hpp"
#include "bsg/errors.hpp"
#include "bsg/regret.hpp"
#include "bsg/rng.hpp"
#include "bsg/scenario.hpp"
#include "bsg/submodularity.hpp"
#include "bsg/tracking_sim.hpp"

namespace bsg {

enum class Algorithm { Bsg, SgHeuristic, Sg };

inline std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Bsg: return "bsg";
    case Algorithm::SgHeuristic: return "sg-heuristic";
    case Algorithm::Sg: return "sg";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "bsg") return Algorithm::Bsg;
  if (name == "sg-heuristic") return Algorithm::SgHeuristic;
  if (name == "sg") return Algorithm::Sg;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// One simulated episode

struct StepRecord {
  std::size_t t = 0;  // 1-based
  double total_min_distance = 0.0;
  double f_alg = 0.0;           // full-information value of the executed bundle
  double f_alg_observed = 0.0;  // value the robots measured
  double f_opt = 0.0;
  std::size_t delta_running = 0;  // optimal-action switches up to t
};

struct TrajectoryPoint {
  std::size_t t = 0;
  bool robot = true;
  std::size_t id = 0;
  Vec2 position;
};

struct EpisodeOptions {
  double dt = 0.05;
  std::size_t steps = 600;
  std::uint64_t seed = 1;
  bool record_trajectory = false;
  bool record_ledger = true;
  RewardMode reward_mode = RewardMode::Increment;
  // Increment mode: agent i's scale is motion_bound * |T| * speed_i * dt.
  double motion_bound = 2.0;
};

// Per-agent reward scales for BSG under the chosen mode.
inline std::vector<double> bsg_reward_scales(const WorldState& world, const TrackingObjectiveParams& params,
                                             RewardMode mode, double motion_bound) {
  std::vector<double> scales;
  for (const auto& r : world.robots) {
    scales.push_back(mode == RewardMode::Absolute
                         ? params.reward_scale()
                         : motion_bound * static_cast<double>(params.num_targets) * r.speed * world.dt);
  }
  return scales;
}

struct EpisodeResult {
  std::vector<StepRecord> steps;
  RegretLedger ledger;
  std::vector<TrajectoryPoint> trajectory;
  std::size_t clamped_rewards = 0;
  std::size_t bandit_evaluations = 0;

  double final_total_min_distance() const { return steps.empty() ? 0.0 : steps.back().total_min_distance; }
};

// Runs one algorithm on a scenario. Each step: targets move (reacting to the
// robots' previous positions), the robots select and execute actions, shared
// measurements are taken, and f_t is evaluated under bandit feedback. The
// world stream (noise, random walks) and the algorithm stream are derived
// separately from opts.seed.
inline EpisodeResult run_episode(const Scenario& scenario, Algorithm alg, const EpisodeOptions& opts) {
  WorldState world = scenario.make_world(opts.dt, derive_seed(opts.seed, {0}));
  Rng alg_rng(derive_seed(opts.seed, {1}));
  const auto roster = robot_roster(world.robots.size());
  const auto params = tracking_params(world);

  std::optional<BsgCoordinator<>> coord;
  if (alg == Algorithm::Bsg) {
    if (!(opts.motion_bound > 0.0)) throw ParameterError("motion bound must be positive");
    coord.emplace(roster, opts.steps, bsg_reward_scales(world, params, opts.reward_mode, opts.motion_bound),
                  opts.reward_mode);
  }

  EpisodeResult res;
  std::optional<ObservationSnapshot> previous;
  std::optional<ActionBundle> prev_opt;
  std::size_t delta = 0;

  auto record_positions = [&](std::size_t t) {
    if (!opts.record_trajectory) return;
    for (std::size_t i = 0; i < world.robots.size(); ++i) res.trajectory.push_back({t, true, i, world.robots[i].position});
    for (std::size_t j = 0; j < world.targets.size(); ++j) res.trajectory.push_back({t, false, j, world.targets[j].position});
  };
  record_positions(0);

  for (std::size_t t = 1; t <= opts.steps; ++t) {
    advance_targets(world);
    const std::vector<RobotState> pre = world.robots;
    auto truth = full_information_objective(pre, world.dt, world.targets, params);

    ActionBundle bundle;
    switch (alg) {
      case Algorithm::Bsg:
        bundle = coord->select(alg_rng);
        break;
      case Algorithm::Sg:
        bundle = sg_full_information(roster, truth);
        break;
      case Algorithm::SgHeuristic:
        if (previous) {
          auto stale = estimated_objective(pre, world.dt, *previous, params);
          bundle = sg_heuristic_step(roster, &stale, alg_rng);
        } else {
          bundle = sg_heuristic_step(roster, nullptr, alg_rng);
        }
        break;
    }

    for (std::size_t i = 0; i < world.robots.size(); ++i) {
      world.robots[i] = apply_robot_action(world.robots[i], *bundle.action_of(i), world.dt);
    }
    ++world.time_step;

    auto snapshot = sense(world);
    BanditTrackingOracle oracle(snapshot, bundle, params);
    StepRecord rec;
    rec.t = t;
    std::vector<double> rewards;
    if (coord) {
      auto step = coord->observe(oracle);
      rec.f_alg_observed = step.value;
      rewards = std::move(step.rewards);
    } else {
      rec.f_alg_observed = oracle.evaluate(bundle);
    }
    res.bandit_evaluations += oracle.evaluations();

    rec.f_alg = truth.evaluate(bundle);
    auto opt = brute_force_optimum(roster, truth);
    rec.f_opt = opt.value;
    if (prev_opt) {
      for (const auto& agent : roster) delta += prev_opt->action_of(agent.id) != opt.bundle.action_of(agent.id);
    }
    rec.delta_running = delta;
    rec.total_min_distance = total_min_distance(world);
    res.steps.push_back(rec);

    if (opts.record_ledger) {
      res.ledger.append({t, bundle, std::move(rewards), rec.f_alg, rec.f_alg_observed, rec.f_opt, opt.bundle});
    }
    prev_opt = std::move(opt.bundle);
    previous = std::move(snapshot);
    record_positions(t);
  }
  if (coord) res.clamped_rewards = coord->total_clamped();
  return res;
}

// ---------------------------------------------------------------------------
// Monte-Carlo experiment

struct ExperimentConfig {
  Scenario scenario;
  Algorithm algorithm = Algorithm::Bsg;
  // Empty: run once with the scenario's own dt and horizon_steps.
  std::vector<double> frequencies_hz;
  double horizon_seconds = 30.0;
  std::size_t trials = 50;
  std::uint64_t master_seed = 1;
  std::size_t threads = 0;  // 0: hardware concurrency
  bool record_trajectories = false;
  RewardMode reward_mode = RewardMode::Increment;
  double motion_bound = 2.0;
};

struct RawRow {
  std::size_t trial = 0;
  double frequency_hz = 0.0;
  std::size_t t = 0;
  Algorithm alg = Algorithm::Bsg;
  double total_min_distance = 0.0;
  double f_alg = 0.0;
  double f_opt = 0.0;
  std::size_t delta_running = 0;
};

struct AggregateRow {
  double frequency_hz = 0.0;
  std::size_t t = 0;
  double mean_tmd = 0.0;
  double std_tmd = 0.0;
  double mean_regret = 0.0;
};

struct TrialOutcome {
  std::size_t trial = 0;
  double frequency_hz = 0.0;
  std::size_t steps = 0;
  double final_total_min_distance = 0.0;
  double tracking_regret = 0.0;
  std::size_t adversarial_effect = 0;
  std::size_t clamped_rewards = 0;
  std::size_t bandit_evaluations = 0;
};

struct TrajectoryRow {
  std::size_t trial = 0;
  double frequency_hz = 0.0;
  TrajectoryPoint point;
};

struct RunSummary {
  std::vector<RawRow> raw;
  std::vector<AggregateRow> aggregate;
  std::vector<TrialOutcome> trials;
  std::vector<TrajectoryRow> trajectories;

  // Mean over trials of the final-step total minimum distance at one frequency.
  double mean_final_tmd(double frequency_hz) const {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& o : trials) {
      if (o.frequency_hz == frequency_hz) {
        sum += o.final_total_min_distance;
        ++n;
      }
    }
    return n ? sum / static_cast<double>(n) : 0.0;
  }
};

// Groups raw rows by (frequency, t): mean and sample standard deviation of
// the total minimum distance, and the mean running tracking regret
// 1/2 sum f_opt - sum f_alg up to t.
inline std::vector<AggregateRow> aggregate_rows(const std::vector<RawRow>& raw) {
  struct Acc {
    std::vector<double> tmd;
    double regret_sum = 0.0;
  };
  std::map<std::pair<double, std::size_t>, Acc> groups;
  std::map<std::pair<double, std::size_t>, double> running;  // (freq, trial) -> regret so far
  // Raw rows arrive ordered by t within each (freq, trial).
  for (const auto& r : raw) {
    double& reg = running[{r.frequency_hz, r.trial}];
    reg += 0.5 * r.f_opt - r.f_alg;
    auto& g = groups[{r.frequency_hz, r.t}];
    g.tmd.push_back(r.total_min_distance);
    g.regret_sum += reg;
  }
  std::vector<AggregateRow> out;
  for (const auto& [key, g] : groups) {
    const double n = static_cast<double>(g.tmd.size());
    double mean = 0.0;
    for (double v : g.tmd) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : g.tmd) ss += (v - mean) * (v - mean);
    out.push_back({key.first, key.second, mean, g.tmd.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0,
                   g.regret_sum / n});
  }
  return out;
}

inline RunSummary run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials == 0) throw ParameterError("trials must be at least 1");
  for (double f : cfg.frequencies_hz) {
    if (!(f > 0.0)) throw ParameterError("frequencies must be positive");
  }
  if (!cfg.frequencies_hz.empty() && !(cfg.horizon_seconds > 0.0)) throw ParameterError("horizon must be positive");

  struct Job {
    double frequency_hz;
    double dt;
    std::size_t steps;
    std::size_t trial;
  };
  std::vector<Job> jobs;
  if (cfg.frequencies_hz.empty()) {
    for (std::size_t k = 0; k < cfg.trials; ++k) {
      jobs.push_back({1.0 / cfg.scenario.dt, cfg.scenario.dt, cfg.scenario.horizon_steps, k});
    }
  } else {
    for (double f : cfg.frequencies_hz) {
      const auto steps = static_cast<std::size_t>(std::llround(cfg.horizon_seconds * f));
      if (steps == 0) throw ParameterError("horizon * frequency rounds to zero steps");
      for (std::size_t k = 0; k < cfg.trials; ++k) jobs.push_back({f, 1.0 / f, steps, k});
    }
  }

  std::vector<EpisodeResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto& job = jobs[i];
      EpisodeOptions opts;
      opts.dt = job.dt;
      opts.steps = job.steps;
      // Same trial index shares its seed across frequencies and algorithms.
      opts.seed = derive_seed(cfg.master_seed, {job.trial});
      opts.record_trajectory = cfg.record_trajectories;
      opts.reward_mode = cfg.reward_mode;
      opts.motion_bound = cfg.motion_bound;
      results[i] = run_episode(cfg.scenario, cfg.algorithm, opts);
    }
  };
  std::size_t nthreads = cfg.threads ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
  nthreads = std::min(nthreads, jobs.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  }

  RunSummary summary;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& job = jobs[i];
    auto& ep = results[i];
    for (const auto& s : ep.steps) {
      summary.raw.push_back({job.trial, job.frequency_hz, s.t, cfg.algorithm, s.total_min_distance, s.f_alg, s.f_opt,
                             s.delta_running});
    }
    const auto roster = robot_roster(cfg.scenario.robots.size());
    summary.trials.push_back({job.trial, job.frequency_hz, job.steps, ep.final_total_min_distance(),
                              tracking_regret(ep.ledger), adversarial_effect(ep.ledger, roster).delta_total,
                              ep.clamped_rewards, ep.bandit_evaluations});
    for (const auto& p : ep.trajectory) summary.trajectories.push_back({job.trial, job.frequency_hz, p});
    ep = EpisodeResult{};
  }
  summary.aggregate = aggregate_rows(summary.raw);
  return summary;
}

// ---------------------------------------------------------------------------
// CSV output

namespace detail {

// Shortest decimal text that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

inline void write_raw_csv(std::ostream& out, const std::vector<RawRow>& rows) {
  using detail::format_double;
  out << "trial,frequency_hz,t,alg,total_min_distance,f_alg,f_opt,delta_running\n";
  for (const auto& r : rows) {
    out << r.trial << ',' << format_double(r.frequency_hz) << ',' << r.t << ',' << algorithm_name(r.alg) << ','
        << format_double(r.total_min_distance) << ',' << format_double(r.f_alg) << ',' << format_double(r.f_opt)
        << ',' << r.delta_running << '\n';
  }
}

inline void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  using detail::format_double;
  out << "frequency_hz,t,mean_tmd,std_tmd,mean_regret\n";
  for (const auto& r : rows) {
    out << format_double(r.frequency_hz) << ',' << r.t << ',' << format_double(r.mean_tmd) << ','
        << format_double(r.std_tmd) << ',' << format_double(r.mean_regret) << '\n';
  }
}

inline void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows) {
  using detail::format_double;
  out << "trial,frequency_hz,t,entity_type,id,x,y\n";
  for (const auto& r : rows) {
    out << r.trial << ',' << format_double(r.frequency_hz) << ',' << r.point.t << ','
        << (r.point.robot ? "robot" : "target") << ',' << r.point.id << ',' << format_double(r.point.position.x)
        << ',' << format_double(r.point.position.y) << '\n';
  }
}

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputPaths {
  std::filesystem::path raw;
  std::filesystem::path aggregate;
  std::filesystem::path trajectory;  // empty: not written
};

inline OutputPaths default_output_paths(const std::filesystem::path& dir, Algorithm alg) {
  const std::string stem(algorithm_name(alg));
  return {dir / (stem + "_raw.csv"), dir / (stem + "_aggregate.csv"), dir / (stem + "_trajectory.csv")};
}

// Writes the raw and aggregate files (and trajectories when present).
// Throws OutputError if a file cannot be written.
inline void emit_csv(const RunSummary& summary, const OutputPaths& paths) {
  auto open = [](const std::filesystem::path& p) {
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write '" + p.string() + "'");
    return out;
  };
  {
    auto out = open(paths.raw);
    write_raw_csv(out, summary.raw);
    if (!out) throw OutputError("write failed for '" + paths.raw.string() + "'");
  }
  {
    auto out = open(paths.aggregate);
    write_aggregate_csv(out, summary.aggregate);
    if (!out) throw OutputError("write failed for '" + paths.aggregate.string() + "'");
  }
  if (!paths.trajectory.empty() && !summary.trajectories.empty()) {
    auto out = open(paths.trajectory);
    write_trajectory_csv(out, summary.trajectories);
    if (!out) throw OutputError("write failed for '" + paths.trajectory.string() + "'");
  }
}

// ---------------------------------------------------------------------------
// Objective verification on a scenario

struct VerifyResult {
  std::size_t step = 0;
  SubmodularityReport report;
};

// Runs the exhaustive submodularity check on the full-information objective
// at t = 1 and then every `stride` steps of a random-action rollout.
inline std::vector<VerifyResult> verify_scenario(const Scenario& scenario, std::size_t checks, std::size_t stride,
                                                 std::uint64_t seed, double tolerance = 1e-9) {
  WorldState world = scenario.make_world(scenario.dt, derive_seed(seed, {0}));
  Rng rng(derive_seed(seed, {1}));
  const auto roster = robot_roster(world.robots.size());
  const auto params = tracking_params(world);
  std::vector<VerifyResult> out;
  for (std::size_t t = 1; out.size() < checks && t <= scenario.horizon_steps; ++t) {
    advance_targets(world);
    if ((t - 1) % std::max<std::size_t>(stride, 1) == 0) {
      auto f = full_information_objective(world.robots, world.dt, world.targets, params);
      out.push_back({t, check_monotone_submodular(f, roster, tolerance)});
    }
    const auto bundle = random_bundle(roster, rng);
    for (std::size_t i = 0; i < world.robots.size(); ++i) {
      world.robots[i] = apply_robot_action(world.robots[i], *bundle.action_of(i), world.dt);
    }
  }
  return out;
}

}  // namespace bsg
