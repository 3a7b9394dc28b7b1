// Command-line harness: run tracking experiments, verify scenario objectives,
// benchmark the bandit learner. Every option can also be set through an
// environment variable named BSG_<OPTION> (e.g. BSG_TRIALS=10).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bsg/bsg.hpp"

namespace {

constexpr int kExitScenario = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitOutput = 4;

struct RunArgs {
  std::string scenario;
  std::string alg = "bsg";
  std::vector<double> freqs;
  double horizon = 30.0;
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::string out = "results";
  std::size_t threads = 0;
  bool trajectories = false;
  std::string reward = "increment";
  double motion_bound = 2.0;
};

struct VerifyArgs {
  std::string scenario;
  std::size_t checks = 20;
  std::size_t stride = 30;
  std::uint64_t seed = 1;
};

struct BenchArgs {
  std::size_t actions = 8;
  std::size_t switches = 3;
  std::vector<std::size_t> horizons = {1024, 2048, 4096, 8192};
  std::size_t seeds = 20;
  std::uint64_t seed = 2024;
  double delta = 0.1;
};

// Fails early rather than after a long run.
void probe_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto probe = dir / ".bsg_write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw bsg::OutputError("output directory '" + dir.string() + "' is not writable");
  }
  std::filesystem::remove(probe, ec);
}

int cmd_run(const RunArgs& a) {
  bsg::ExperimentConfig cfg;
  cfg.scenario = bsg::load_scenario(a.scenario);
  cfg.algorithm = *bsg::parse_algorithm(a.alg);
  cfg.frequencies_hz = a.freqs;
  cfg.horizon_seconds = a.horizon;
  cfg.trials = a.trials;
  cfg.master_seed = a.seed_set ? a.seed : cfg.scenario.seed;
  cfg.threads = a.threads;
  cfg.record_trajectories = a.trajectories;
  cfg.reward_mode = a.reward == "absolute" ? bsg::RewardMode::Absolute : bsg::RewardMode::Increment;
  cfg.motion_bound = a.motion_bound;

  probe_output_dir(a.out);
  const auto summary = bsg::run_experiment(cfg);
  const auto paths = bsg::default_output_paths(a.out, cfg.algorithm);
  bsg::emit_csv(summary, paths);

  std::vector<double> freqs = a.freqs;
  if (freqs.empty()) freqs.push_back(1.0 / cfg.scenario.dt);
  std::printf("%-10s %8s %16s %16s %10s\n", "freq_hz", "steps", "mean_final_tmd", "mean_regret", "clamped");
  for (double f : freqs) {
    double regret = 0.0;
    std::size_t clamped = 0;
    std::size_t steps = 0;
    std::size_t n = 0;
    for (const auto& o : summary.trials) {
      if (o.frequency_hz != f) continue;
      regret += o.tracking_regret;
      clamped += o.clamped_rewards;
      steps = o.steps;
      ++n;
    }
    std::printf("%-10g %8zu %16.3f %16.3f %10zu\n", f, steps, summary.mean_final_tmd(f),
                n ? regret / static_cast<double>(n) : 0.0, clamped);
  }
  std::printf("wrote %s and %s\n", paths.raw.string().c_str(), paths.aggregate.string().c_str());
  if (a.trajectories) std::printf("wrote %s\n", paths.trajectory.string().c_str());
  return 0;
}

int cmd_verify(const VerifyArgs& a) {
  const auto scenario = bsg::load_scenario(a.scenario);
  const auto results = bsg::verify_scenario(scenario, a.checks, a.stride, a.seed);
  int failures = 0;
  for (const auto& r : results) {
    const auto& rep = r.report;
    failures += !rep.all();
    std::printf("step %5zu  normalized=%d monotone=%d submodular=%d worst_violation=%.3g pairs=%zu\n", r.step,
                rep.normalized, rep.monotone, rep.submodular, rep.worst_violation, rep.pairs_checked);
  }
  std::printf("%zu checks, %d failing\n", results.size(), failures);
  return failures == 0 ? 0 : 1;
}

int cmd_bench(const BenchArgs& a) {
  std::printf("%-8s %14s %14s %14s\n", "T", "mean_regret", "regret/T", "envelope");
  for (std::size_t T : a.horizons) {
    double sum = 0.0;
    for (std::size_t s = 0; s < a.seeds; ++s) {
      bsg::PiecewiseStationaryBandit env(a.actions, T, a.switches, bsg::derive_seed(a.seed, {T, 0, s}));
      bsg::Rng rng(bsg::derive_seed(a.seed, {T, 1, s}));
      sum += bsg::run_bandit_benchmark(env, rng).regret;
    }
    const double mean = sum / static_cast<double>(a.seeds);
    const double env = bsg::exp3_star_six_regret_envelope(static_cast<double>(T), static_cast<double>(a.actions),
                                                          static_cast<double>(a.switches), a.delta);
    std::printf("%-8zu %14.2f %14.5f %14.2f\n", T, mean, mean / static_cast<double>(T), env);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit sequential greedy: multi-robot tracking experiments"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Monte-Carlo tracking experiment, writes CSV files");
  run_cmd->add_option("--scenario", run.scenario, "Scenario file")->required()->envname("BSG_SCENARIO");
  run_cmd->add_option("--alg", run.alg, "Algorithm")
      ->check(CLI::IsMember({"bsg", "sg-heuristic", "sg"}))
      ->envname("BSG_ALG")
      ->capture_default_str();
  run_cmd->add_option("--freq", run.freqs, "Selection frequencies in Hz (default: the scenario's dt)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->envname("BSG_FREQ");
  run_cmd->add_option("--horizon", run.horizon, "Horizon in seconds when --freq is given")
      ->check(CLI::PositiveNumber)
      ->envname("BSG_HORIZON")
      ->capture_default_str();
  run_cmd->add_option("--trials", run.trials, "Trials per frequency")
      ->check(CLI::PositiveNumber)
      ->envname("BSG_TRIALS")
      ->capture_default_str();
  auto* seed_opt = run_cmd->add_option("--seed", run.seed, "Master seed (default: the scenario's seed)")
                       ->envname("BSG_SEED");
  run_cmd->add_option("--out", run.out, "Output directory")->envname("BSG_OUT")->capture_default_str();
  run_cmd->add_option("--threads", run.threads, "Worker threads, 0 for all cores")
      ->envname("BSG_THREADS")
      ->capture_default_str();
  run_cmd->add_flag("--trajectories", run.trajectories, "Also write positions per step")->envname("BSG_TRAJECTORIES");
  run_cmd->add_option("--reward", run.reward, "BSG reward normalization")
      ->check(CLI::IsMember({"increment", "absolute"}))
      ->envname("BSG_REWARD")
      ->capture_default_str();
  run_cmd->add_option("--motion-bound", run.motion_bound, "Increment reward scale factor")
      ->check(CLI::PositiveNumber)
      ->envname("BSG_MOTION_BOUND")
      ->capture_default_str();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Exhaustive monotone-submodularity check of a scenario's objective");
  verify_cmd->add_option("--scenario", verify.scenario, "Scenario file")->required()->envname("BSG_SCENARIO");
  verify_cmd->add_option("--checks", verify.checks, "Number of steps to check")
      ->envname("BSG_CHECKS")
      ->capture_default_str();
  verify_cmd->add_option("--stride", verify.stride, "Steps between checks")
      ->envname("BSG_STRIDE")
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed, "Seed for the rollout")->envname("BSG_SEED")->capture_default_str();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bandit-bench", "Piecewise-stationary regret benchmark of the learner");
  bench_cmd->add_option("--actions", bench.actions, "Number of arms")
      ->check(CLI::Range(2, 1 << 20))
      ->envname("BSG_ACTIONS")
      ->capture_default_str();
  bench_cmd->add_option("--switches", bench.switches, "Best-arm switches")
      ->envname("BSG_SWITCHES")
      ->capture_default_str();
  bench_cmd->add_option("--horizons", bench.horizons, "Horizons")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->envname("BSG_HORIZONS");
  bench_cmd->add_option("--seeds", bench.seeds, "Seeds per horizon")
      ->check(CLI::PositiveNumber)
      ->envname("BSG_SEEDS")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Master seed")->envname("BSG_SEED")->capture_default_str();
  bench_cmd->add_option("--delta", bench.delta, "Envelope confidence")
      ->check(CLI::Range(1e-12, 1.0))
      ->envname("BSG_DELTA")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run_cmd) {
      run.seed_set = seed_opt->count() > 0 || std::getenv("BSG_SEED") != nullptr;
      return cmd_run(run);
    }
    if (*verify_cmd) return cmd_verify(verify);
    return cmd_bench(bench);
  } catch (const bsg::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return kExitScenario;
  } catch (const bsg::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const bsg::OutputError& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kExitOutput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
