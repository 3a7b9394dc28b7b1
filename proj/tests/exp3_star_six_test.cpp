#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "bsg/bandit_bench.hpp"
#include "bsg/exp3_star_six.hpp"
#include "bsg/rng.hpp"
#include "reference_exp3.hpp"

using namespace bsg;

TEST(Exp3Init, SmallHorizonRates) {
  Exp3StarSix<> l(4, 2);
  EXPECT_EQ(l.num_subroutines(), 2u);
  EXPECT_DOUBLE_EQ(l.meta_rate(), std::sqrt(std::log(2.0) / 8.0));
  EXPECT_DOUBLE_EQ(l.subroutines()[0].learning_rate, std::sqrt(std::log(8.0) / 2.0));
  EXPECT_DOUBLE_EQ(l.subroutines()[1].learning_rate, std::sqrt(std::log(8.0) / 4.0));
  EXPECT_DOUBLE_EQ(l.share_rate(), 1.0 / 3.0);
  for (const auto& s : l.subroutines()) {
    EXPECT_DOUBLE_EQ(s.exploration, s.learning_rate / 2.0);
    for (double w : s.log_weights) EXPECT_EQ(w, 0.0);
  }
  for (double z : l.meta_log_weights()) EXPECT_EQ(z, 0.0);
  EXPECT_FALSE(l.has_cached_distribution());
}

TEST(Exp3Init, SingleStepHorizon) {
  Exp3StarSix<> l(1, 5);
  EXPECT_EQ(l.num_subroutines(), 1u);
  EXPECT_EQ(l.meta_rate(), 0.0);
  EXPECT_EQ(l.share_rate(), 0.0);
  const auto& p = l.next_distribution();
  for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(p[i], 0.2);
  l.update(ActionIndex{2}, 0.3);
}

TEST(Exp3Init, RatesDecreaseAcrossSubroutines) {
  Exp3StarSix<> l(1024, 8);
  ASSERT_EQ(l.num_subroutines(), 10u);
  for (std::size_t j = 1; j < 10; ++j) {
    EXPECT_LT(l.subroutines()[j].learning_rate, l.subroutines()[j - 1].learning_rate);
  }
}

TEST(Exp3Init, RejectsEmptyArguments) {
  EXPECT_THROW(Exp3StarSix<>(0, 3), ParameterError);
  EXPECT_THROW(Exp3StarSix<>(3, 0), ParameterError);
}

TEST(Exp3Distribution, FirstCallIsUniform) {
  for (std::size_t k : {1u, 2u, 7u}) {
    Exp3StarSix<> l(100, k);
    const auto& p = l.next_distribution();
    for (std::size_t i = 0; i < k; ++i) EXPECT_DOUBLE_EQ(p[i], 1.0 / static_cast<double>(k));
  }
}

TEST(Exp3Distribution, IdempotentUntilUpdate) {
  Exp3StarSix<> l(16, 3);
  l.next_distribution();
  l.update(ActionIndex{1}, 0.2);
  const auto first = l.next_distribution();
  const auto& second = l.next_distribution();
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(first[i], second[i]);
}

TEST(Exp3Distribution, SingleSubroutineIsItsOwnMixture) {
  // T = 2 gives J = 1, so q is one-hot and p equals p^(1).
  Exp3StarSix<> l(2, 2);
  l.next_distribution();
  l.update(ActionIndex{0}, 0.0);
  const auto& p = l.next_distribution();
  const auto& p1 = l.cached_subroutine_distributions()[0];
  EXPECT_EQ(p[0], p1[0]);
  EXPECT_EQ(p[1], p1[1]);
}

TEST(Exp3Distribution, FullRewardKeepsUniform) {
  Exp3StarSix<> l(64, 4);
  l.next_distribution();
  l.update(ActionIndex{3}, 1.0);
  const auto& p = l.next_distribution();
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(p[i], 0.25, 1e-15);
}

TEST(Exp3Estimate, ZeroRewardExample) {
  const auto est = implicit_exploration_estimate(2, ActionIndex{0}, 0.0, 0.5, 0.1);
  EXPECT_NEAR(est[0], -2.0 / 3.0, 1e-15);
  EXPECT_EQ(est[1], 1.0);
}

TEST(Exp3Estimate, BoundsAndMonotonicity) {
  const double gamma = 0.2;
  double prev = 2.0;
  for (double r = 1.0; r >= 0.0; r -= 0.1) {
    const auto est = implicit_exploration_estimate(3, ActionIndex{1}, r, 0.3, gamma);
    EXPECT_LE(est[1], 1.0);
    EXPECT_GE(est[1], 1.0 - 1.0 / gamma);
    EXPECT_LT(est[1], prev);
    prev = est[1];
    EXPECT_EQ(est[0], 1.0);
    EXPECT_EQ(est[2], 1.0);
  }
}

TEST(Exp3Update, RequiresDistributionFirst) {
  Exp3StarSix<> l(8, 2);
  EXPECT_THROW(l.update(ActionIndex{0}, 0.5), StateError);
  l.next_distribution();
  l.update(ActionIndex{0}, 0.5);
  EXPECT_THROW(l.update(ActionIndex{0}, 0.5), StateError);
}

TEST(Exp3Update, RejectsBadArguments) {
  Exp3StarSix<> l(8, 2);
  l.next_distribution();
  EXPECT_THROW(l.update(ActionIndex{0}, 1.5), ParameterError);
  EXPECT_THROW(l.update(ActionIndex{0}, -0.1), ParameterError);
  EXPECT_THROW(l.update(ActionIndex{0}, std::nan("")), ParameterError);
  EXPECT_THROW(l.update(ActionIndex{2}, 0.5), ParameterError);
  l.update(ActionIndex{1}, 0.5);
}

TEST(Exp3Update, FixedShareFloor) {
  const std::size_t T = 50;
  const std::size_t K = 4;
  Exp3StarSix<> l(T, K);
  Rng rng(4);
  for (std::size_t t = 0; t + 1 < T; ++t) {
    const auto& p = l.next_distribution();
    for (std::size_t j = 0; j < l.num_subroutines(); ++j) {
      for (double pj : l.cached_subroutine_distributions()[j].probs()) {
        if (t > 0) {
          EXPECT_GE(pj, l.share_rate() / K * (1.0 - 1e-12));
        }
      }
    }
    EXPECT_TRUE(p.valid());
    // Always reward action 0 so the others are pushed toward the floor.
    const auto a = sample_action(p, rng);
    l.update(a, a.value == 0 ? 1.0 : 0.0);
  }
}

TEST(Exp3Update, DeterministicReplay) {
  auto run = [] {
    Exp3StarSix<> l(200, 5);
    Rng rng(99);
    std::vector<double> out;
    for (int t = 0; t < 200; ++t) {
      const auto& p = l.next_distribution();
      const auto a = sample_action(p, rng);
      l.update(a, uniform01(rng));
    }
    for (const auto& s : l.subroutines()) out.insert(out.end(), s.log_weights.begin(), s.log_weights.end());
    out.insert(out.end(), l.meta_log_weights().begin(), l.meta_log_weights().end());
    return out;
  };
  EXPECT_EQ(run(), run());
}

TEST(Exp3Update, LongHorizonStaysFinite) {
  const std::size_t T = 100000;
  Exp3StarSix<> l(T, 3);
  Rng rng(5);
  for (std::size_t t = 0; t < T; ++t) {
    const auto& p = l.next_distribution();
    ASSERT_TRUE(p.valid());
    const auto a = sample_action(p, rng);
    l.update(a, a.value == 2 ? 1.0 : 0.0);
  }
  for (const auto& s : l.subroutines()) {
    for (double w : s.log_weights) EXPECT_TRUE(std::isfinite(w));
  }
  EXPECT_GT(l.next_distribution()[2], 0.9);
}

TEST(Exp3Update, LearnsStationaryBestArm) {
  const std::size_t T = 4096;
  Exp3StarSix<> l(T, 4);
  Rng rng(6);
  const double mu[4] = {0.2, 0.3, 0.8, 0.4};
  std::vector<std::size_t> late(4, 0);
  for (std::size_t t = 0; t < T; ++t) {
    const auto a = sample_action(l.next_distribution(), rng);
    if (t >= 3 * T / 4) ++late[a.value];
    l.update(a, uniform01(rng) < mu[a.value] ? 1.0 : 0.0);
  }
  EXPECT_EQ(std::max_element(late.begin(), late.end()) - late.begin(), 2);
  EXPECT_GT(late[2], 2 * (T / 4) / 4);  // twice the uniform share
}

template <EstimatorDenominator D>
void compare_with_reference(std::size_t T, std::size_t K, std::uint64_t seed) {
  Exp3StarSix<D> engine(T, K);
  bsg_test::ReferenceExp3StarSix ref(T, K);
  Rng rng(seed);
  for (std::size_t t = 0; t < T; ++t) {
    const auto& p = engine.next_distribution();
    const auto pr = ref.p();
    for (std::size_t i = 0; i < K; ++i) ASSERT_NEAR(p[i], static_cast<double>(pr[i]), 1e-12);
    for (std::size_t j = 0; j < ref.subroutines(); ++j) {
      const auto pj = ref.p_sub(j);
      for (std::size_t i = 0; i < K; ++i) {
        ASSERT_NEAR(engine.cached_subroutine_distributions()[j][i], static_cast<double>(pj[i]), 1e-12);
      }
    }
    const auto a = sample_action(p, rng);
    const double r = uniform01(rng);
    engine.update(a, r);
    ref.update(a.value, r);
  }
}

TEST(Exp3Reference, MatchesTranscription) {
  for (std::size_t T : {2u, 4u, 8u, 16u}) {
    for (std::size_t K : {2u, 3u, 5u}) {
      for (std::uint64_t seed : {1u, 2u, 3u}) compare_with_reference<EstimatorDenominator::Aggregate>(T, K, seed);
    }
  }
}

TEST(Exp3Reference, PerSubroutineVariantDiffers) {
  Exp3StarSix<EstimatorDenominator::Aggregate> a(64, 3);
  Exp3StarSix<EstimatorDenominator::PerSubroutine> b(64, 3);
  for (int t = 0; t < 10; ++t) {
    a.next_distribution();
    b.next_distribution();
    a.update(ActionIndex{0}, 0.1);
    b.update(ActionIndex{0}, 0.1);
  }
  EXPECT_NE(a.next_distribution()[0], b.next_distribution()[0]);
  EXPECT_TRUE(b.next_distribution().valid());
}

TEST(Exp3Trace, RecordsRows) {
  Exp3StarSix<> l(4, 2);
  l.enable_trace();
  for (int t = 0; t < 4; ++t) {
    l.next_distribution();
    l.update(ActionIndex{static_cast<std::size_t>(t % 2)}, 0.5);
  }
  ASSERT_EQ(l.trace().size(), 4u);
  EXPECT_EQ(l.trace()[0].t, 1u);
  EXPECT_EQ(l.trace()[3].chosen, 1u);
  std::ostringstream os;
  write_trace_csv(os, l.trace());
  EXPECT_EQ(os.str().substr(0, 20), "t,chosen,reward,p0,p");
}

TEST(Exp3Ops, GrowLogarithmically) {
  auto per_step = [](std::size_t T) {
    Exp3StarSix<> l(T, 8);
    for (int t = 0; t < 100; ++t) {
      l.next_distribution();
      l.update(ActionIndex{0}, 0.5);
    }
    return static_cast<double>(l.arithmetic_ops()) / 100.0;
  };
  EXPECT_NEAR(per_step(1u << 14) / per_step(1u << 10), 14.0 / 10.0, 0.05);
}

TEST(BanditBench, EnvironmentSwitchesBestArm) {
  PiecewiseStationaryBandit env(8, 1000, 3, 7);
  EXPECT_EQ(env.best_action_changes(), 3u);
  for (std::size_t t = 0; t < 1000; ++t) EXPECT_DOUBLE_EQ(env.means_at(t)[env.best_action_at(t)], 0.9);
  EXPECT_THROW(PiecewiseStationaryBandit(1, 10, 0, 1), ParameterError);
}

TEST(BanditBench, RegretBelowEnvelope) {
  PiecewiseStationaryBandit env(8, 2048, 3, 21);
  Rng rng(22);
  const auto res = run_bandit_benchmark(env, rng);
  EXPECT_GT(res.regret, 0.0);
  EXPECT_LT(res.regret, exp3_star_six_regret_envelope(2048, 8, 3, 0.1));
}
