// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "xminigrid/harness.hpp"
#include "xminigrid/oracle.hpp"

using namespace xmg;

TEST(Harness, RolloutStepConservation) {
  auto [env, p] = make("MiniGrid-Empty-8x8");
  RandomPolicy pol(Rng::from_seed(1));
  const RolloutStats st = rollout(env, p, pol, 1000, Rng::from_seed(2));
  EXPECT_EQ(st.steps, 1000);
  const auto sum = std::accumulate(st.trial_lengths.begin(), st.trial_lengths.end(), std::int64_t{0});
  EXPECT_EQ(sum + st.residual_steps, 1000);
  for (int len : st.trial_lengths) EXPECT_LE(len, p.max_steps);
}

TEST(Harness, NoopNeverSucceeds) {
  auto [env, p] = make("MiniGrid-Empty-5x5");
  NoopPolicy pol;
  const RolloutStats st = rollout(env, p, pol, 500, Rng::from_seed(0));
  EXPECT_EQ(st.successful_trials(), 0u);
  EXPECT_EQ(st.total_return, 0.0f);
  EXPECT_EQ(st.completed_trials(), 5u);  // 100-step budget, truncated five times
}

TEST(Harness, OraclePlanSucceeds) {
  auto [env, p] = make("MiniGrid-DoorKey-5x5");
  const Rng key = Rng::from_seed(3);
  const SolveResult r = solve(env, p, env.reset(p, key));
  ASSERT_TRUE(r.solved());
  PlanPolicy pol(r.plan);
  const RolloutStats st = rollout(env, p, pol, static_cast<std::int64_t>(r.plan.size()), key);
  ASSERT_EQ(st.completed_trials(), 1u);
  EXPECT_GT(st.trial_returns[0], 0.0f);
}

TEST(Harness, BatchInvariance) {
  auto [env, p] = make("XLand-MiniGrid-R1-9x9");
  p.ruleset = generate_ruleset(Rng::from_seed(0), BenchmarkConfig::trivial());
  const Rng key = Rng::from_seed(10);
  auto run = [&](std::size_t n, unsigned workers) {
    BatchEnv batch(env, p);
    batch.reset(key, n);
    std::vector<RandomPolicy> pols;
    for (std::size_t i = 0; i < n; ++i) pols.emplace_back(key.child(i).fold_in(1));
    std::vector<std::vector<std::uint64_t>> traces(n);
    std::vector<Action> acts(n);
    for (int s = 0; s < 600; ++s) {
      for (std::size_t i = 0; i < n; ++i) acts[i] = pols[i].next();
      batch.step(acts, workers);
      for (std::size_t i = 0; i < n; ++i) traces[i].push_back(hash_state(batch.timesteps()[i].state));
    }
    return traces;
  };
  const auto one = run(1, 1);
  const auto eight = run(8, 1);
  const auto eight_threads = run(8, 3);
  EXPECT_EQ(one[0], eight[0]);
  EXPECT_EQ(eight, eight_threads);
  const auto sixteen = run(16, 1);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(eight[i], sixteen[i]);
}

TEST(Harness, BatchStepOrder) {
  auto [env, p] = make("MiniGrid-Empty-6x6");
  std::vector<TimeStep> states;
  for (int i = 0; i < 4; ++i) states.push_back(env.reset(p, Rng::from_seed(i)));
  const std::vector<Action> acts = {Action::MoveForward, Action::TurnLeft, Action::TurnRight, Action::Toggle};
  const auto out = batch_step(env, p, states, acts);
  ASSERT_EQ(out.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(out[i], env.step(p, states[i], acts[i]));
  EXPECT_THROW(batch_step(env, p, states, std::vector<Action>(3)), InvalidAction);
}

TEST(Harness, ThroughputRuns) {
  ThroughputOptions o;
  o.num_steps = 200;
  const auto rows = bench_throughput("XLand-MiniGrid-R1-9x9", {1}, o);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_GT(rows[0].steps_per_second, 0.0);
  EXPECT_EQ(rows[0].total_steps, 200);
  EXPECT_EQ(rows[0].repeat_sps.size(), 3u);
  const auto scale = bench_scaling(ScalingAxis::NumRules, {3}, 2, o);
  ASSERT_EQ(scale.size(), 1u);
  std::ostringstream csv;
  write_throughput_csv(csv, scale);
  const std::string text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "axis,value,num_envs,total_steps,best_seconds,steps_per_second");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(Harness, TargetTotalSteps) {
  ThroughputOptions o;
  o.target_total_steps = 1000;
  o.repeats = 1;
  const auto rows = bench_throughput("MiniGrid-Empty-6x6", {1, 3, 2000}, o);
  EXPECT_EQ(rows[0].total_steps, 1000);
  EXPECT_EQ(rows[1].total_steps, 999);
  EXPECT_EQ(rows[2].total_steps, 2000);
}

TEST(Harness, Percentile) {
  EXPECT_DOUBLE_EQ(percentile({2.5, 2.5, 2.5}, 20), 2.5);
  EXPECT_DOUBLE_EQ(percentile({5, 1, 4, 2, 3}, 20), 1.8);
  EXPECT_DOUBLE_EQ(percentile({7}, 20), 7.0);
  EXPECT_DOUBLE_EQ(percentile({1, 2}, 100), 2.0);
}

TEST(Harness, EvaluateNoopAndRandom) {
  auto [env, p] = make("XLand-MiniGrid-R1-9x9");
  const auto cfg = BenchmarkConfig::trivial();
  const Benchmark tasks = Benchmark::from_rulesets(generate_benchmark(cfg, 10), cfg);
  const EvalResult noop = evaluate(env, p, tasks, [](std::size_t) { return NoopPolicy{}; }, Rng::from_seed(0));
  ASSERT_EQ(noop.task_returns.size(), 10u);
  for (double r : noop.task_returns) EXPECT_EQ(r, 0.0);
  EXPECT_EQ(noop.p20, 0.0);
  const EvalResult rnd =
      evaluate(env, p, tasks, [](std::size_t i) { return RandomPolicy(Rng::from_seed(100 + i)); }, Rng::from_seed(0));
  EXPECT_GT(rnd.mean, 0.0);
  EXPECT_LE(rnd.p20, rnd.mean * 10);
}
