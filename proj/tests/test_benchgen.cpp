// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "support/checks.hpp"
#include "xminigrid/benchgen.hpp"

using namespace xmg;

TEST(Config, Table6Values) {
  const auto h = BenchmarkConfig::high();
  EXPECT_EQ(h.chain_depth, 3);
  EXPECT_TRUE(h.prune_chain);
  EXPECT_DOUBLE_EQ(h.prune_prob, 0.1);
  EXPECT_EQ(h.num_distractor_rules, 4);
  EXPECT_EQ(h.num_distractor_objects, 1);
  EXPECT_EQ(h.random_seed, 42u);
  EXPECT_EQ(h.max_tree_rules(), 14u);
  EXPECT_EQ(h.max_rules(), 18u);
  const auto s = BenchmarkConfig::small();
  EXPECT_DOUBLE_EQ(s.prune_prob, 0.3);
  EXPECT_EQ(s.num_distractor_objects, 2);
  EXPECT_EQ(BenchmarkConfig::trivial().max_objects(), 5u);
  EXPECT_THROW(BenchmarkConfig::named("huge"), InvalidConfig);
  BenchmarkConfig bad;
  bad.chain_depth = 6;
  EXPECT_THROW(bad.validate(), InvalidConfig);
}

TEST(SampleGoal, UniformOverEligibleIds) {
  std::map<int, int> freq;
  const int n = 100000;
  const Rng root = Rng::from_seed(1);
  for (int i = 0; i < n; ++i) {
    const auto g = sample_goal(root.child(i));
    freq[g[0]]++;
    if (goal_entity_arity(static_cast<GoalKind>(g[0])) == 2) {
      ASSERT_NE(g[1], g[2]);
    }
  }
  EXPECT_EQ(freq.count(5), 0u);
  EXPECT_EQ(freq.count(6), 0u);
  EXPECT_EQ(freq.count(2), 0u);
  EXPECT_EQ(freq.size(), 11u);
  const double expected = n / 11.0, sigma = std::sqrt(n * (1.0 / 11) * (10.0 / 11));
  double chi2 = 0;
  for (auto [id, c] : freq) {
    EXPECT_LT(std::abs(c - expected), 3 * sigma) << "goal " << id;
    chi2 += (c - expected) * (c - expected) / expected;
  }
  EXPECT_LT(chi2, 29.59);  // df 10, p = 0.001
}

TEST(TaskTree, DepthZeroHasNoRules) {
  const auto t = sample_task_tree(Rng::from_seed(3), BenchmarkConfig::trivial());
  EXPECT_EQ(t.num_rules(), 0u);
  EXPECT_EQ(t.init_objects, check::goal_args(t.goal));
}

TEST(TaskTree, CompleteBinaryBound) {
  BenchmarkConfig cfg;
  cfg.chain_depth = 3;
  std::size_t max_seen = 0;
  for (int i = 0; i < 3000; ++i) {
    const auto t = sample_task_tree(Rng::from_seed(i), cfg);
    ASSERT_LE(t.num_rules(), 14u);
    ASSERT_LE(t.init_objects.size(), 16u);
    max_seen = std::max(max_seen, t.num_rules());
    std::set<EntityCode> inputs;
    for (const auto& r : t.rules())
      for (auto c : check::rule_inputs(r)) ASSERT_TRUE(inputs.insert(c).second);
  }
  EXPECT_EQ(max_seen, 14u);
}

TEST(TaskTree, DepthFiveCanExhaustPool) {
  BenchmarkConfig cfg;
  cfg.chain_depth = 5;
  int exhausted = 0, ok = 0;
  for (int i = 0; i < 200; ++i) {
    try {
      const auto t = sample_task_tree(Rng::from_seed(i), cfg);
      EXPECT_LE(t.objects.size(), 70u);
      ++ok;
    } catch (const ObjectPoolExhausted&) {
      ++exhausted;
    }
  }
  EXPECT_GT(ok, 0);
  EXPECT_EQ(exhausted + ok, 200);
}

TEST(Distractors, TrivialAndHighCounts) {
  for (int i = 0; i < 500; ++i) {
    const auto t = generate_task(Rng::from_seed(i), BenchmarkConfig::trivial());
    EXPECT_EQ(t.distractors.rules.size(), 0u);
    EXPECT_EQ(t.distractors.objects.size(), 3u);
    EXPECT_EQ(t.ruleset.num_rules(), 0u);
    const auto h = generate_task(Rng::from_seed(i), BenchmarkConfig::high());
    EXPECT_LE(h.distractors.rules.size(), 4u);
    EXPECT_EQ(h.distractors.objects.size(), 1u);
    EXPECT_LE(h.ruleset.num_rules(), 18u);
    EXPECT_EQ(h.ruleset.rules.size(), 18u);
  }
}

TEST(Distractors, SoundAndUnique) {
  for (const auto& cfg : {BenchmarkConfig::trivial(), BenchmarkConfig::small(), BenchmarkConfig::medium(),
                          BenchmarkConfig::high()}) {
    for (int i = 0; i < 1000; ++i) {
      const auto t = generate_task(Rng::from_seed(i), cfg);
      EXPECT_EQ(check::check_uniqueness(t), "") << cfg.name << " " << i;
      EXPECT_EQ(check::check_distractors(t), "") << cfg.name << " " << i;
    }
  }
}

TEST(Generate, DeterministicAndPadded) {
  const auto a = generate_ruleset(Rng::from_seed(17), BenchmarkConfig::medium());
  EXPECT_EQ(a, generate_ruleset(Rng::from_seed(17), BenchmarkConfig::medium()));
  EXPECT_EQ(a.rules.size(), BenchmarkConfig::medium().max_rules());
  EXPECT_EQ(a.init_objects.size(), BenchmarkConfig::medium().max_objects());
}

TEST(Generate, SampledDepth) {
  BenchmarkConfig cfg = BenchmarkConfig::high();
  cfg.sample_depth = true;
  std::set<std::size_t> levels;
  for (int i = 0; i < 400; ++i) levels.insert(sample_task_tree(Rng::from_seed(i), cfg).levels.size());
  EXPECT_EQ(levels, (std::set<std::size_t>{0, 1, 2, 3}));
}

TEST(Benchmark, UniqueAndReproducible) {
  const auto a = generate_benchmark(BenchmarkConfig::trivial(), 1000);
  ASSERT_EQ(a.size(), 1000u);
  std::set<std::string> keys;
  for (const auto& rs : a) keys.insert(canonical_encoding(rs));
  EXPECT_EQ(keys.size(), 1000u);
  EXPECT_EQ(a, generate_benchmark(BenchmarkConfig::trivial(), 1000));
  GenerateOptions opts;
  opts.workers = 3;
  opts.chunk = 100;
  // Chunking and workers change nothing.
  EXPECT_EQ(a, generate_benchmark(BenchmarkConfig::trivial(), 1000, opts));
}

TEST(Benchmark, CanonicalIgnoresOrder) {
  Ruleset a;
  a.goal = {1, 85, 0, 0};
  a.rules = {{3, 85, 99, 147}, {1, 147, 0, 85}};
  a.init_objects = {99, 85, 0};
  Ruleset b = a;
  std::swap(b.rules[0], b.rules[1]);
  b.init_objects = {85, 99};
  b.rules.push_back(kEmptyRuleEncoding);
  EXPECT_EQ(canonical_encoding(a), canonical_encoding(b));
  b.goal[0] = 3;
  EXPECT_NE(canonical_encoding(a), canonical_encoding(b));
}

TEST(Stats, HistogramsWiden) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> support;
  for (const auto& cfg : {BenchmarkConfig::trivial(), BenchmarkConfig::small(), BenchmarkConfig::medium(),
                          BenchmarkConfig::high()}) {
    const auto b = generate_benchmark(cfg, 2000);
    const auto h = ruleset_stats(b);
    std::size_t total = 0;
    for (auto [k, v] : h) total += v;
    EXPECT_EQ(total, b.size());
    support[cfg.name] = {h.begin()->first, h.rbegin()->first};
  }
  EXPECT_EQ(support["trivial"], (std::pair<std::size_t, std::size_t>{0, 0}));
  EXPECT_LE(support["small"].second, 4u);
  EXPECT_LE(support["high"].second, 18u);
  EXPECT_LT(support["small"].second, support["medium"].second);
  EXPECT_LT(support["medium"].second, support["high"].second);
  std::ostringstream csv;
  write_stats_csv(csv, {{0, 5}, {2, 1}});
  EXPECT_EQ(csv.str(), "num_rules,count\n0,5\n2,1\n");
}
