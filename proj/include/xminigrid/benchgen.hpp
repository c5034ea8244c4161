// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "xminigrid/errors.hpp"
#include "xminigrid/rng.hpp"
#include "xminigrid/rules.hpp"

namespace xmg {

inline constexpr int kMaxChainDepth = 5;
inline constexpr std::size_t kDefaultMaxRules = 18;

struct BenchmarkConfig {
  std::string name = "custom";
  int chain_depth = 0;
  bool sample_depth = false;
  bool prune_chain = false;
  double prune_prob = 0.0;
  int num_distractor_rules = 0;
  bool sample_distractor_rules = false;
  int num_distractor_objects = 3;
  std::uint64_t random_seed = 42;

  static BenchmarkConfig trivial() { return {"trivial", 0, false, false, 0.0, 0, false, 3, 42}; }
  static BenchmarkConfig small() { return {"small", 1, false, true, 0.3, 2, true, 2, 42}; }
  static BenchmarkConfig medium() { return {"medium", 2, false, true, 0.1, 3, true, 2, 42}; }
  static BenchmarkConfig high() { return {"high", 3, false, true, 0.1, 4, true, 1, 42}; }

  static BenchmarkConfig named(const std::string& n) {
    if (n == "trivial") return trivial();
    if (n == "small") return small();
    if (n == "medium") return medium();
    if (n == "high") return high();
    throw InvalidConfig("unknown config '" + n + "' (expected trivial, small, medium or high)");
  }

  void validate() const {
    if (chain_depth < 0 || chain_depth > kMaxChainDepth)
      throw InvalidConfig("chain_depth must be in [0, 5], got " + std::to_string(chain_depth));
    if (!(prune_prob >= 0.0 && prune_prob <= 1.0)) throw InvalidConfig("prune_prob must be in [0, 1]");
    if (num_distractor_rules < 0 || num_distractor_objects < 0)
      throw InvalidConfig("distractor counts must be non-negative");
  }

  /// Largest possible main tree: a complete binary tree over two goal arguments.
  std::size_t max_tree_rules() const noexcept { return (std::size_t{2} << chain_depth) - 2; }

  /// Padded widths used when storing rulesets of this config.
  std::size_t max_rules() const noexcept {
    return std::max(kDefaultMaxRules, max_tree_rules() + static_cast<std::size_t>(num_distractor_rules));
  }
  std::size_t max_objects() const noexcept {
    return (std::size_t{2} << chain_depth) + static_cast<std::size_t>(num_distractor_objects);
  }
};

/// Goal kinds the generator draws from; position goals are excluded.
inline constexpr std::array<GoalKind, 11> kGeneratorGoals = {
    GoalKind::AgentHold,      GoalKind::AgentNear,     GoalKind::TileNear,      GoalKind::TileNearUp,
    GoalKind::TileNearRight,  GoalKind::TileNearDown,  GoalKind::TileNearLeft,  GoalKind::AgentNearUp,
    GoalKind::AgentNearRight, GoalKind::AgentNearDown, GoalKind::AgentNearLeft,
};

/// The 70 generator objects, ordered color-major.
inline const std::array<EntityCode, 70>& object_pool() {
  static const auto pool = [] {
    std::array<EntityCode, 70> p{};
    std::size_t i = 0;
    for (Color c : kObjectColors)
      for (Tile t : kObjectTiles) p[i++] = pack_entity({t, c});
    return p;
  }();
  return pool;
}

inline const EntityCode kDisappear = pack_entity(kFloor);

namespace detail {

// Draws pool objects without replacement.
class ObjectSampler {
 public:
  explicit ObjectSampler(RandomStream& s) : stream_(s) {
    const auto& pool = object_pool();
    free_.assign(pool.begin(), pool.end());
  }

  EntityCode draw() {
    if (free_.empty()) throw ObjectPoolExhausted("all 70 objects are already used in this task");
    const std::size_t i = static_cast<std::size_t>(stream_.uniform(free_.size()));
    const EntityCode c = free_[i];
    free_[i] = free_.back();
    free_.pop_back();
    return c;
  }

  std::size_t remaining() const noexcept { return free_.size(); }

 private:
  RandomStream& stream_;
  std::vector<EntityCode> free_;
};

}  // namespace detail

/// Main task tree. `levels[0]` holds the rules producing the goal's
/// arguments; `levels[l + 1]` the rules producing inputs of `levels[l]`.
struct TaskTree {
  GoalEncoding goal = kEmptyGoalEncoding;
  std::vector<std::vector<RuleEncoding>> levels;
  std::vector<EntityCode> init_objects;  // inputs of leaf rules, or goal arguments when there are none
  std::vector<EntityCode> objects;       // every object mentioned by the goal or a tree rule

  std::vector<RuleEncoding> rules() const {
    std::vector<RuleEncoding> out;
    for (const auto& l : levels) out.insert(out.end(), l.begin(), l.end());
    return out;
  }
  std::size_t num_rules() const noexcept {
    std::size_t n = 0;
    for (const auto& l : levels) n += l.size();
    return n;
  }
};

struct Distractors {
  std::vector<RuleEncoding> rules;
  std::vector<EntityCode> objects;
};

/// A generated task with its structure kept for inspection.
struct GeneratedTask {
  TaskTree tree;
  Distractors distractors;
  Ruleset ruleset;  // padded to the config widths, rules shuffled
};

namespace detail {

inline std::vector<EntityCode> goal_arguments(const GoalEncoding& g) {
  const int n = goal_entity_arity(static_cast<GoalKind>(g[0]));
  std::vector<EntityCode> out;
  for (int i = 0; i < n; ++i) out.push_back(g[1 + i]);
  return out;
}

inline GoalEncoding sample_goal_with(RandomStream& s, ObjectSampler& objects) {
  const GoalKind kind = kGeneratorGoals[s.uniform(kGeneratorGoals.size())];
  GoalEncoding g{static_cast<std::uint8_t>(kind), 0, 0, 0};
  g[1] = objects.draw();
  if (goal_entity_arity(kind) == 2) g[2] = objects.draw();
  return g;
}

inline RuleKind sample_rule_kind(RandomStream& s) {
  return static_cast<RuleKind>(1 + s.uniform(kNumRuleKinds - 1));
}

}  // namespace detail

/// Uniform over the generator goals with fresh, distinct object arguments.
inline GoalEncoding sample_goal(Rng key) {
  auto s = key.stream();
  detail::ObjectSampler objects(s);
  return detail::sample_goal_with(s, objects);
}

namespace detail {

inline TaskTree sample_tree_with(RandomStream& s, ObjectSampler& objects, const BenchmarkConfig& cfg) {
  TaskTree tree;
  tree.goal = sample_goal_with(s, objects);
  std::vector<EntityCode> frontier = goal_arguments(tree.goal);
  tree.objects = frontier;
  const int depth = cfg.sample_depth ? static_cast<int>(s.uniform_int(0, cfg.chain_depth)) : cfg.chain_depth;

  for (int level = 0; level < depth && !frontier.empty(); ++level) {
    std::vector<RuleEncoding> rules;
    std::vector<EntityCode> next;
    for (EntityCode out : frontier) {
      const RuleKind kind = sample_rule_kind(s);
      RuleEncoding r{static_cast<std::uint8_t>(kind), objects.draw(), 0, out};
      if (rule_arity(kind) == 2) r[2] = objects.draw();
      std::vector<EntityCode> inputs{r[1]};
      if (r[2] != 0) inputs.push_back(r[2]);
      tree.objects.insert(tree.objects.end(), inputs.begin(), inputs.end());
      // A pruned node stops the recursion: its inputs are placed directly.
      const bool leaf = level + 1 == depth || (cfg.prune_chain && s.bernoulli(cfg.prune_prob));
      auto& dest = leaf ? tree.init_objects : next;
      dest.insert(dest.end(), inputs.begin(), inputs.end());
      rules.push_back(r);
    }
    tree.levels.push_back(std::move(rules));
    frontier = std::move(next);
  }
  // Without any rules (depth 0) the goal arguments are placed as they are.
  tree.init_objects.insert(tree.init_objects.end(), frontier.begin(), frontier.end());
  return tree;
}

inline Distractors sample_distractors_with(RandomStream& s, ObjectSampler& objects, const BenchmarkConfig& cfg,
                                           const TaskTree& tree) {
  Distractors d;
  const int n_rules = cfg.sample_distractor_rules ? static_cast<int>(s.uniform_int(0, cfg.num_distractor_rules))
                                                  : cfg.num_distractor_rules;
  for (int i = 0; i < n_rules; ++i) {
    const RuleKind kind = sample_rule_kind(s);
    RuleEncoding r{static_cast<std::uint8_t>(kind), 0, 0, 0};
    const std::size_t n = tree.objects.size();
    const std::size_t ia = static_cast<std::size_t>(s.uniform(n));
    r[1] = tree.objects[ia];
    if (rule_arity(kind) == 2) {
      if (n < 2) {
        // A single-object tree cannot feed a two-input rule; fall back to a hold rule.
        r[0] = static_cast<std::uint8_t>(RuleKind::AgentHold);
      } else {
        const std::size_t ib = (ia + 1 + static_cast<std::size_t>(s.uniform(n - 1))) % n;
        r[2] = tree.objects[ib];
      }
    }
    r[3] = s.bernoulli(0.5) ? kDisappear : objects.draw();
    d.rules.push_back(r);
  }
  for (int i = 0; i < cfg.num_distractor_objects; ++i) d.objects.push_back(objects.draw());
  return d;
}

}  // namespace detail

inline TaskTree sample_task_tree(Rng key, const BenchmarkConfig& cfg) {
  cfg.validate();
  auto s = key.stream();
  detail::ObjectSampler objects(s);
  return detail::sample_tree_with(s, objects, cfg);
}

/// Full generation for one task. All draws for a task come from one stream
/// so objects stay unique across tree and distractors.
inline GeneratedTask generate_task(Rng key, const BenchmarkConfig& cfg) {
  cfg.validate();
  const auto [tree_key, shuffle_key] = key.split<2>();
  auto s = tree_key.stream();
  detail::ObjectSampler objects(s);
  GeneratedTask task;
  task.tree = detail::sample_tree_with(s, objects, cfg);
  task.distractors = detail::sample_distractors_with(s, objects, cfg, task.tree);

  Ruleset& rs = task.ruleset;
  rs.goal = task.tree.goal;
  rs.rules = task.tree.rules();
  rs.rules.insert(rs.rules.end(), task.distractors.rules.begin(), task.distractors.rules.end());
  auto shuffler = shuffle_key.stream();
  shuffler.shuffle(rs.rules);
  rs.init_objects = task.tree.init_objects;
  rs.init_objects.insert(rs.init_objects.end(), task.distractors.objects.begin(), task.distractors.objects.end());
  shuffler.shuffle(rs.init_objects);
  rs.pad_to(cfg.max_rules(), cfg.max_objects());
  return task;
}

inline Ruleset generate_ruleset(Rng key, const BenchmarkConfig& cfg) { return generate_task(key, cfg).ruleset; }

/// Canonical bytes for dedup: goal, sorted non-empty rules, sorted objects.
inline std::string canonical_encoding(const Ruleset& rs) {
  std::vector<RuleEncoding> rules;
  for (const auto& r : rs.rules)
    if (r != kEmptyRuleEncoding) rules.push_back(r);
  std::sort(rules.begin(), rules.end());
  std::vector<EntityCode> objs;
  for (auto c : rs.init_objects)
    if (c != 0) objs.push_back(c);
  std::sort(objs.begin(), objs.end());
  std::string out(rs.goal.begin(), rs.goal.end());
  out.push_back(static_cast<char>(rules.size()));
  for (const auto& r : rules) out.append(r.begin(), r.end());
  out.append(objs.begin(), objs.end());
  return out;
}

struct GenerateOptions {
  unsigned workers = 1;
  std::size_t chunk = 4096;
  /// Called with (unique so far, target) after each chunk.
  std::function<void(std::size_t, std::size_t)> progress;
};

/// `n` unique rulesets. Candidate i is generated from child i of the seed
/// key and candidates are deduplicated in index order, so the result does
/// not depend on the worker count.
inline std::vector<Ruleset> generate_benchmark(const BenchmarkConfig& cfg, std::size_t n,
                                               const GenerateOptions& opts = {}) {
  cfg.validate();
  if (n == 0) throw InvalidConfig("benchmark size must be at least 1");
  const Rng root = Rng::from_seed(cfg.random_seed);
  std::vector<Ruleset> out;
  out.reserve(n);
  std::unordered_set<std::string> seen;
  std::uint64_t next = 0;
  std::size_t stale_chunks = 0;
  const unsigned workers = std::max(1u, opts.workers);
  std::vector<Ruleset> chunk(opts.chunk);
  while (out.size() < n) {
    const std::size_t before = out.size();
    auto work = [&](unsigned w) {
      for (std::size_t i = w; i < chunk.size(); i += workers) chunk[i] = generate_ruleset(root.child(next + i), cfg);
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    next += chunk.size();
    for (auto& rs : chunk) {
      if (out.size() == n) break;
      if (seen.insert(canonical_encoding(rs)).second) out.push_back(std::move(rs));
    }
    if (opts.progress) opts.progress(out.size(), n);
    stale_chunks = out.size() == before ? stale_chunks + 1 : 0;
    if (stale_chunks >= 64) {
      throw InvalidConfig("config '" + cfg.name + "' yields only " + std::to_string(out.size()) + " unique tasks");
    }
  }
  return out;
}

/// Histogram of non-empty rule counts.
inline std::map<std::size_t, std::size_t> ruleset_stats(const std::vector<Ruleset>& rulesets) {
  std::map<std::size_t, std::size_t> hist;
  for (const auto& rs : rulesets) hist[rs.num_rules()]++;
  return hist;
}

inline void write_stats_csv(std::ostream& os, const std::map<std::size_t, std::size_t>& hist) {
  os << "num_rules,count\n";
  for (const auto& [k, v] : hist) os << k << ',' << v << '\n';
}

}  // namespace xmg
