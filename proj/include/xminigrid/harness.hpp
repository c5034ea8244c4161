// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "xminigrid/benchio.hpp"
#include "xminigrid/env.hpp"
#include "xminigrid/parallel.hpp"
#include "xminigrid/registry.hpp"

namespace xmg {

/// A policy maps the current timestep to an action; it may keep state.
template <class P>
concept Policy = requires(P p, const TimeStep& t) {
  { p(t) } -> std::convertible_to<Action>;
};

/// Uniform random actions from its own stream. Draws one 64-bit word per
/// 24 actions (6^24 < 2^64).
class RandomPolicy {
 public:
  explicit RandomPolicy(Rng key) : stream_(key.stream()) {}

  Action operator()(const TimeStep&) noexcept { return next(); }

  Action next() noexcept {
    if (left_ == 0) {
      digits_ = stream_.uniform(kPow6_24);
      left_ = 24;
    }
    --left_;
    const auto a = static_cast<Action>(digits_ % 6);
    digits_ /= 6;
    return a;
  }

 private:
  static constexpr std::uint64_t kPow6_24 = 4738381338321616896ull;
  RandomStream stream_;
  std::uint64_t digits_ = 0;
  int left_ = 0;
};

/// Never changes anything an event could observe.
struct NoopPolicy {
  Action operator()(const TimeStep&) const noexcept { return Action::TurnLeft; }
};

/// Replays a fixed plan, then turns in place.
class PlanPolicy {
 public:
  explicit PlanPolicy(std::vector<Action> plan) : plan_(std::move(plan)) {}
  Action operator()(const TimeStep& t) noexcept {
    if (t.first()) pos_ = 0;
    return pos_ < plan_.size() ? plan_[pos_++] : Action::TurnLeft;
  }

 private:
  std::vector<Action> plan_;
  std::size_t pos_ = 0;
};

struct RolloutStats {
  std::vector<float> trial_returns;   // one entry per completed trial
  std::vector<int> trial_lengths;
  std::vector<bool> trial_success;
  std::int64_t steps = 0;
  std::int64_t residual_steps = 0;  // steps of the unfinished final trial
  float total_return = 0.0f;

  std::size_t completed_trials() const noexcept { return trial_returns.size(); }
  std::size_t successful_trials() const noexcept {
    return static_cast<std::size_t>(std::count(trial_success.begin(), trial_success.end(), true));
  }
};

/// Runs one environment for `num_steps` steps with auto-reset.
template <Policy P>
RolloutStats rollout(const Environment& env, const EnvParams& params, P& policy, std::int64_t num_steps, Rng key) {
  RolloutStats st;
  TimeStep t = env.reset(params, key);
  float trial_return = 0.0f;
  int trial_len = 0;
  for (std::int64_t i = 0; i < num_steps; ++i) {
    env.advance(params, t, static_cast<Action>(policy(t)));
    ++st.steps;
    ++trial_len;
    trial_return += t.reward;
    st.total_return += t.reward;
    if (t.last()) {
      st.trial_returns.push_back(trial_return);
      st.trial_lengths.push_back(trial_len);
      st.trial_success.push_back(t.state.goal_reached);
      trial_return = 0.0f;
      trial_len = 0;
      t = env.auto_reset(params, t);
    }
  }
  st.residual_steps = trial_len;
  return st;
}

/// N environments stepped together. Environment i is reset from child i of
/// the key, so its trajectory does not depend on N.
class BatchEnv {
 public:
  BatchEnv(Environment env, EnvParams params) : env_(env), params_(std::move(params)) {}

  const Environment& env() const noexcept { return env_; }
  const EnvParams& params() const noexcept { return params_; }
  std::span<const TimeStep> timesteps() const noexcept { return steps_; }
  std::size_t size() const noexcept { return steps_.size(); }

  void reset(Rng key, std::size_t n) {
    steps_.resize(n);
    for (std::size_t i = 0; i < n; ++i) steps_[i] = env_.reset(params_, key.child(i));
  }

  /// Steps each environment with its action, auto-resetting finished ones.
  /// Work is split into contiguous slices across `workers` threads.
  void step(std::span<const Action> actions, unsigned workers = 1) {
    if (actions.size() != steps_.size())
      throw InvalidAction("batch_step needs one action per environment (" + std::to_string(steps_.size()) + ")");
    parallel_for(steps_.size(), workers, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) step_one(steps_[i], actions[i]);
    });
  }

  void step_one(TimeStep& t, Action a) const {
    if (t.last()) t = env_.auto_reset(params_, t);
    env_.advance(params_, t, a);
  }

 private:
  Environment env_;
  EnvParams params_;
  std::vector<TimeStep> steps_;
};

/// Pure batched step: returns N new timesteps in input order.
inline std::vector<TimeStep> batch_step(const Environment& env, const EnvParams& params,
                                        std::span<const TimeStep> states, std::span<const Action> actions,
                                        unsigned workers = 1) {
  if (states.size() != actions.size()) throw InvalidAction("batch_step needs one action per state");
  std::vector<TimeStep> out(states.begin(), states.end());
  parallel_for(out.size(), workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      if (out[i].last()) out[i] = env.auto_reset(params, out[i]);
      env.advance(params, out[i], actions[i]);
    }
  });
  return out;
}

struct ThroughputRow {
  std::string axis;
  long long value = 0;
  std::size_t num_envs = 0;
  std::int64_t total_steps = 0;
  double best_seconds = 0.0;  // fastest of the repeats
  double steps_per_second = 0.0;
  std::vector<double> repeat_sps;
};

struct ThroughputOptions {
  std::int64_t num_steps = 1000;  // per environment
  /// When positive, each job runs max(1, target_total_steps / num_envs)
  /// steps per environment instead, so small batches are timed as long as
  /// large ones.
  std::int64_t target_total_steps = 0;
  int repeats = 3;
  unsigned workers = 1;
  std::uint64_t seed = 0;
};

namespace detail {

// Random-policy rollout over a batch; returns wall seconds.
inline double timed_random_rollout(const Environment& env, const EnvParams& params, std::size_t num_envs,
                                   std::int64_t num_steps, unsigned workers, Rng key) {
  std::vector<TimeStep> steps(num_envs);
  std::vector<RandomPolicy> policies;
  policies.reserve(num_envs);
  for (std::size_t i = 0; i < num_envs; ++i) {
    steps[i] = env.reset(params, key.child(i));
    policies.emplace_back(key.child(i).fold_in(1));
  }
  const auto start = std::chrono::steady_clock::now();
  parallel_for(num_envs, workers, [&](std::size_t lo, std::size_t hi) {
    for (std::int64_t s = 0; s < num_steps; ++s) {
      for (std::size_t i = lo; i < hi; ++i) {
        TimeStep& t = steps[i];
        if (t.last()) t = env.auto_reset(params, t);
        env.advance(params, t, policies[i].next());
      }
    }
  });
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

struct ThroughputJob {
  std::string axis;
  long long value = 0;
  Environment env;
  EnvParams params;
  std::size_t num_envs = 0;
};

inline std::int64_t steps_per_env(const ThroughputOptions& o, std::size_t num_envs) {
  if (o.target_total_steps <= 0) return o.num_steps;
  return std::max<std::int64_t>(1, o.target_total_steps / static_cast<std::int64_t>(std::max<std::size_t>(num_envs, 1)));
}

// Repeats run round-robin over the jobs so slow drift of the host affects
// every job alike; each row keeps its fastest repeat.
inline std::vector<ThroughputRow> measure(const std::vector<ThroughputJob>& jobs, const ThroughputOptions& o) {
  std::vector<ThroughputRow> rows(jobs.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    rows[j].axis = jobs[j].axis;
    rows[j].value = jobs[j].value;
    rows[j].num_envs = jobs[j].num_envs;
    rows[j].total_steps = static_cast<std::int64_t>(jobs[j].num_envs) * steps_per_env(o, jobs[j].num_envs);
    rows[j].best_seconds = std::numeric_limits<double>::infinity();
  }
  for (int r = 0; r < std::max(1, o.repeats); ++r) {
    const Rng key = Rng::from_seed(o.seed).child(static_cast<std::uint64_t>(r));
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      const double secs = timed_random_rollout(jobs[j].env, jobs[j].params, jobs[j].num_envs,
                                               steps_per_env(o, jobs[j].num_envs), o.workers, key);
      rows[j].repeat_sps.push_back(static_cast<double>(rows[j].total_steps) / secs);
      rows[j].best_seconds = std::min(rows[j].best_seconds, secs);
    }
  }
  for (auto& row : rows) row.steps_per_second = static_cast<double>(row.total_steps) / row.best_seconds;
  return rows;
}

// Trivial-style task so XLand rollouts exercise goal checks.
inline Ruleset bench_ruleset() {
  Ruleset rs;
  rs.goal = encode_goal(Goal::tile_near({Tile::BALL, Color::RED}, {Tile::SQUARE, Color::BLUE}));
  rs.init_objects = {pack_entity({Tile::BALL, Color::RED}), pack_entity({Tile::SQUARE, Color::BLUE}),
                     pack_entity({Tile::KEY, Color::GREEN})};
  rs.pad_to(kDefaultMaxRules, 5);
  return rs;
}

}  // namespace detail

/// SPS of a random policy for each batch size.
inline std::vector<ThroughputRow> bench_throughput(const std::string& env_name,
                                                   const std::vector<std::size_t>& num_envs,
                                                   const ThroughputOptions& o = {}) {
  auto [env, params] = make(env_name);
  if (env.kind() == EnvKind::XLand && params.ruleset == Ruleset{}) params.ruleset = detail::bench_ruleset();
  std::vector<detail::ThroughputJob> jobs;
  for (auto n : num_envs) jobs.push_back({"num_envs", static_cast<long long>(n), env, params, n});
  return detail::measure(jobs, o);
}

enum class ScalingAxis { GridSize, NumRules };

/// Grid-size axis: XLand R1 grids of the given sizes. Rule-count axis: the
/// same TileNear rule replicated on a 16x16 grid.
inline std::vector<ThroughputRow> bench_scaling(ScalingAxis axis, const std::vector<int>& values,
                                                std::size_t num_envs, const ThroughputOptions& o = {}) {
  const Environment env(EnvKind::XLand);
  std::vector<detail::ThroughputJob> jobs;
  for (int v : values) {
    EnvParams p;
    p.layout = Layout::R1;
    if (axis == ScalingAxis::GridSize) {
      p.height = p.width = v;
      p.ruleset = detail::bench_ruleset();
    } else {
      p.height = p.width = 16;
      p.ruleset = detail::bench_ruleset();
      const auto near = encode_rule(Rule::tile_near({Tile::BALL, Color::RED}, {Tile::KEY, Color::GREEN},
                                                    {Tile::STAR, Color::PINK}));
      p.ruleset.rules.assign(static_cast<std::size_t>(v), near);
    }
    p.max_steps = EnvParams::default_max_steps(p.height, p.width);
    jobs.push_back({axis == ScalingAxis::GridSize ? "grid_size" : "num_rules", v, env, p, num_envs});
  }
  return detail::measure(jobs, o);
}

inline void write_throughput_csv(std::ostream& os, const std::vector<ThroughputRow>& rows) {
  os << "axis,value,num_envs,total_steps,best_seconds,steps_per_second\n";
  for (const auto& r : rows)
    os << r.axis << ',' << r.value << ',' << r.num_envs << ',' << r.total_steps << ',' << r.best_seconds << ','
       << static_cast<long long>(r.steps_per_second) << '\n';
}

/// Linear-interpolation percentile, q in [0, 100].
inline double percentile(std::vector<double> xs, double q) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const double pos = q / 100.0 * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (xs[hi] - xs[lo]) * (pos - static_cast<double>(lo));
}

struct EvalResult {
  std::vector<double> task_returns;  // summed over the trials of each task
  double mean = 0.0;
  double p20 = 0.0;
};

/// Each task gets `num_trials` trials of at most max_steps each, on fresh
/// resets with the ruleset kept. `make_policy(task_index)` builds the policy.
template <class MakePolicy>
EvalResult evaluate(const Environment& env, const EnvParams& params, const Benchmark& tasks, MakePolicy&& make_policy,
                    Rng key, int num_trials = 25) {
  EvalResult res;
  for (std::size_t i = 0; i < tasks.num_rulesets(); ++i) {
    EnvParams p = params;
    p.ruleset = tasks.get_ruleset(i);
    auto policy = make_policy(i);
    double total = 0.0;
    const Rng task_key = key.child(i);
    for (int trial = 0; trial < num_trials; ++trial) {
      TimeStep t = env.reset(p, task_key.child(static_cast<std::uint64_t>(trial)));
      while (!t.last()) {
        env.advance(p, t, static_cast<Action>(policy(t)));
        total += t.reward;
      }
    }
    res.task_returns.push_back(total);
  }
  if (!res.task_returns.empty()) {
    double s = 0.0;
    for (double r : res.task_returns) s += r;
    res.mean = s / static_cast<double>(res.task_returns.size());
    res.p20 = percentile(res.task_returns, 20.0);
  }
  return res;
}

}  // namespace xmg
