// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "xminigrid/benchio.hpp"
#include "xminigrid/env.hpp"
#include "xminigrid/parallel.hpp"

namespace xmg {

enum class SolveStatus { Solved, Unsolvable, BudgetExceeded };

inline const char* status_name(SolveStatus s) noexcept {
  switch (s) {
    case SolveStatus::Solved: return "Solved";
    case SolveStatus::Unsolvable: return "Unsolvable";
    case SolveStatus::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

struct SolveResult {
  SolveStatus status = SolveStatus::Unsolvable;
  std::vector<Action> plan;
  std::size_t nodes = 0;  // distinct states stored

  bool solved() const noexcept { return status == SolveStatus::Solved; }
};

inline constexpr std::size_t kDefaultNodeBudget = 5'000'000;

namespace detail {

// Arena of fixed-width packed states with an open-addressing index.
class StateSet {
 public:
  explicit StateSet(std::size_t width) : width_(width), slots_(1024, kNone) {}

  std::size_t size() const noexcept { return count_; }
  const std::uint8_t* at(std::uint32_t id) const noexcept { return arena_.data() + std::size_t{id} * width_; }

  /// Inserts unless present; returns the id and whether it was new.
  std::pair<std::uint32_t, bool> insert(const std::uint8_t* key) {
    if ((count_ + 1) * 2 > slots_.size()) grow();
    const std::uint64_t h = hash(key);
    std::size_t mask = slots_.size() - 1, i = h & mask;
    while (slots_[i] != kNone) {
      if (std::memcmp(at(slots_[i]), key, width_) == 0) return {slots_[i], false};
      i = (i + 1) & mask;
    }
    const auto id = static_cast<std::uint32_t>(count_++);
    arena_.insert(arena_.end(), key, key + width_);
    slots_[i] = id;
    return {id, true};
  }

 private:
  static constexpr std::uint32_t kNone = 0xFFFFFFFFu;

  std::uint64_t hash(const std::uint8_t* p) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < width_; ++i) h = (h ^ p[i]) * 0x100000001b3ull;
    return h ^ (h >> 29);
  }

  void grow() {
    std::vector<std::uint32_t> bigger(slots_.size() * 2, kNone);
    const std::size_t mask = bigger.size() - 1;
    for (std::uint32_t id = 0; id < count_; ++id) {
      std::size_t i = hash(at(id)) & mask;
      while (bigger[i] != kNone) i = (i + 1) & mask;
      bigger[i] = id;
    }
    slots_.swap(bigger);
  }

  std::size_t width_;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> arena_;
  std::vector<std::uint32_t> slots_;
};

// Grid bytes followed by (row, col, direction, pocket).
inline void pack_state(const EnvState& s, std::vector<std::uint8_t>& out) {
  const auto cells = s.grid.cells();
  out.assign(cells.begin(), cells.end());
  out.push_back(static_cast<std::uint8_t>(s.agent.position.row));
  out.push_back(static_cast<std::uint8_t>(s.agent.position.col));
  out.push_back(static_cast<std::uint8_t>(s.agent.direction));
  out.push_back(pack_entity(s.agent.pocket));
}

inline void unpack_state(const std::uint8_t* p, EnvState& s) {
  auto cells = s.grid.cells();
  std::memcpy(cells.data(), p, cells.size());
  p += cells.size();
  s.agent.position = {p[0], p[1]};
  s.agent.direction = static_cast<Direction>(p[2]);
  s.agent.pocket = unpack_entity(p[3]);
}

}  // namespace detail

/// Breadth-first search from `start`. Children are produced by
/// Environment::advance in action-ID order, so the returned plan is the
/// shortest one and, among those, the first in that order. Plans never
/// exceed the steps left in the trial.
inline SolveResult solve(const Environment& env, const EnvParams& params, const TimeStep& start,
                         std::size_t node_budget = kDefaultNodeBudget) {
  SolveResult res;
  if (start.last()) return res;
  const std::size_t width = start.state.grid.cells().size() + 4;
  detail::StateSet seen(width);
  std::vector<std::uint32_t> parent;
  std::vector<Action> via;
  std::vector<std::uint8_t> key;

  detail::pack_state(start.state, key);
  seen.insert(key.data());
  parent.push_back(0);
  via.push_back(Action::MoveForward);

  auto plan_to = [&](std::uint32_t id, Action last) {
    std::vector<Action> plan{last};
    while (id != 0) {
      plan.push_back(via[id]);
      id = parent[id];
    }
    return std::vector<Action>(plan.rbegin(), plan.rend());
  };

  const int depth_limit = params.max_steps - start.state.step_count;
  TimeStep node = start;
  TimeStep child = start;
  std::size_t level_begin = 0, level_end = 1;
  for (int depth = 0; depth < depth_limit && level_begin < level_end; ++depth) {
    for (std::size_t id = level_begin; id < level_end; ++id) {
      detail::unpack_state(seen.at(static_cast<std::uint32_t>(id)), node.state);
      node.state.step_count = start.state.step_count + depth;
      for (int a = 0; a < kNumActions; ++a) {
        child.state.grid = node.state.grid;
        child.state.agent = node.state.agent;
        child.state.step_count = node.state.step_count;
        env.advance(params, child, static_cast<Action>(a));
        if (child.state.goal_reached) {
          res.status = SolveStatus::Solved;
          res.plan = plan_to(static_cast<std::uint32_t>(id), static_cast<Action>(a));
          res.nodes = seen.size();
          return res;
        }
        detail::pack_state(child.state, key);
        if (seen.insert(key.data()).second) {
          parent.push_back(static_cast<std::uint32_t>(id));
          via.push_back(static_cast<Action>(a));
          if (seen.size() > node_budget) {
            res.status = SolveStatus::BudgetExceeded;
            res.nodes = seen.size();
            return res;
          }
        }
      }
    }
    level_begin = level_end;
    level_end = seen.size();
  }
  // Either the reachable set is exhausted or no plan fits in the remaining steps.
  res.status = SolveStatus::Unsolvable;
  res.nodes = seen.size();
  return res;
}

/// Solves the initial state produced by reset(params with ruleset, key).
inline SolveResult solve(const Environment& env, EnvParams params, const Ruleset& ruleset, Rng key,
                         std::size_t node_budget = kDefaultNodeBudget) {
  params.ruleset = ruleset;
  return solve(env, params, env.reset(params, key), node_budget);
}

/// Replays a plan from `start`; true when the last action ends the trial
/// with a positive reward and no earlier action ends it.
inline bool replay_succeeds(const Environment& env, const EnvParams& params, TimeStep t,
                            const std::vector<Action>& plan) {
  for (std::size_t i = 0; i < plan.size(); ++i) {
    t = env.step(params, t, plan[i]);
    if (t.last()) return i + 1 == plan.size() && t.reward > 0.0f && t.discount == 0.0f;
  }
  return false;
}

/// Plans with solve() at the start of every trial, then follows the plan.
/// Turns in place when the trial has no plan within the budget.
class OraclePolicy {
 public:
  OraclePolicy(Environment env, EnvParams params, std::size_t node_budget = kDefaultNodeBudget)
      : env_(env), params_(std::move(params)), budget_(node_budget) {}

  Action operator()(const TimeStep& t) {
    if (t.first()) {
      const SolveResult r = solve(env_, params_, t, budget_);
      plan_ = r.plan;
      pos_ = 0;
    }
    return pos_ < plan_.size() ? plan_[pos_++] : Action::TurnLeft;
  }

 private:
  Environment env_;
  EnvParams params_;
  std::size_t budget_;
  std::vector<Action> plan_;
  std::size_t pos_ = 0;
};

struct ValidationReport {
  std::size_t tasks = 0;
  std::size_t solved = 0;
  std::size_t unsolvable = 0;
  std::size_t budget_exceeded = 0;
  std::size_t replay_failures = 0;
  std::vector<std::size_t> plan_lengths;
  std::string warning;

  double fraction() const noexcept {
    return tasks == 0 ? 1.0 : static_cast<double>(solved) / static_cast<double>(tasks);
  }
};

/// Draws `n` tasks with `key` (without replacement while n <= size), solves each task's first reset and replays
/// every plan through Environment::step. Tasks run across `workers` threads
/// with per-task keys, so the report does not depend on the worker count.
inline ValidationReport validate_solvability(const Environment& env, const EnvParams& params, const Benchmark& tasks,
                                             std::size_t n, Rng key,
                                             std::size_t node_budget = kDefaultNodeBudget, unsigned workers = 1) {
  ValidationReport rep;
  rep.tasks = n;
  if (n == 0) {
    rep.warning = "no tasks requested; fraction is vacuously 1.0";
    return rep;
  }
  if (tasks.num_rulesets() == 0) throw IndexOutOfRange("cannot validate an empty benchmark");
  const Benchmark order = tasks.shuffle(key.fold_in(0));
  std::vector<SolveResult> results(n);
  std::vector<char> replay_ok(n, 0);
  parallel_for(n, workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const Rng k = key.child(i);
      EnvParams p = params;
      p.ruleset = order.get_ruleset(i % order.num_rulesets());
      const TimeStep start = env.reset(p, k.fold_in(1));
      results[i] = solve(env, p, start, node_budget);
      if (results[i].solved()) replay_ok[i] = replay_succeeds(env, p, start, results[i].plan);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    switch (results[i].status) {
      case SolveStatus::Solved:
        ++rep.solved;
        rep.plan_lengths.push_back(results[i].plan.size());
        if (!replay_ok[i]) ++rep.replay_failures;
        break;
      case SolveStatus::Unsolvable: ++rep.unsolvable; break;
      case SolveStatus::BudgetExceeded: ++rep.budget_exceeded; break;
    }
  }
  return rep;
}

}  // namespace xmg
