// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "xminigrid/env.hpp"

namespace xmg {

namespace detail {

struct RegistryEntry {
  Environment env;
  EnvParams params;
};

inline EnvParams sized_params(Layout layout, int h, int w, int max_steps) {
  EnvParams p;
  p.layout = layout;
  p.height = h;
  p.width = w;
  p.max_steps = max_steps;
  return p;
}

inline std::map<std::string, RegistryEntry> builtin_environments() {
  std::map<std::string, RegistryEntry> reg;
  const std::pair<Layout, int> xland[] = {
      {Layout::R1, 9},  {Layout::R1, 13}, {Layout::R1, 17}, {Layout::R2, 9},  {Layout::R2, 13},
      {Layout::R2, 17}, {Layout::R4, 9},  {Layout::R4, 13}, {Layout::R4, 17}, {Layout::R6, 13},
      {Layout::R6, 17}, {Layout::R6, 19}, {Layout::R9, 16}, {Layout::R9, 19}, {Layout::R9, 25},
  };
  for (auto [layout, n] : xland) {
    const std::string name = "XLand-MiniGrid-R" + std::to_string(static_cast<int>(layout)) + "-" +
                             std::to_string(n) + "x" + std::to_string(n);
    reg[name] = {Environment(EnvKind::XLand), sized_params(layout, n, n, EnvParams::default_max_steps(n, n))};
  }
  for (int n : {5, 6, 8, 16}) {
    const std::string size = std::to_string(n) + "x" + std::to_string(n);
    reg["MiniGrid-Empty-" + size] = {Environment(EnvKind::Empty), sized_params(Layout::R1, n, n, 4 * n * n)};
    reg["MiniGrid-EmptyRandom-" + size] = {Environment(EnvKind::EmptyRandom),
                                           sized_params(Layout::R1, n, n, 4 * n * n)};
    reg["MiniGrid-DoorKey-" + size] = {Environment(EnvKind::DoorKey), sized_params(Layout::R1, n, n, 10 * n * n)};
  }
  reg["MiniGrid-FourRooms"] = {Environment(EnvKind::FourRooms), sized_params(Layout::R4, 19, 19, 100)};
  reg["MiniGrid-Unlock"] = {Environment(EnvKind::Unlock), sized_params(Layout::R2, 6, 11, 8 * 6 * 6)};
  reg["MiniGrid-UnlockPickUp"] = {Environment(EnvKind::UnlockPickUp), sized_params(Layout::R2, 6, 11, 8 * 6 * 6)};
  return reg;
}

struct Registry {
  std::mutex mu;
  std::map<std::string, RegistryEntry> entries = builtin_environments();
};

inline Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace detail

inline std::vector<std::string> registered_environments() {
  auto& reg = detail::registry();
  std::lock_guard lock(reg.mu);
  std::vector<std::string> out;
  for (const auto& [name, _] : reg.entries) out.push_back(name);
  return out;
}

/// Registers (or replaces) a named variant for later `make`.
inline void register_environment(const std::string& name, Environment env, EnvParams params) {
  auto& reg = detail::registry();
  std::lock_guard lock(reg.mu);
  reg.entries[name] = {env, std::move(params)};
}

inline std::pair<Environment, EnvParams> make(const std::string& name) {
  auto& reg = detail::registry();
  std::lock_guard lock(reg.mu);
  const auto it = reg.entries.find(name);
  if (it == reg.entries.end()) throw UnknownEnvironment("'" + name + "' is not registered");
  return {it->second.env, it->second.params};
}

}  // namespace xmg
