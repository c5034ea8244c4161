// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "xminigrid/registry.hpp"

using namespace xmg;

TEST(Registry, XLandMaxSteps) {
  auto [env, p] = make("XLand-MiniGrid-R9-25x25");
  EXPECT_EQ(env.kind(), EnvKind::XLand);
  EXPECT_EQ(p.layout, Layout::R9);
  EXPECT_EQ(p.height, 25);
  EXPECT_EQ(p.width, 25);
  EXPECT_EQ(p.max_steps, 1875);
  EXPECT_EQ(make("XLand-MiniGrid-R4-13x13").second.max_steps, 507);
  EXPECT_EQ(make("XLand-MiniGrid-R1-9x9").second.max_steps, 243);
}

TEST(Registry, Unknown) {
  EXPECT_THROW(make("MiniGrid-Foo"), UnknownEnvironment);
  try {
    make("MiniGrid-Foo");
  } catch (const Error& e) {
    EXPECT_STREQ(e.name(), "UnknownEnvironment");
  }
}

TEST(Registry, ContainsAllVariants) {
  const auto names = registered_environments();
  int xland = 0;
  for (const auto& n : names) {
    if (n.rfind("XLand-MiniGrid-", 0) == 0) {
      ++xland;
      const auto p = make(n).second;
      EXPECT_EQ(p.max_steps, 3 * p.height * p.width) << n;
    }
  }
  EXPECT_EQ(xland, 15);
  for (const char* n : {"MiniGrid-Empty-5x5", "MiniGrid-EmptyRandom-16x16", "MiniGrid-DoorKey-6x6",
                        "MiniGrid-FourRooms", "MiniGrid-Unlock", "MiniGrid-UnlockPickUp"}) {
    EXPECT_NO_THROW(make(n)) << n;
  }
  EXPECT_GE(names.size(), 15u + 12u + 3u);
}

TEST(Registry, EveryVariantResets) {
  for (const auto& name : registered_environments()) {
    auto [env, p] = make(name);
    const TimeStep a = env.reset(p, Rng::from_seed(1));
    EXPECT_EQ(a, env.reset(p, Rng::from_seed(1))) << name;
    EXPECT_EQ(a.state.grid.height(), p.height);
    EXPECT_EQ(a.state.grid.width(), p.width);
    EXPECT_TRUE(is_walkable(a.state.grid.tile(a.state.agent.position))) << name;
  }
}

TEST(Registry, CustomRegistration) {
  EnvParams p;
  p.height = p.width = 11;
  p.max_steps = 10;
  register_environment("Test-Custom-11x11", Environment(EnvKind::Empty), p);
  auto [env, q] = make("Test-Custom-11x11");
  EXPECT_EQ(q.max_steps, 10);
  EXPECT_EQ(env.kind(), EnvKind::Empty);
}
