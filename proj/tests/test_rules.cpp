// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "xminigrid/env.hpp"
#include "xminigrid/rules.hpp"

using namespace xmg;

namespace {

constexpr Entity kBlueBall{Tile::BALL, Color::BLUE};
constexpr Entity kRedSquare{Tile::SQUARE, Color::RED};
constexpr Entity kRedBall{Tile::BALL, Color::RED};
constexpr Entity kBluePyramid{Tile::PYRAMID, Color::BLUE};
constexpr Entity kPurpleSquare{Tile::SQUARE, Color::PURPLE};

Entity random_object(RandomStream& s) {
  return {kObjectTiles[s.uniform(kObjectTiles.size())], kObjectColors[s.uniform(kObjectColors.size())]};
}

int object_count(const Grid& g) {
  int n = 0;
  for (auto c : g.cells()) n += is_pickable(static_cast<Tile>(c >> 4));
  return n;
}

}  // namespace

TEST(Encoding, RuleExamples) {
  EXPECT_EQ(encode_rule(Rule::tile_near(kBlueBall, kRedSquare, kRedBall))[0], 3);
  EXPECT_EQ(encode_rule(Rule::empty()), (RuleEncoding{0, 0, 0, 0}));
  EXPECT_EQ(encode_rule(Rule::agent_hold(kBlueBall, kRedSquare)),
            (RuleEncoding{1, pack_entity(kBlueBall), 0, pack_entity(kRedSquare)}));
  EXPECT_EQ(encode_rule(Rule::agent_hold(kBlueBall, kRedSquare)), (RuleEncoding{1, 5 * 16 + 5, 0, 6 * 16 + 3}));
}

TEST(Encoding, GoalExamples) {
  EXPECT_EQ(encode_goal(Goal::agent_hold(kBlueBall))[0], 1);
  EXPECT_EQ(encode_goal(Goal::tile_near(kBlueBall, kRedSquare))[0], 4);
  EXPECT_EQ(decode_goal({0, 0, 0, 0}), Goal::empty());
  EXPECT_EQ(encode_goal(Goal::agent_on_position(3, 5)), (GoalEncoding{5, 3, 5, 0}));
  EXPECT_EQ(encode_goal(Goal::tile_on_position(kBlueBall, 3, 5)), (GoalEncoding{6, pack_entity(kBlueBall), 3, 5}));
}

TEST(Encoding, Rejects) {
  EXPECT_THROW(decode_rule({12, 0, 0, 0}), InvalidEncoding);
  EXPECT_THROW(decode_rule({0, 1, 0, 0}), InvalidEncoding);
  EXPECT_THROW(decode_rule({1, 67, 5, 81}), InvalidEncoding);  // slot b must be zero
  EXPECT_THROW(decode_rule({3, 67, 255, 81}), InvalidEncoding);
  EXPECT_THROW(decode_goal({15, 0, 0, 0}), InvalidEncoding);
  EXPECT_THROW(decode_goal({1, 67, 0, 1}), InvalidEncoding);
  EXPECT_THROW(decode_goal({5, 255, 0, 0}), InvalidEncoding);
}

TEST(Encoding, RoundTripProperty) {
  auto s = Rng::from_seed(99).stream();
  for (int i = 0; i < 20000; ++i) {
    const auto kind = static_cast<RuleKind>(s.uniform(kNumRuleKinds));
    Rule r;
    if (kind != RuleKind::Empty) {
      r.kind = kind;
      r.a = random_object(s);
      if (rule_arity(kind) == 2) r.b = random_object(s);
      r.c = random_object(s);
    }
    const auto e = encode_rule(r);
    ASSERT_EQ(decode_rule(e), r);
    ASSERT_EQ(encode_rule(decode_rule(e)), e);
  }
  for (int i = 0; i < 20000; ++i) {
    const auto kind = static_cast<GoalKind>(s.uniform(kNumGoalKinds));
    Goal g;
    g.kind = kind;
    if (kind == GoalKind::AgentOnPosition || kind == GoalKind::TileOnPosition) {
      g.x = static_cast<int>(s.uniform(kMaxGridSize));
      g.y = static_cast<int>(s.uniform(kMaxGridSize));
    }
    if (goal_entity_arity(kind) >= 1) g.a = random_object(s);
    if (goal_entity_arity(kind) == 2) g.b = random_object(s);
    if (kind == GoalKind::Empty) g = Goal::empty();
    const auto e = encode_goal(g);
    ASSERT_EQ(decode_goal(e), g);
    ASSERT_EQ(encode_goal(decode_goal(e)), e);
  }
}

TEST(ApplyRules, Figure1NearRule) {
  // Blue pyramid put down right of the purple square.
  Grid g = Grid::bordered(5, 5);
  g.set(2, 2, kPurpleSquare);
  AgentState agent{{1, 3}, Direction::DOWN, kBluePyramid};
  ASSERT_TRUE(apply_action(g, agent, Action::PutDown).has_value());
  EXPECT_EQ(g.at(2, 3), kBluePyramid);
  const std::vector<RuleEncoding> rules = {encode_rule(Rule::tile_near(kBluePyramid, kPurpleSquare, kRedBall))};
  EXPECT_EQ(apply_rules(g, agent, rules, {EventKind::PutDown, {2, 3}}), 1);
  EXPECT_EQ(g.at(2, 3), kRedBall);   // a-side takes the output
  EXPECT_EQ(g.at(2, 2), kFloor);     // b-side becomes black floor
  EXPECT_EQ(object_count(g), 1);
}

TEST(ApplyRules, EmptyRulesetNoop) {
  Grid g = Grid::bordered(5, 5);
  g.set(1, 1, kBlueBall);
  g.set(1, 2, kRedSquare);
  AgentState agent{{2, 2}, Direction::UP, kRedBall};
  const Grid before = g;
  const std::vector<RuleEncoding> rules(5, kEmptyRuleEncoding);
  for (auto kind : {EventKind::Move, EventKind::PickUp, EventKind::PutDown, EventKind::Toggle}) {
    EXPECT_EQ(apply_rules(g, agent, rules, {kind, {1, 1}}), 0);
  }
  EXPECT_EQ(g, before);
  EXPECT_EQ(agent.pocket, kRedBall);
}

// Brute force: place b at every one of the 8 cells around a on a 5x5 board;
// oracle says which placement each directional rule accepts.
TEST(ApplyRules, DirectionalTileNearBruteForce) {
  const Position a_pos{2, 2};
  struct Case {
    RuleKind kind;
    Position rel;
  };
  const Case cases[] = {{RuleKind::TileNearUp, {-1, 0}},
                        {RuleKind::TileNearRight, {0, 1}},
                        {RuleKind::TileNearDown, {1, 0}},
                        {RuleKind::TileNearLeft, {0, -1}}};
  for (const auto& cs : cases) {
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        Grid g(5, 5, kFloor);
        g.set(a_pos, kBlueBall);
        g.set(a_pos + Position{dr, dc}, kRedSquare);
        AgentState agent{{0, 0}, Direction::UP, kEmpty};
        const RuleEncoding r{static_cast<std::uint8_t>(cs.kind), pack_entity(kBlueBall), pack_entity(kRedSquare),
                             pack_entity(kRedBall)};
        const bool expected = dr == cs.rel.row && dc == cs.rel.col;
        EXPECT_EQ(apply_rule(g, agent, r), expected)
            << "kind " << static_cast<int>(cs.kind) << " rel " << dr << "," << dc;
        if (expected) {
          EXPECT_EQ(g.at(a_pos), kRedBall);
          EXPECT_EQ(g.at(a_pos + Position{dr, dc}), kFloor);
        }
      }
    }
  }
}

TEST(ApplyRules, AgentNearFamily) {
  for (int dir = 0; dir < 4; ++dir) {
    Grid g = Grid::bordered(5, 5);
    const Position off = detail::kNeighbours[dir];
    g.set(Position{2, 2} + off, kBlueBall);
    AgentState agent{{2, 2}, Direction::UP, kEmpty};
    for (int k = 0; k < 4; ++k) {
      Grid copy = g;
      const RuleEncoding r{static_cast<std::uint8_t>(8 + k), pack_entity(kBlueBall), 0, pack_entity(kRedBall)};
      EXPECT_EQ(apply_rule(copy, agent, r), k == dir);
    }
    Grid copy = g;
    EXPECT_TRUE(apply_rule(copy, agent, encode_rule(Rule::agent_near(kBlueBall, kRedBall))));
    EXPECT_EQ(copy.at(Position{2, 2} + off), kRedBall);
  }
}

TEST(ApplyRules, HoldRuleRewritesPocketAndPreservesGrid) {
  Grid g = Grid::bordered(5, 5);
  g.set(1, 1, kRedSquare);
  AgentState agent{{2, 2}, Direction::UP, kBlueBall};
  const Grid before = g;
  EXPECT_TRUE(apply_rule(g, agent, encode_rule(Rule::agent_hold(kBlueBall, kRedBall))));
  EXPECT_EQ(agent.pocket, kRedBall);
  EXPECT_EQ(g, before);
  EXPECT_TRUE(apply_rule(g, agent, encode_rule(Rule::agent_hold(kRedBall, kFloor))));
  EXPECT_FALSE(agent.holding());
}

TEST(ApplyRules, GatingNeverFiresOutsideTriggerClass) {
  Grid g = Grid::bordered(5, 5);
  g.set(1, 1, kBlueBall);
  g.set(1, 2, kRedSquare);
  const std::vector<RuleEncoding> near = {encode_rule(Rule::tile_near(kBlueBall, kRedSquare, kRedBall))};
  AgentState agent{{3, 3}, Direction::UP, kEmpty};
  for (auto kind : {EventKind::Move, EventKind::PickUp, EventKind::Toggle}) {
    Grid copy = g;
    EXPECT_EQ(apply_rules(copy, agent, near, {kind, {2, 3}}), 0);
    EXPECT_EQ(copy, g);
  }
  // Turning never emits an event at all.
  Grid copy = g;
  AgentState a2 = agent;
  EXPECT_FALSE(apply_action(copy, a2, Action::TurnLeft).has_value());

  AgentState holder{{3, 3}, Direction::UP, kBlueBall};
  const std::vector<RuleEncoding> hold = {encode_rule(Rule::agent_hold(kBlueBall, kRedBall))};
  for (auto kind : {EventKind::Move, EventKind::PutDown, EventKind::Toggle}) {
    AgentState h = holder;
    EXPECT_EQ(apply_rules(copy, h, hold, {kind, {2, 3}}), 0);
  }
}

TEST(ApplyRules, ScanOrderSeesEarlierFirings) {
  Grid g = Grid::bordered(5, 5);
  g.set(1, 1, kBlueBall);
  g.set(1, 2, kRedSquare);
  AgentState agent{{3, 3}, Direction::UP, kEmpty};
  const Entity green_star{Tile::STAR, Color::GREEN};
  const std::vector<RuleEncoding> rules = {
      encode_rule(Rule::tile_near(kBlueBall, kRedSquare, kRedBall)),
      encode_rule(Rule{RuleKind::AgentNear, kRedBall, kEndOfMap, green_star}),  // not adjacent: no-op
      encode_rule(Rule::tile_near(kRedBall, kRedSquare, green_star)),           // square already removed
  };
  EXPECT_EQ(apply_rules(g, agent, rules, {EventKind::PutDown, {1, 2}}), 1);
  EXPECT_EQ(g.at(1, 1), kRedBall);
}

TEST(ApplyRules, RowMajorFirstMatchFires) {
  Grid g = Grid::bordered(6, 6);
  g.set(1, 1, kBlueBall);
  g.set(1, 2, kRedSquare);
  g.set(3, 3, kBlueBall);
  g.set(3, 4, kRedSquare);
  AgentState agent{{4, 1}, Direction::UP, kEmpty};
  EXPECT_TRUE(apply_rule(g, agent, encode_rule(Rule::tile_near(kBlueBall, kRedSquare, kRedBall))));
  EXPECT_EQ(g.at(1, 1), kRedBall);
  EXPECT_EQ(g.at(3, 3), kBlueBall);
}

TEST(ApplyRules, NearFiringConservation) {
  auto s = Rng::from_seed(5).stream();
  int firings = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Grid g = Grid::bordered(6, 6);
    std::vector<Entity> objs;
    for (int i = 0; i < 8; ++i) objs.push_back(random_object(s));
    scatter_objects(g, objs, Rng::from_seed(trial));
    AgentState agent{{1, 1}, Direction::UP, kEmpty};
    if (g.tile({1, 1}) != Tile::FLOOR) continue;
    const RuleEncoding r{static_cast<std::uint8_t>(3 + s.uniform(5)), pack_entity(objs[0]), pack_entity(objs[1]),
                         pack_entity(random_object(s))};
    const int before = object_count(g);
    if (apply_rule(g, agent, r)) {
      ++firings;
      EXPECT_EQ(object_count(g), before - 1);
    } else {
      EXPECT_EQ(object_count(g), before);
    }
  }
  EXPECT_GT(firings, 10);
}

TEST(Goals, AgentHold) {
  Grid g = Grid::bordered(5, 5);
  const auto enc = encode_goal(Goal::agent_hold(kBlueBall));
  AgentState agent{{2, 2}, Direction::UP, kBlueBall};
  EXPECT_TRUE(check_goal(g, agent, enc, {EventKind::PickUp, {1, 2}}));
  EXPECT_FALSE(check_goal(g, agent, enc, {EventKind::Move, {1, 2}}));  // gated
  agent.pocket = kRedBall;
  EXPECT_FALSE(goal_holds(g, agent, enc));
  agent.pocket = kEmpty;
  EXPECT_FALSE(goal_holds(g, agent, enc));
}

TEST(Goals, EmptyAlwaysFalse) {
  auto s = Rng::from_seed(1).stream();
  for (int i = 0; i < 200; ++i) {
    Grid g = Grid::bordered(5, 5);
    scatter_objects(g, std::vector<Entity>{random_object(s), random_object(s)}, Rng::from_seed(i));
    AgentState agent{{2, 2}, static_cast<Direction>(i % 4), i % 2 ? random_object(s) : kEmpty};
    for (auto kind : {EventKind::Move, EventKind::PickUp, EventKind::PutDown, EventKind::Toggle})
      EXPECT_FALSE(check_goal(g, agent, kEmptyGoalEncoding, {kind, {1, 1}}));
  }
}

// Every placement of a and b on a 4x4 board against a hand adjacency oracle.
TEST(Goals, TileNearExhaustive4x4) {
  const auto enc = encode_goal(Goal::tile_near(kBlueBall, kRedSquare));
  const AgentState agent{{0, 0}, Direction::UP, kEmpty};
  int hits = 0;
  for (int pa = 0; pa < 16; ++pa) {
    for (int pb = 0; pb < 16; ++pb) {
      if (pa == pb) continue;
      Grid g(4, 4, kFloor);
      const Position a{pa / 4, pa % 4}, b{pb / 4, pb % 4};
      g.set(a, kBlueBall);
      g.set(b, kRedSquare);
      const bool adjacent = std::abs(a.row - b.row) + std::abs(a.col - b.col) == 1;
      EXPECT_EQ(check_goal(g, agent, enc, {EventKind::PutDown, b}), adjacent) << pa << " " << pb;
      hits += adjacent;
    }
  }
  EXPECT_EQ(hits, 48);  // 24 unordered adjacent pairs, both orders
}

TEST(Goals, PositionGoalsUseColumnRow) {
  Grid g = Grid::bordered(7, 7);
  g.set(2, 4, kBlueBall);  // row 2, col 4
  const AgentState agent{{2, 4}, Direction::UP, kEmpty};
  EXPECT_TRUE(goal_holds(g, agent, encode_goal(Goal::agent_on_position(4, 2))));
  EXPECT_FALSE(goal_holds(g, agent, encode_goal(Goal::agent_on_position(2, 4))));
  EXPECT_TRUE(goal_holds(g, agent, encode_goal(Goal::tile_on_position(kBlueBall, 4, 2))));
  EXPECT_FALSE(goal_holds(g, agent, encode_goal(Goal::tile_on_position(kBlueBall, 2, 4))));
}

TEST(Goals, CheckGoalIsPure) {
  Grid g = Grid::bordered(5, 5);
  g.set(1, 2, kBlueBall);
  EnvState st;
  st.grid = g;
  st.agent = {{2, 2}, Direction::UP, kEmpty};
  const auto h = hash_state(st);
  for (int id = 0; id < kNumGoalKinds; ++id) {
    const GoalEncoding e{static_cast<std::uint8_t>(id), pack_entity(kBlueBall), id == 4 ? pack_entity(kRedSquare) : std::uint8_t{0}, 0};
    (void)check_goal(st.grid, st.agent, e, {EventKind::Move, {1, 2}});
  }
  EXPECT_EQ(hash_state(st), h);
}

TEST(Rules, Describe) {
  const Rule r = Rule::tile_near({Tile::PYRAMID, Color::BLUE}, {Tile::SQUARE, Color::PURPLE}, {Tile::BALL, Color::RED});
  EXPECT_EQ(describe(r), "TileNear(BLUE PYRAMID, PURPLE SQUARE) -> RED BALL");
  EXPECT_EQ(describe(Goal::agent_hold({Tile::KEY, Color::RED})), "AgentHold(RED KEY)");
  EXPECT_EQ(describe(Goal::tile_on_position({Tile::KEY, Color::RED}, 2, 3)), "TileOnPosition(RED KEY, x=2, y=3)");
  Ruleset rs;
  rs.goal = encode_goal(Goal::agent_near({Tile::BALL, Color::GREEN}));
  rs.rules = {encode_rule(r), kEmptyRuleEncoding};
  rs.init_objects = {pack_entity({Tile::BALL, Color::GREEN}), 0};
  EXPECT_EQ(describe(rs), "goal: AgentNear(GREEN BALL)\nrule: TileNear(BLUE PYRAMID, PURPLE SQUARE) -> RED BALL\n"
                          "objects: GREEN BALL\n");
  for (int k = 0; k < kNumRuleKinds; ++k) EXPECT_NE(rule_kind_name(static_cast<RuleKind>(k)), "?");
  for (int k = 0; k < kNumGoalKinds; ++k) EXPECT_NE(goal_kind_name(static_cast<GoalKind>(k)), "?");
}
