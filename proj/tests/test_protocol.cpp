#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include "fixtures.hpp"
#include "instances.hpp"
#include "slotswapper/errors.hpp"
#include "slotswapper/feasibility.hpp"
#include "slotswapper/protocol.hpp"

using namespace slotswapper;

namespace {

struct Example : ::testing::Test {
  NetworkGraph graph = fixtures::example_graph();
  FlowSet flows = fixtures::example_flows(&graph);
  ConflictList conflicts{graph};
  Schedule s1 = fixtures::schedule_s1(flows);
};

}  // namespace

TEST_F(Example, PoolOfZeroIsTheBase) {
  const auto pool = build_pool(s1, 0, 3, flows, conflicts);
  ASSERT_EQ(pool.size(), 1U);
  EXPECT_EQ(pool.base(), s1);
}

TEST_F(Example, PoolOfTwentyFiveIsFeasibleAndReproducible) {
  const auto a = build_pool(s1, 24, 99, flows, conflicts);
  const auto b = build_pool(s1, 24, 99, flows, conflicts);
  ASSERT_EQ(a.size(), 25U);
  EXPECT_EQ(a.schedules, b.schedules);
  EXPECT_EQ(a.base(), s1);
  for (const auto& s : a.schedules) EXPECT_TRUE(validate(s, flows, conflicts).empty());
  const auto c = build_pool(s1, 24, 100, flows, conflicts);
  EXPECT_NE(a.schedules, c.schedules);
}

TEST_F(Example, PoolRejectsInfeasibleBase) {
  Schedule bad = s1;
  bad.swap_cells({1, 2}, {2, 2});
  bad.swap_cells({4, 1}, {1, 2});
  EXPECT_THROW(build_pool(bad, 2, 1, flows, conflicts), std::logic_error);
  EXPECT_THROW(build_pool(s1, -1, 1, flows, conflicts), InvalidParameter);
}

TEST(Selector, PoolOfOneAlwaysZero) {
  SelectorState st{123, 0};
  for (int h = 0; h < 100; ++h) {
    auto [index, next] = select_schedule(1, st);
    EXPECT_EQ(index, 0U);
    st = next;
  }
  EXPECT_EQ(st.hyper_period_index, 100U);
  EXPECT_THROW(selection_index(1, 0, 0), InvalidParameter);
}

TEST(Selector, PureFunctionOfSeedAndIndex) {
  SelectorState st{42, 0};
  for (std::uint64_t h = 0; h < 1000; ++h) {
    auto [index, next] = select_schedule(25, st);
    EXPECT_EQ(index, selection_index(42, h, 25));
    st = next;
  }
  // Joining late gives the same answer as having stepped from zero.
  EXPECT_EQ(select_schedule(25, SelectorState{42, 500}).first, selection_index(42, 500, 25));
}

TEST(Selector, NodesAgree) {
  std::vector<SelectorState> nodes(10, SelectorState{0xC0FFEE, 0});
  for (int h = 0; h < 10000; ++h) {
    std::size_t first = 0;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      auto [index, next] = select_schedule(25, nodes[n]);
      nodes[n] = next;
      if (n == 0) first = index;
      ASSERT_EQ(index, first);
    }
  }
}

// Reference values for seed 0: these pin the selector's algorithm so any
// change to it shows up here.
TEST(Selector, ReferenceStream) {
  const std::uint64_t seed = 0;
  std::uint64_t state = splitmix64_mix(seed + 0x9E3779B97F4A7C15ULL * 1);
  state += 0x9E3779B97F4A7C15ULL;
  const std::uint64_t word = splitmix64_mix(state);
  EXPECT_EQ(selection_index(seed, 0, 1ULL << 32), word % (1ULL << 32));
}

TEST(Selector, UniformChiSquare) {
  const std::size_t k = 25;
  std::vector<double> counts(k, 0);
  const int draws = 100000;
  for (int h = 0; h < draws; ++h) ++counts[selection_index(7, static_cast<std::uint64_t>(h), k)];
  const double expected = static_cast<double>(draws) / k;
  double stat = 0;
  for (double c : counts) {
    stat += (c - expected) * (c - expected) / expected;
    EXPECT_LT(std::abs(c - expected), 3 * std::sqrt(expected * (1.0 - 1.0 / k)));
  }
  boost::math::chi_squared dist(k - 1);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, stat)), 0.01);
}

TEST_F(Example, NodeSlotTables) {
  const auto node1 = node_slot_table(s1, 1);
  ASSERT_EQ(node1.size(), 1U);
  EXPECT_EQ(node1[0], (SlotEntry{{1, 1}, SlotRole::Send, 2}));

  const auto ap = node_slot_table(s1, fixtures::kAp);
  std::vector<int> slots;
  for (const auto& e : ap) {
    EXPECT_EQ(e.role, SlotRole::Receive);
    slots.push_back(e.cell.slot);
  }
  EXPECT_EQ(slots, (std::vector<int>{3, 6, 7, 8}));

  const Schedule empty(8, 2);
  EXPECT_TRUE(node_slot_table(empty, 1).empty());
}

// Union over nodes lists every transmission once as send and once as receive.
TEST(NodeSlotTable, PropertyReconstructsSchedule) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto inst = instances::small(seed, 2);
    if (!inst) continue;
    std::map<Cell, std::pair<int, int>> seen;
    for (NodeId v = 0; v < inst->graph.node_count(); ++v) {
      for (const auto& e : node_slot_table(inst->base, v)) {
        const Edge edge = *inst->base.edge_at(e.cell);
        if (e.role == SlotRole::Send) {
          EXPECT_EQ(edge, (Edge{v, e.peer}));
          ++seen[e.cell].first;
        } else {
          EXPECT_EQ(edge, (Edge{e.peer, v}));
          ++seen[e.cell].second;
        }
      }
    }
    EXPECT_EQ(seen.size(), inst->base.transmission_count());
    for (const auto& [cell, n] : seen) EXPECT_EQ(n, std::make_pair(1, 1));
  }
}

TEST(Footprint, FortyFlowsThroughOneNode) {
  // Forty one-hop flows into the AP, one per leaf.
  std::vector<Edge> edges;
  std::vector<Flow> flows;
  for (int i = 1; i <= 40; ++i) {
    edges.push_back({i, 0});
    flows.push_back({i, i, 0, 64, 64, {{i, 0}}});
  }
  const NetworkGraph g(41, edges, {0});
  const FlowSet set(flows, &g);
  const ConflictList cl(g);
  const auto base = generate_base(g, set, 1, cl);
  const auto pool = build_pool(base, 0, 1, set, cl);
  EXPECT_EQ(node_slot_table(base, 0).size(), 40U);
  EXPECT_EQ(footprint(pool, 0, 2), 80U);
  EXPECT_EQ(schedules_within_capacity(80, 2000), 25U);
  EXPECT_EQ(footprint(pool, 41 - 1, 2), 2U);  // a leaf: one send, doubled
  EXPECT_THROW(footprint(pool, 0, 0), InvalidParameter);
  EXPECT_THROW(schedules_within_capacity(0, 2000), InvalidParameter);
}
