#pragma once

// Six-node example network: access point 0, sensors 1..5, and the two
// hand-built schedules S1 and S2 over an 8-slot hyper-period with 2 channels.

#include <vector>

#include "slotswapper/model.hpp"

namespace fixtures {

using namespace slotswapper;

constexpr NodeId kAp = 0;

inline NetworkGraph example_graph() {
  return NetworkGraph(6, {{1, 2}, {2, 3}, {2, 4}, {3, kAp}, {4, 5}, {5, kAp}}, {kAp});
}

// F1: 1->2->3->AP, F2: 4->5->AP, F3: 2->3->AP.
inline FlowSet example_flows(const NetworkGraph* graph = nullptr) {
  return FlowSet({{1, 1, kAp, 8, 8, {{1, 2}, {2, 3}, {3, kAp}}},
                  {2, 4, kAp, 4, 4, {{4, 5}, {5, kAp}}},
                  {3, 2, kAp, 8, 8, {{2, 3}, {3, kAp}}}},
                 graph);
}

struct Entry {
  int slot, channel, flow, instance, hop;
};

inline Schedule build(const FlowSet& flows, const std::vector<Entry>& entries) {
  Schedule s(8, 2);
  for (const auto& e : entries) {
    const Flow& f = flows.flow(e.flow);
    s.place({e.slot, e.channel},
            {e.flow, e.instance, e.hop, f.route[static_cast<std::size_t>(e.hop - 1)]});
  }
  return s;
}

inline Schedule schedule_s1(const FlowSet& flows) {
  return build(flows, {{1, 1, 1, 1, 1},
                       {1, 2, 2, 1, 1},
                       {3, 2, 2, 1, 2},
                       {4, 1, 3, 1, 1},
                       {5, 1, 2, 2, 1},
                       {5, 2, 1, 1, 2},
                       {6, 2, 1, 1, 3},
                       {7, 2, 2, 2, 2},
                       {8, 1, 3, 1, 2}});
}

inline Schedule schedule_s2(const FlowSet& flows) {
  return build(flows, {{1, 2, 3, 1, 1},
                       {2, 1, 1, 1, 1},
                       {2, 2, 2, 1, 1},
                       {3, 2, 1, 1, 2},
                       {4, 1, 2, 1, 2},
                       {5, 1, 1, 1, 3},
                       {6, 1, 2, 2, 1},
                       {7, 2, 3, 1, 2},
                       {8, 1, 2, 2, 2}});
}

}  // namespace fixtures
