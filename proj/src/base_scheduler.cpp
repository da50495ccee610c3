#include "slotswapper/base_scheduler.hpp"

#include <algorithm>
#include <tuple>

#include "slotswapper/errors.hpp"

namespace slotswapper {

namespace {

struct PendingInstance {
  const Flow* flow;
  int instance;
  int release;
  int deadline;
  int next_hop = 1;    // 1-based index of the next hop to place
  int last_slot = 0;   // slot of the most recently placed hop
  bool done() const { return next_hop > flow->hop_count(); }
};

}  // namespace

Schedule generate_base(const NetworkGraph& graph, const FlowSet& flows, int channel_count,
                       const ConflictList& conflicts) {
  if (channel_count < 1) throw InvalidParameter("channel count must be >= 1");
  for (const Flow& f : flows.flows()) validate_flow(f, &graph);

  const int hp = flows.hyper_period();
  Schedule schedule(hp, channel_count);

  std::vector<PendingInstance> pending;
  for (const Flow& f : flows.flows()) {
    for (int j = 1; j <= flows.instance_count(f); ++j) {
      pending.push_back({&f, j, release_slot(f, j), deadline_slot(f, j)});
    }
  }

  std::vector<std::size_t> offers;
  std::vector<Edge> placed_edges;
  for (int slot = 1; slot <= hp; ++slot) {
    offers.clear();
    for (std::size_t i = 0; i < pending.size(); ++i) {
      auto& p = pending[i];
      if (p.done() || p.release > slot) continue;
      const int remaining = p.flow->hop_count() - p.next_hop + 1;
      if (remaining > p.deadline - slot + 1) {
        throw Infeasible("flow " + std::to_string(p.flow->id) + " instance " +
                         std::to_string(p.instance) + " cannot fit " + std::to_string(remaining) +
                         " hops before slot " + std::to_string(p.deadline));
      }
      if (p.last_slot < slot) offers.push_back(i);
    }
    std::sort(offers.begin(), offers.end(), [&](std::size_t a, std::size_t b) {
      const auto& x = pending[a];
      const auto& y = pending[b];
      return std::tie(x.deadline, x.flow->id, x.next_hop, x.instance) <
             std::tie(y.deadline, y.flow->id, y.next_hop, y.instance);
    });

    placed_edges.clear();
    int channel = 1;
    for (std::size_t i : offers) {
      if (channel > channel_count) break;
      auto& p = pending[i];
      const Edge& edge = p.flow->route[static_cast<std::size_t>(p.next_hop - 1)];
      const bool blocked = std::any_of(placed_edges.begin(), placed_edges.end(),
                                       [&](const Edge& e) { return conflicts.conflicting(e, edge); });
      if (blocked) continue;
      schedule.place({slot, channel}, {p.flow->id, p.instance, p.next_hop, edge});
      placed_edges.push_back(edge);
      ++channel;
      p.last_slot = slot;
      ++p.next_hop;
    }
  }

  for (const auto& p : pending) {
    if (!p.done()) {
      throw Infeasible("flow " + std::to_string(p.flow->id) + " instance " +
                       std::to_string(p.instance) + " unfinished at the end of the hyper-period");
    }
  }
  return schedule;
}

}  // namespace slotswapper
