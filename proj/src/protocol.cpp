#include "slotswapper/protocol.hpp"

#include <stdexcept>

#include "slotswapper/errors.hpp"
#include "slotswapper/feasibility.hpp"
#include "slotswapper/random.hpp"
#include "slotswapper/randomizer.hpp"

namespace slotswapper {

SchedulePool build_pool(const Schedule& base, int k, std::uint64_t seed, const FlowSet& flows,
                        const ConflictList& conflicts) {
  if (k < 0) throw InvalidParameter("pool size K must be >= 0");
  auto check = [&](const Schedule& s, int i) {
    auto report = validate(s, flows, conflicts);
    if (!report.empty()) {
      throw std::logic_error("pool schedule " + std::to_string(i) +
                             " is infeasible: " + to_string(report.front()));
    }
  };
  check(base, 0);
  SchedulePool pool;
  pool.seed = seed;
  pool.schedules.reserve(static_cast<std::size_t>(k) + 1);
  pool.schedules.push_back(base);
  for (int i = 1; i <= k; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    pool.schedules.push_back(sched_gen(base, flows, conflicts, rng));
    check(pool.schedules.back(), i);
  }
  return pool;
}

std::size_t selection_index(std::uint64_t seed, std::uint64_t hyper_period_index,
                            std::size_t pool_size) {
  if (pool_size == 0) throw InvalidParameter("cannot select from an empty pool");
  SplitMix64 stream(splitmix64_mix(seed + 0x9E3779B97F4A7C15ULL * (hyper_period_index + 1)));
  return static_cast<std::size_t>(bounded_draw(pool_size, [&stream] { return stream.next(); }));
}

std::pair<std::size_t, SelectorState> select_schedule(std::size_t pool_size, SelectorState state) {
  const std::size_t index = selection_index(state.seed, state.hyper_period_index, pool_size);
  ++state.hyper_period_index;
  return {index, state};
}

std::pair<std::size_t, SelectorState> select_schedule(const SchedulePool& pool,
                                                      SelectorState state) {
  return select_schedule(pool.size(), state);
}

std::vector<SlotEntry> node_slot_table(const Schedule& schedule, NodeId node) {
  std::vector<SlotEntry> out;
  for (int s = 1; s <= schedule.hyper_period(); ++s) {
    for (int ch = 1; ch <= schedule.channel_count(); ++ch) {
      const auto& t = schedule.at({s, ch});
      if (!t) continue;
      if (t->edge.sender == node) out.push_back({{s, ch}, SlotRole::Send, t->edge.receiver});
      if (t->edge.receiver == node) out.push_back({{s, ch}, SlotRole::Receive, t->edge.sender});
    }
  }
  return out;
}

NodeSlotTable node_slot_table(const SchedulePool& pool, NodeId node) {
  NodeSlotTable table{node, {}};
  table.per_schedule.reserve(pool.size());
  for (const Schedule& s : pool.schedules) table.per_schedule.push_back(node_slot_table(s, node));
  return table;
}

std::size_t footprint(const SchedulePool& pool, NodeId node, int retransmission_factor) {
  if (retransmission_factor < 1) throw InvalidParameter("retransmission factor must be >= 1");
  std::size_t entries = 0;
  for (const Schedule& s : pool.schedules) entries += node_slot_table(s, node).size();
  return entries * static_cast<std::size_t>(retransmission_factor);
}

std::size_t schedules_within_capacity(std::size_t entries_per_schedule, std::size_t capacity) {
  if (entries_per_schedule == 0) throw InvalidParameter("entries per schedule must be positive");
  return capacity / entries_per_schedule;
}

}  // namespace slotswapper
