#pragma once

// Offline pool generation and online per-hyper-period schedule selection.

#include <cstdint>
#include <utility>
#include <vector>

#include "slotswapper/model.hpp"

namespace slotswapper {

/// The base schedule followed by K randomized schedules.
struct SchedulePool {
  std::vector<Schedule> schedules;
  std::uint64_t seed = 0;

  std::size_t size() const { return schedules.size(); }
  const Schedule& base() const { return schedules.front(); }
};

/// Runs sched_gen K times on copies of `base`. Schedule i (1-based) draws
/// from the stream derive_seed(seed, i), so the pool depends only on the
/// inputs. Every member is validated; a violation throws std::logic_error.
SchedulePool build_pool(const Schedule& base, int k, std::uint64_t seed, const FlowSet& flows,
                        const ConflictList& conflicts);

/// Per-node selector state. Every node starts from the same seed.
struct SelectorState {
  std::uint64_t seed = 0;
  std::uint64_t hyper_period_index = 0;

  bool operator==(const SelectorState&) const = default;
};

/// Index of the schedule to run in hyper-period `hyper_period_index`.
///
/// The draw is a pure function of (seed, index): a SplitMix64 stream is
/// started at splitmix64_mix(seed + 0x9E3779B97F4A7C15 * (index + 1)) and
/// its outputs are rejection-sampled onto [0, pool_size).
std::size_t selection_index(std::uint64_t seed, std::uint64_t hyper_period_index,
                            std::size_t pool_size);

/// Returns the index for the state's hyper-period and the state advanced by one.
std::pair<std::size_t, SelectorState> select_schedule(std::size_t pool_size, SelectorState state);
std::pair<std::size_t, SelectorState> select_schedule(const SchedulePool& pool,
                                                      SelectorState state);

enum class SlotRole { Send, Receive };

struct SlotEntry {
  Cell cell;
  SlotRole role{};
  NodeId peer = 0;

  bool operator==(const SlotEntry&) const = default;
};

struct NodeSlotTable {
  NodeId node = 0;
  /// One entry list per pool schedule.
  std::vector<std::vector<SlotEntry>> per_schedule;
};

/// Cells of `schedule` in which `node` sends or receives, in (slot, channel) order.
std::vector<SlotEntry> node_slot_table(const Schedule& schedule, NodeId node);
NodeSlotTable node_slot_table(const SchedulePool& pool, NodeId node);

/// Slot entries the node must store for the whole pool, counting each entry
/// `retransmission_factor` times.
std::size_t footprint(const SchedulePool& pool, NodeId node, int retransmission_factor = 2);

/// How many schedules fit in `capacity` entries at `entries_per_schedule` each.
std::size_t schedules_within_capacity(std::size_t entries_per_schedule, std::size_t capacity);

}  // namespace slotswapper
