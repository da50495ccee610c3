#pragma once

// Eavesdropping adversary: records the victim's transmissions across
// hyper-periods, looks for a repeating period, and measures how often a
// selective-jamming plan hits the targeted flow.

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "slotswapper/model.hpp"
#include "slotswapper/protocol.hpp"

namespace slotswapper {

/// Which schedule the network runs in each hyper-period.
class ScheduleSource {
 public:
  /// The same schedule every hyper-period.
  static ScheduleSource fixed(const Schedule& schedule);
  /// pool[selection_index(seed, h, |pool|)] in hyper-period h.
  static ScheduleSource randomized(const SchedulePool& pool, std::uint64_t seed);
  /// pool[order[h mod |order|]] in hyper-period h.
  static ScheduleSource sequence(const SchedulePool& pool, std::vector<std::size_t> order);

  const Schedule& at(std::uint64_t hyper_period_index) const;
  int hyper_period() const;

 private:
  enum class Mode { Fixed, Randomized, Sequence };
  Mode mode_ = Mode::Fixed;
  const Schedule* fixed_ = nullptr;
  const SchedulePool* pool_ = nullptr;
  std::uint64_t seed_ = 0;
  std::vector<std::size_t> order_;
};

struct Observation {
  std::int64_t slot = 0;  // absolute, 1-based
  int channel = 0;
  NodeId sender = 0;
  NodeId receiver = 0;

  auto operator<=>(const Observation&) const = default;
};

struct ObservationTrace {
  NodeId victim = 0;
  std::int64_t observed_slots = 0;
  std::vector<Observation> events;  // ordered by (slot, channel)
};

/// Every transmission touching `victim` over the first `hyper_periods`
/// hyper-periods of `source`.
ObservationTrace observe(const ScheduleSource& source, int hyper_periods, NodeId victim);

/// Smallest P such that the trace, cut into complete windows of P slots,
/// shows the same events (by offset) in every window. Needs at least two
/// complete windows, so nullopt when observed_slots < 2P for every
/// candidate or when the trace is empty.
std::optional<int> estimate_hyper_period(const ObservationTrace& trace);

struct AttackPlan {
  int target_flow = 0;
  int estimated_hyper_period = 0;
  std::set<Cell> cells;  // (slot within the hyper-period, channel) to jam
};

/// Cells in `schedule` holding the first victim-adjacent hop of each instance
/// of `flow_id`. Empty when the flow never touches the victim.
std::set<Cell> targeted_cells(const Schedule& schedule, int flow_id, NodeId victim);

/// Plan built from one observed hyper-period of the network.
AttackPlan plan_from_schedule(const Schedule& observed, int flow_id, NodeId victim);

/// Plan built from a trace: cells of `edge` seen in the first
/// `estimated_hyper_period` slots of the trace.
AttackPlan plan_from_trace(const ObservationTrace& trace, int estimated_hyper_period,
                           const Edge& edge, int flow_id);

/// True when every targeted cell of `s`, placed in hyper-period `h`, falls
/// on a jammed cell of the plan. False when the flow has no targeted cell.
bool plan_hits(const AttackPlan& plan, const Schedule& s, std::uint64_t h, NodeId victim);
/// Fraction of hyper-periods in which every targeted cell of the plan's flow
/// (see targeted_cells) lies inside the plan.
double jam_success_rate(const AttackPlan& plan, const ScheduleSource& source, int hyper_periods,
                        NodeId victim);

/// Fraction of pool schedules whose targeted cells all lie inside the plan:
/// the expected success under uniform selection.
double placement_frequency(const AttackPlan& plan, const SchedulePool& pool, NodeId victim);

}  // namespace slotswapper
