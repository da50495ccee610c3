#include "slotswapper/adversary.hpp"

#include <algorithm>
#include <map>

#include "slotswapper/errors.hpp"

namespace slotswapper {

ScheduleSource ScheduleSource::fixed(const Schedule& schedule) {
  ScheduleSource s;
  s.mode_ = Mode::Fixed;
  s.fixed_ = &schedule;
  return s;
}

ScheduleSource ScheduleSource::randomized(const SchedulePool& pool, std::uint64_t seed) {
  if (pool.size() == 0) throw InvalidParameter("empty pool");
  ScheduleSource s;
  s.mode_ = Mode::Randomized;
  s.pool_ = &pool;
  s.seed_ = seed;
  return s;
}

ScheduleSource ScheduleSource::sequence(const SchedulePool& pool, std::vector<std::size_t> order) {
  if (order.empty()) throw InvalidParameter("empty selection order");
  for (std::size_t i : order) {
    if (i >= pool.size()) throw InvalidParameter("selection order names a missing schedule");
  }
  ScheduleSource s;
  s.mode_ = Mode::Sequence;
  s.pool_ = &pool;
  s.order_ = std::move(order);
  return s;
}

const Schedule& ScheduleSource::at(std::uint64_t h) const {
  switch (mode_) {
    case Mode::Fixed: return *fixed_;
    case Mode::Randomized: return pool_->schedules[selection_index(seed_, h, pool_->size())];
    case Mode::Sequence: return pool_->schedules[order_[h % order_.size()]];
  }
  return *fixed_;
}

int ScheduleSource::hyper_period() const { return at(0).hyper_period(); }

ObservationTrace observe(const ScheduleSource& source, int hyper_periods, NodeId victim) {
  if (hyper_periods < 1) throw InvalidParameter("need at least one hyper-period");
  const int hp = source.hyper_period();
  ObservationTrace trace{victim, static_cast<std::int64_t>(hp) * hyper_periods, {}};
  for (int h = 0; h < hyper_periods; ++h) {
    const Schedule& s = source.at(static_cast<std::uint64_t>(h));
    const std::int64_t origin = static_cast<std::int64_t>(h) * hp;
    for (int slot = 1; slot <= hp; ++slot) {
      for (int ch = 1; ch <= s.channel_count(); ++ch) {
        const auto& t = s.at({slot, ch});
        if (!t || (t->edge.sender != victim && t->edge.receiver != victim)) continue;
        trace.events.push_back({origin + slot, ch, t->edge.sender, t->edge.receiver});
      }
    }
  }
  return trace;
}

std::optional<int> estimate_hyper_period(const ObservationTrace& trace) {
  if (trace.events.empty()) return std::nullopt;
  for (std::int64_t period = 1; 2 * period <= trace.observed_slots; ++period) {
    const std::int64_t windows = trace.observed_slots / period;
    std::vector<std::vector<Observation>> folded(static_cast<std::size_t>(windows));
    for (const Observation& o : trace.events) {
      const std::int64_t w = (o.slot - 1) / period;
      if (w >= windows) break;
      Observation rel = o;
      rel.slot = (o.slot - 1) % period + 1;
      folded[static_cast<std::size_t>(w)].push_back(rel);
    }
    if (std::all_of(folded.begin() + 1, folded.end(),
                    [&](const auto& window) { return window == folded.front(); })) {
      return static_cast<int>(period);
    }
  }
  return std::nullopt;
}

std::set<Cell> targeted_cells(const Schedule& schedule, int flow_id, NodeId victim) {
  // instance -> (hop, cell) of the first victim-adjacent hop
  std::map<int, std::pair<int, Cell>> first;
  for (const auto& [ref, cell] : schedule.hop_list()) {
    if (ref.flow_id != flow_id) continue;
    const Edge e = *schedule.edge_at(cell);
    if (e.sender != victim && e.receiver != victim) continue;
    auto it = first.find(ref.instance);
    if (it == first.end() || ref.hop < it->second.first) first[ref.instance] = {ref.hop, cell};
  }
  std::set<Cell> out;
  for (const auto& [inst, hop_cell] : first) out.insert(hop_cell.second);
  return out;
}

AttackPlan plan_from_schedule(const Schedule& observed, int flow_id, NodeId victim) {
  return {flow_id, observed.hyper_period(), targeted_cells(observed, flow_id, victim)};
}

AttackPlan plan_from_trace(const ObservationTrace& trace, int estimated_hyper_period,
                           const Edge& edge, int flow_id) {
  if (estimated_hyper_period < 1) throw InvalidParameter("hyper-period estimate must be positive");
  AttackPlan plan{flow_id, estimated_hyper_period, {}};
  for (const Observation& o : trace.events) {
    if (o.slot > estimated_hyper_period) break;
    if (o.sender == edge.sender && o.receiver == edge.receiver) {
      plan.cells.insert({static_cast<int>(o.slot), o.channel});
    }
  }
  return plan;
}

// The attacker jams absolute slot a on channel c when ((a - 1) mod P) + 1 is
// a planned slot for c, P being its hyper-period estimate.
bool plan_hits(const AttackPlan& plan, const Schedule& s, std::uint64_t h, NodeId victim) {
  const auto cells = targeted_cells(s, plan.target_flow, victim);
  if (cells.empty()) return false;
  const auto period = static_cast<std::int64_t>(
      plan.estimated_hyper_period > 0 ? plan.estimated_hyper_period : s.hyper_period());
  const std::int64_t origin = static_cast<std::int64_t>(h) * s.hyper_period();
  return std::all_of(cells.begin(), cells.end(), [&](const Cell& c) {
    const auto folded = static_cast<int>((origin + c.slot - 1) % period + 1);
    return plan.cells.count({folded, c.channel}) > 0;
  });
}

double jam_success_rate(const AttackPlan& plan, const ScheduleSource& source, int hyper_periods,
                        NodeId victim) {
  if (hyper_periods < 1) throw InvalidParameter("need at least one hyper-period");
  if (plan.cells.empty()) return 0.0;
  int hits = 0;
  for (int h = 0; h < hyper_periods; ++h) {
    const auto index = static_cast<std::uint64_t>(h);
    if (plan_hits(plan, source.at(index), index, victim)) ++hits;
  }
  return static_cast<double>(hits) / hyper_periods;
}

double placement_frequency(const AttackPlan& plan, const SchedulePool& pool, NodeId victim) {
  if (pool.size() == 0) throw InvalidParameter("empty pool");
  if (plan.cells.empty()) return 0.0;
  std::size_t hits = 0;
  for (const Schedule& s : pool.schedules) {
    if (plan_hits(plan, s, 0, victim)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(pool.size());
}

}  // namespace slotswapper
