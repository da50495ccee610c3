#include "slotswapper/randomizer.hpp"

#include <limits>
#include <stdexcept>

#include "slotswapper/errors.hpp"

namespace slotswapper {

namespace {

constexpr std::size_t kNoEdge = std::numeric_limits<std::size_t>::max();

/// Evaluates swap predicates against a schedule, caching per-cell conflict
/// list indices and flow lookups.
class SwapEvaluator {
 public:
  SwapEvaluator(const Schedule& schedule, const FlowSet* flows, const ConflictList* conflicts)
      : schedule_(schedule), flows_(flows), conflicts_(conflicts) {
    if (conflicts_) {
      const int hp = schedule.hyper_period();
      const int m = schedule.channel_count();
      edge_index_.assign(static_cast<std::size_t>(hp) * static_cast<std::size_t>(m), kNoEdge);
      for (int s = 1; s <= hp; ++s) {
        for (int ch = 1; ch <= m; ++ch) {
          const auto& t = schedule.at({s, ch});
          if (!t) continue;
          auto idx = conflicts_->index_of(t->edge);
          edge_index_[offset({s, ch})] = idx.value_or(kNoEdge);
        }
      }
    }
    if (flows_) {
      int max_id = 0;
      for (const Flow& f : flows_->flows()) max_id = std::max(max_id, f.id);
      by_id_.assign(static_cast<std::size_t>(max_id) + 1, nullptr);
      for (const Flow& f : flows_->flows()) {
        if (f.id >= 0) by_id_[static_cast<std::size_t>(f.id)] = &f;
      }
    }
  }

  /// Keeps the edge-index cache in step after schedule.swap_cells(a, b).
  void note_swap(Cell a, Cell b) {
    if (!edge_index_.empty()) std::swap(edge_index_[offset(a)], edge_index_[offset(b)]);
  }

  const Transmission& mover(Cell src) const {
    const auto& t = schedule_.at(src);
    if (!t) throw InvalidParameter("source cell " + to_string(src) + " is idle");
    return *t;
  }

  bool tr_conf(Cell src, Cell dst) const {
    mover(src);
    if (src == dst || src.slot == dst.slot || schedule_.idle(dst)) return true;
    return !conflict(src, dst);
  }

  bool slot_conflict_free(Cell src, Cell dst) const {
    mover(src);
    if (src.slot == dst.slot) return true;
    const bool occupied = !schedule_.idle(dst);
    for (int ch = 1; ch <= schedule_.channel_count(); ++ch) {
      const Cell stay_dst{dst.slot, ch};
      if (ch != dst.channel && !schedule_.idle(stay_dst) && conflict(src, stay_dst)) return false;
      const Cell stay_src{src.slot, ch};
      if (occupied && ch != src.channel && !schedule_.idle(stay_src) && conflict(dst, stay_src)) {
        return false;
      }
    }
    return true;
  }

  bool dead_pr(Cell src, Cell dst) const {
    const Transmission& t = mover(src);
    if (!in_instance_window(t, dst.slot)) return false;
    const auto& o = schedule_.at(dst);
    return !o || src == dst || in_instance_window(*o, src.slot);
  }

  bool flow_pr(Cell src, Cell dst) const {
    const Transmission& t = mover(src);
    if (src == dst) return true;
    const auto& o = schedule_.at(dst);
    std::optional<HopRef> o_ref;
    if (o) o_ref.emplace(o->ref());
    if (!order_kept(t.ref(), dst.slot, t.ref(), o_ref, src, dst)) return false;
    return !o || order_kept(*o_ref, src.slot, t.ref(), o_ref, src, dst);
  }

  const Flow& flow_of(int id) const {
    const Flow* f = (id >= 0 && static_cast<std::size_t>(id) < by_id_.size())
                        ? by_id_[static_cast<std::size_t>(id)]
                        : nullptr;
    if (!f) throw InvalidParameter("transmission names unknown flow " + std::to_string(id));
    return *f;
  }

 private:
  std::size_t offset(Cell c) const {
    return static_cast<std::size_t>(c.slot - 1) *
               static_cast<std::size_t>(schedule_.channel_count()) +
           static_cast<std::size_t>(c.channel - 1);
  }

  bool conflict(Cell a, Cell b) const {
    const std::size_t i = edge_index_[offset(a)];
    const std::size_t j = edge_index_[offset(b)];
    if (i != kNoEdge && j != kNoEdge) return conflicts_->conflicting(i, j);
    return shares_endpoint(schedule_.at(a)->edge, schedule_.at(b)->edge);
  }

  bool in_instance_window(const Transmission& t, int slot) const {
    const Flow& f = flow_of(t.flow_id);
    return slot >= release_slot(f, t.instance) && slot <= deadline_slot(f, t.instance);
  }

  // Slot of `hop` once the swap src <-> dst has happened.
  std::optional<int> slot_after(const HopRef& hop, const HopRef& t, const std::optional<HopRef>& o,
                                Cell src, Cell dst) const {
    if (hop == t) return dst.slot;
    if (o && hop == *o) return src.slot;
    auto c = schedule_.locate(hop);
    if (!c) return std::nullopt;
    return c->slot;
  }

  bool order_kept(const HopRef& moved, int new_slot, const HopRef& t,
                  const std::optional<HopRef>& o, Cell src, Cell dst) const {
    const Flow& f = flow_of(moved.flow_id);
    if (moved.hop > 1) {
      auto prev = slot_after({moved.flow_id, moved.instance, moved.hop - 1}, t, o, src, dst);
      if (prev && *prev >= new_slot) return false;
    }
    if (moved.hop < f.hop_count()) {
      auto next = slot_after({moved.flow_id, moved.instance, moved.hop + 1}, t, o, src, dst);
      if (next && *next <= new_slot) return false;
    }
    return true;
  }

  const Schedule& schedule_;
  const FlowSet* flows_;
  const ConflictList* conflicts_;
  std::vector<std::size_t> edge_index_;
  std::vector<const Flow*> by_id_;
};

std::vector<SwapCandidate> multi_channel_candidates(const SwapEvaluator& ev,
                                                    const Schedule& schedule, Cell src,
                                                    HopWindow window, int channel_count,
                                                    bool require_slot_free) {
  std::vector<SwapCandidate> out;
  const int lo = std::max(window.lower, 1);
  const int hi = std::min(window.upper, schedule.hyper_period());
  for (int s = lo; s <= hi; ++s) {
    for (int ch = 1; ch <= channel_count; ++ch) {
      const Cell dst{s, ch};
      if (dst == src) continue;
      if (!ev.tr_conf(src, dst) || !ev.dead_pr(src, dst) || !ev.flow_pr(src, dst)) continue;
      if (require_slot_free && !ev.slot_conflict_free(src, dst)) continue;
      out.push_back(dst);
    }
  }
  return out;
}

std::vector<SwapCandidate> single_channel_candidates(const SwapEvaluator& ev,
                                                     const Schedule& schedule, Cell src) {
  const Transmission& t = ev.mover(src);
  const Flow& f = ev.flow_of(t.flow_id);
  std::vector<SwapCandidate> out;
  const int lo = release_slot(f, t.instance);
  const int hi = std::min(deadline_slot(f, t.instance), schedule.hyper_period());
  for (int s = lo; s <= hi; ++s) {
    const Cell dst{s, src.channel};
    if (dst == src) continue;
    const auto& o = schedule.at(dst);
    if (o && o->flow_id == t.flow_id) continue;
    if (!ev.dead_pr(src, dst) || !ev.flow_pr(src, dst)) continue;
    out.push_back(dst);
  }
  return out;
}

}  // namespace

HopWindow hop_window(const Schedule& schedule, const Flow& flow, int instance, int hop) {
  if (hop < 1 || hop > flow.hop_count()) throw InvalidParameter("hop index outside the route");
  HopWindow w{release_slot(flow, instance), deadline_slot(flow, instance)};
  if (hop > 1) {
    auto prev = schedule.locate({flow.id, instance, hop - 1});
    if (!prev) throw InvalidParameter("previous hop of " + to_string(HopRef{flow.id, instance, hop}) + " not placed");
    w.lower = prev->slot + 1;
  }
  if (hop < flow.hop_count()) {
    auto next = schedule.locate({flow.id, instance, hop + 1});
    if (!next) throw InvalidParameter("next hop of " + to_string(HopRef{flow.id, instance, hop}) + " not placed");
    w.upper = next->slot - 1;
  }
  return w;
}

bool tr_conf(const Schedule& schedule, Cell src, Cell dst, const ConflictList& conflicts) {
  return SwapEvaluator(schedule, nullptr, &conflicts).tr_conf(src, dst);
}

bool dead_pr(const Schedule& schedule, Cell src, Cell dst, const FlowSet& flows) {
  return SwapEvaluator(schedule, &flows, nullptr).dead_pr(src, dst);
}

bool flow_pr(const Schedule& schedule, Cell src, Cell dst, const FlowSet& flows) {
  return SwapEvaluator(schedule, &flows, nullptr).flow_pr(src, dst);
}

bool slot_conflict_free(const Schedule& schedule, Cell src, Cell dst,
                        const ConflictList& conflicts) {
  return SwapEvaluator(schedule, nullptr, &conflicts).slot_conflict_free(src, dst);
}

std::vector<SwapCandidate> eligible_list(const Schedule& schedule, Cell src, HopWindow window,
                                         int channel_count, const ConflictList& conflicts,
                                         const FlowSet& flows) {
  if (channel_count != schedule.channel_count()) {
    throw InvalidParameter("channel count does not match the schedule");
  }
  SwapEvaluator ev(schedule, &flows, &conflicts);
  return multi_channel_candidates(ev, schedule, src, window, channel_count, false);
}

std::vector<SwapCandidate> swap_candidates(const Schedule& schedule, Cell src,
                                           const FlowSet& flows, const ConflictList& conflicts) {
  SwapEvaluator ev(schedule, &flows, &conflicts);
  if (schedule.channel_count() == 1) return single_channel_candidates(ev, schedule, src);
  const Transmission& t = ev.mover(src);
  const HopWindow w = hop_window(schedule, ev.flow_of(t.flow_id), t.instance, t.hop);
  return multi_channel_candidates(ev, schedule, src, w, schedule.channel_count(), true);
}

SwapPicker uniform_picker(Rng& rng) {
  return [&rng](const HopRef&, std::span<const SwapCandidate> candidates)
             -> std::optional<std::size_t> {
    if (candidates.empty()) return std::nullopt;
    return rng.index(candidates.size());
  };
}

Schedule sched_gen(const Schedule& base, const FlowSet& flows, const ConflictList& conflicts,
                   const SwapPicker& picker) {
  if (base.hyper_period() != flows.hyper_period()) {
    throw InvalidParameter("base schedule does not span the flow set's hyper-period");
  }
  Schedule work = base;
  SwapEvaluator ev(work, &flows, &conflicts);
  const int m = work.channel_count();
  std::vector<SwapCandidate> candidates;

  for (int tick = 1; tick <= work.hyper_period(); ++tick) {
    for (const Flow& f : flows.flows()) {
      if (tick % f.period != 0) continue;
      const int inst = tick / f.period;
      for (int hop = 1; hop <= f.hop_count(); ++hop) {
        const HopRef ref{f.id, inst, hop};
        auto src = work.locate(ref);
        if (!src) throw std::logic_error("base schedule is missing " + to_string(ref));
        if (m == 1) {
          candidates = single_channel_candidates(ev, work, *src);
        } else {
          candidates = multi_channel_candidates(ev, work, *src, hop_window(work, f, inst, hop), m,
                                                true);
        }
        auto pick = picker(ref, candidates);
        if (!pick) continue;
        if (*pick >= candidates.size()) throw std::out_of_range("picker returned a bad index");
        const Cell dst = candidates[*pick];
        work.swap_cells(*src, dst);
        ev.note_swap(*src, dst);
      }
    }
  }
  return work;
}

Schedule sched_gen(const Schedule& base, const FlowSet& flows, const ConflictList& conflicts,
                   Rng& rng) {
  return sched_gen(base, flows, conflicts, uniform_picker(rng));
}

}  // namespace slotswapper
