#pragma once

// Randomized schedule generation: starting from a feasible base schedule,
// visit every hop of every completed instance and swap it with a uniformly
// chosen eligible (slot, channel) cell, keeping the schedule feasible.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "slotswapper/model.hpp"
#include "slotswapper/random.hpp"

namespace slotswapper {

using SwapCandidate = Cell;

/// Slots a hop may move to without overtaking its neighbours.
struct HopWindow {
  int lower = 0;
  int upper = 0;

  bool contains(int slot) const { return slot >= lower && slot <= upper; }
  auto operator<=>(const HopWindow&) const = default;
};

/// lower = release slot for the first hop, else (slot of previous hop) + 1;
/// upper = deadline slot for the last hop, else (slot of next hop) - 1.
/// Uses live positions. Throws InvalidParameter if a neighbouring hop is not
/// placed.
HopWindow hop_window(const Schedule& schedule, const Flow& flow, int instance, int hop);

// Swap predicates. `src` must hold a transmission; `dst` may be idle. A swap
// moves src's transmission to dst and dst's occupant (if any) to src. Each
// predicate returns true when the swap is acceptable.

/// The moving transmission and the displaced occupant must not conflict with
/// each other (same-slot channel swaps always pass).
bool tr_conf(const Schedule& schedule, Cell src, Cell dst, const ConflictList& conflicts);
/// Both moving transmissions stay inside their instances' [release, deadline].
bool dead_pr(const Schedule& schedule, Cell src, Cell dst, const FlowSet& flows);
/// Both affected instances keep strictly increasing hop slots.
bool flow_pr(const Schedule& schedule, Cell src, Cell dst, const FlowSet& flows);
/// Neither moving transmission conflicts with the transmissions that stay in
/// its destination slot.
bool slot_conflict_free(const Schedule& schedule, Cell src, Cell dst,
                        const ConflictList& conflicts);

/// Cells in `window` x [1, m] other than src that pass tr_conf, dead_pr and
/// flow_pr, in (slot, channel) order.
std::vector<SwapCandidate> eligible_list(const Schedule& schedule, Cell src, HopWindow window,
                                         int channel_count, const ConflictList& conflicts,
                                         const FlowSet& flows);

/// The cells sched_gen draws from for the hop at `src`.
///
/// Multi-channel: eligible_list over the live hop window, restricted to cells
/// that also pass slot_conflict_free.
/// Single channel: slots of the instance window whose occupant is idle or
/// belongs to another flow, restricted by dead_pr and flow_pr.
std::vector<SwapCandidate> swap_candidates(const Schedule& schedule, Cell src,
                                           const FlowSet& flows, const ConflictList& conflicts);

/// Chooses one candidate for `hop`, or nullopt to leave it in place.
using SwapPicker =
    std::function<std::optional<std::size_t>(const HopRef& hop, std::span<const SwapCandidate>)>;

/// Uniform pick over the candidates; nullopt only when there are none.
SwapPicker uniform_picker(Rng& rng);

/// One randomization pass over a copy of `base`, which must be feasible.
/// Instances are visited at their period boundaries (tick = k * period),
/// flows in id order, hops in route order.
Schedule sched_gen(const Schedule& base, const FlowSet& flows, const ConflictList& conflicts,
                   const SwapPicker& picker);
Schedule sched_gen(const Schedule& base, const FlowSet& flows, const ConflictList& conflicts,
                   Rng& rng);

}  // namespace slotswapper
