#pragma once

#include "slotswapper/model.hpp"

namespace slotswapper {

/// Earliest-deadline-first list scheduling over one hyper-period.
///
/// Slot by slot, every released instance whose previous hop sits in an
/// earlier slot offers its next hop. Offers are served in (deadline slot,
/// flow id, hop index, instance) order; each goes to the lowest free channel
/// provided its edge conflicts with nothing already placed in the slot.
///
/// There is no backtracking. Before each slot every pending instance must
/// still fit its remaining hops into its window (remaining <= deadline -
/// slot + 1); otherwise Infeasible is thrown. The result is deterministic.
Schedule generate_base(const NetworkGraph& graph, const FlowSet& flows, int channel_count,
                       const ConflictList& conflicts);

}  // namespace slotswapper
