#pragma once

// Ground-truth feasibility checks for a hyper-period schedule: no conflicting
// transmissions share a slot, no two transmissions share a cell, every hop of
// every instance lies inside [release, deadline], and hops keep their order.

#include <optional>
#include <string>
#include <vector>

#include "slotswapper/model.hpp"

namespace slotswapper {

enum class ViolationKind {
  TransmissionConflict,
  ChannelCollision,
  DeadlineMiss,
  HopOrderViolation,
  ReleaseViolation,
  MissingHop,
  // A transmission that names no hop of the flow set, or whose edge differs
  // from the route edge of the hop it claims to be.
  RouteMismatch,
};

const char* to_string(ViolationKind kind);

struct ViolationReport {
  ViolationKind kind{};
  int slot = 0;
  int channel = 0;  // 0 when the report is not tied to one channel
  HopRef hop;
  std::optional<HopRef> other;
  std::string details;
};

std::string to_string(const ViolationReport& r);

/// Row-level schedule as read from a file. Unlike Schedule, it can hold
/// several transmissions in one cell.
struct ScheduleRow {
  Cell cell;
  std::optional<Transmission> transmission;
};

struct ScheduleRows {
  int hyper_period = 0;
  int channel_count = 0;
  std::vector<ScheduleRow> rows;
};

std::vector<ViolationReport> check_no_conflict(const Schedule& schedule,
                                               const ConflictList& conflicts);
/// Always empty for a grid-backed schedule.
std::vector<ViolationReport> check_no_collision(const Schedule& schedule);
/// One report per extra transmission found in an already-occupied cell.
std::vector<ViolationReport> check_no_collision(const ScheduleRows& rows);
/// Window check per hop (ReleaseViolation, DeadlineMiss) plus MissingHop for
/// unscheduled hops.
std::vector<ViolationReport> check_deadlines(const Schedule& schedule, const FlowSet& flows);
std::vector<ViolationReport> check_flow_order(const Schedule& schedule, const FlowSet& flows);
std::vector<ViolationReport> check_routes(const Schedule& schedule, const FlowSet& flows);

/// All checks concatenated. Empty iff the schedule is feasible.
std::vector<ViolationReport> validate(const Schedule& schedule, const FlowSet& flows,
                                      const ConflictList& conflicts);

inline bool feasible(const Schedule& schedule, const FlowSet& flows,
                     const ConflictList& conflicts) {
  return validate(schedule, flows, conflicts).empty();
}

/// Builds a grid from rows, keeping the first transmission seen per cell.
Schedule to_schedule(const ScheduleRows& rows);
ScheduleRows to_rows(const Schedule& schedule);

}  // namespace slotswapper
