#include "slotswapper/feasibility.hpp"

#include <set>
#include <sstream>

#include "slotswapper/errors.hpp"

namespace slotswapper {

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::TransmissionConflict: return "TransmissionConflict";
    case ViolationKind::ChannelCollision: return "ChannelCollision";
    case ViolationKind::DeadlineMiss: return "DeadlineMiss";
    case ViolationKind::HopOrderViolation: return "HopOrderViolation";
    case ViolationKind::ReleaseViolation: return "ReleaseViolation";
    case ViolationKind::MissingHop: return "MissingHop";
    case ViolationKind::RouteMismatch: return "RouteMismatch";
  }
  return "Unknown";
}

std::string to_string(const ViolationReport& r) {
  std::ostringstream os;
  os << to_string(r.kind) << " slot=" << r.slot;
  if (r.channel > 0) os << " ch=" << r.channel;
  os << " " << to_string(r.hop);
  if (r.other) os << " vs " << to_string(*r.other);
  if (!r.details.empty()) os << ": " << r.details;
  return os.str();
}

std::vector<ViolationReport> check_no_conflict(const Schedule& schedule,
                                               const ConflictList& conflicts) {
  std::vector<ViolationReport> out;
  const int m = schedule.channel_count();
  for (int s = 1; s <= schedule.hyper_period(); ++s) {
    for (int a = 1; a <= m; ++a) {
      const auto& ta = schedule.at({s, a});
      if (!ta) continue;
      for (int b = a + 1; b <= m; ++b) {
        const auto& tb = schedule.at({s, b});
        if (!tb || !conflicts.conflicting(ta->edge, tb->edge)) continue;
        out.push_back({ViolationKind::TransmissionConflict, s, a, ta->ref(), tb->ref(),
                       to_string(ta->edge) + " conflicts with " + to_string(tb->edge) +
                           " on ch" + std::to_string(b)});
      }
    }
  }
  return out;
}

std::vector<ViolationReport> check_no_collision(const Schedule&) { return {}; }

std::vector<ViolationReport> check_no_collision(const ScheduleRows& rows) {
  std::vector<ViolationReport> out;
  std::map<Cell, HopRef> seen;
  for (const auto& row : rows.rows) {
    if (!row.transmission) continue;
    auto [it, fresh] = seen.emplace(row.cell, row.transmission->ref());
    if (!fresh) {
      out.push_back({ViolationKind::ChannelCollision, row.cell.slot, row.cell.channel,
                     row.transmission->ref(), it->second, "cell already occupied"});
    }
  }
  return out;
}

std::vector<ViolationReport> check_deadlines(const Schedule& schedule, const FlowSet& flows) {
  std::vector<ViolationReport> out;
  for (const Flow& f : flows.flows()) {
    for (int j = 1; j <= flows.instance_count(f); ++j) {
      const int release = release_slot(f, j);
      const int deadline = deadline_slot(f, j);
      for (int k = 1; k <= f.hop_count(); ++k) {
        const HopRef ref{f.id, j, k};
        auto cell = schedule.locate(ref);
        if (!cell) {
          out.push_back({ViolationKind::MissingHop, 0, 0, ref, std::nullopt, "hop not scheduled"});
          continue;
        }
        if (cell->slot < release) {
          out.push_back({ViolationKind::ReleaseViolation, cell->slot, cell->channel, ref,
                         std::nullopt, "before release slot " + std::to_string(release)});
        } else if (cell->slot > deadline) {
          out.push_back({ViolationKind::DeadlineMiss, cell->slot, cell->channel, ref, std::nullopt,
                         "after deadline slot " + std::to_string(deadline)});
        }
      }
    }
  }
  return out;
}

std::vector<ViolationReport> check_flow_order(const Schedule& schedule, const FlowSet& flows) {
  std::vector<ViolationReport> out;
  for (const Flow& f : flows.flows()) {
    for (int j = 1; j <= flows.instance_count(f); ++j) {
      for (int k = 2; k <= f.hop_count(); ++k) {
        auto prev = schedule.locate({f.id, j, k - 1});
        auto cur = schedule.locate({f.id, j, k});
        if (!prev || !cur || cur->slot > prev->slot) continue;
        out.push_back({ViolationKind::HopOrderViolation, cur->slot, cur->channel, {f.id, j, k},
                       HopRef{f.id, j, k - 1},
                       "hop scheduled at or before its predecessor (slot " +
                           std::to_string(prev->slot) + ")"});
      }
    }
  }
  return out;
}

std::vector<ViolationReport> check_routes(const Schedule& schedule, const FlowSet& flows) {
  std::vector<ViolationReport> out;
  for (int s = 1; s <= schedule.hyper_period(); ++s) {
    for (int ch = 1; ch <= schedule.channel_count(); ++ch) {
      const auto& t = schedule.at({s, ch});
      if (!t) continue;
      const Flow* f = flows.find(t->flow_id);
      std::string problem;
      if (!f) {
        problem = "unknown flow";
      } else if (t->instance < 1 || t->instance > flows.instance_count(*f)) {
        problem = "instance outside the hyper-period";
      } else if (t->hop < 1 || t->hop > f->hop_count()) {
        problem = "hop index outside the route";
      } else if (f->route[static_cast<std::size_t>(t->hop - 1)] != t->edge) {
        problem = "edge " + to_string(t->edge) + " is not route hop " + std::to_string(t->hop);
      }
      if (!problem.empty()) {
        out.push_back({ViolationKind::RouteMismatch, s, ch, t->ref(), std::nullopt, problem});
      }
    }
  }
  return out;
}

std::vector<ViolationReport> validate(const Schedule& schedule, const FlowSet& flows,
                                      const ConflictList& conflicts) {
  std::vector<ViolationReport> out = check_no_conflict(schedule, conflicts);
  auto append = [&out](std::vector<ViolationReport> more) {
    out.insert(out.end(), std::make_move_iterator(more.begin()),
               std::make_move_iterator(more.end()));
  };
  append(check_no_collision(schedule));
  append(check_deadlines(schedule, flows));
  append(check_flow_order(schedule, flows));
  append(check_routes(schedule, flows));
  return out;
}

Schedule to_schedule(const ScheduleRows& rows) {
  Schedule s(rows.hyper_period, rows.channel_count);
  for (const auto& row : rows.rows) {
    if (!row.transmission || !s.contains(row.cell) || !s.idle(row.cell)) continue;
    if (s.locate(row.transmission->ref())) continue;
    s.place(row.cell, *row.transmission);
  }
  return s;
}

ScheduleRows to_rows(const Schedule& schedule) {
  ScheduleRows out{schedule.hyper_period(), schedule.channel_count(), {}};
  out.rows.reserve(static_cast<std::size_t>(schedule.hyper_period() * schedule.channel_count()));
  for (int s = 1; s <= schedule.hyper_period(); ++s) {
    for (int ch = 1; ch <= schedule.channel_count(); ++ch) {
      out.rows.push_back({{s, ch}, schedule.at({s, ch})});
    }
  }
  return out;
}

}  // namespace slotswapper
