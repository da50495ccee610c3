#pragma once

// File formats: topology and flow JSON, schedule CSV/JSON, and pool
// directories (schedule files plus manifest.json).
//
// Topology: { "nodes": N, "access_points": [ids], "edges": [[u, v], ...] }
// Flows:    { "flows": [{ "id", "source", "destination", "period", "deadline",
//                         "route": [[u, v], ...] }] }
// Schedule CSV: header "slot,channel,flow_id,instance,hop,sender,receiver",
//   one row per cell; idle cells carry "idle" in flow_id and empty fields.
// Schedule JSON: { "hyper_period", "channels", "cells": [{ "slot", "channel",
//   "flow_id", "instance", "hop", "sender", "receiver" } | { "slot",
//   "channel", "idle": true }] }

#include <cstdint>
#include <filesystem>
#include <string>

#include "slotswapper/feasibility.hpp"
#include "slotswapper/model.hpp"
#include "slotswapper/protocol.hpp"

namespace slotswapper::io {

NetworkGraph read_topology(const std::filesystem::path& path);
void write_topology(const std::filesystem::path& path, const NetworkGraph& graph);
NetworkGraph parse_topology(const std::string& json_text);
std::string format_topology(const NetworkGraph& graph);

FlowSet read_flows(const std::filesystem::path& path, const NetworkGraph* graph = nullptr);
void write_flows(const std::filesystem::path& path, const FlowSet& flows);
FlowSet parse_flows(const std::string& json_text, const NetworkGraph* graph = nullptr);
std::string format_flows(const FlowSet& flows);

/// Format chosen by extension: ".json" is JSON, anything else CSV.
ScheduleRows read_schedule_rows(const std::filesystem::path& path);
Schedule read_schedule(const std::filesystem::path& path);
void write_schedule(const std::filesystem::path& path, const Schedule& schedule);

ScheduleRows parse_schedule_csv(const std::string& text);
std::string format_schedule_csv(const Schedule& schedule);
ScheduleRows parse_schedule_json(const std::string& text);
std::string format_schedule_json(const Schedule& schedule);

/// Lower-case hex SHA-256 of `data`.
std::string sha256_hex(const std::string& data);

/// Writes schedule_NNNN.csv files (index 0 is the base) and manifest.json
/// with the seed, K, dimensions, and each file's SHA-256.
void write_pool(const std::filesystem::path& dir, const SchedulePool& pool);
/// Reads a pool directory, checking every hash. Throws FormatError on a
/// mismatch or missing file.
SchedulePool read_pool(const std::filesystem::path& dir);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace slotswapper::io
