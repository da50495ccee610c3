#include "slotswapper/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "slotswapper/errors.hpp"

namespace slotswapper::io {

using nlohmann::json;

namespace {

Edge edge_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw FormatError("edge must be a [sender, receiver] pair");
  return {j.at(0).get<NodeId>(), j.at(1).get<NodeId>()};
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

template <typename Fn>
auto wrap_json_errors(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed document: ") + e.what());
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("bad " + what + " value '" + s + "'");
  }
}

ScheduleRows finish_rows(std::vector<ScheduleRow> rows, int hp, int m) {
  for (const auto& r : rows) {
    hp = std::max(hp, r.cell.slot);
    m = std::max(m, r.cell.channel);
    if (r.cell.slot < 1 || r.cell.channel < 1) throw FormatError("slots and channels start at 1");
  }
  if (hp < 1 || m < 1) throw FormatError("schedule has no cells");
  return {hp, m, std::move(rows)};
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

// ---------------------------------------------------------------------------
// Topology

NetworkGraph parse_topology(const std::string& json_text) {
  const json doc = parse_json(json_text);
  return wrap_json_errors([&] {
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) edges.push_back(edge_from_json(e));
    try {
      return NetworkGraph(doc.at("nodes").get<int>(), std::move(edges),
                          doc.at("access_points").get<std::vector<NodeId>>());
    } catch (const InvalidParameter& e) {
      throw FormatError(std::string("invalid topology: ") + e.what());
    }
  });
}

std::string format_topology(const NetworkGraph& graph) {
  json doc;
  doc["nodes"] = graph.node_count();
  doc["access_points"] = std::vector<NodeId>(graph.access_points().begin(), graph.access_points().end());
  json edges = json::array();
  for (const Edge& e : graph.edges()) edges.push_back({e.sender, e.receiver});
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

NetworkGraph read_topology(const std::filesystem::path& path) { return parse_topology(read_text(path)); }

void write_topology(const std::filesystem::path& path, const NetworkGraph& graph) {
  write_text(path, format_topology(graph));
}

// ---------------------------------------------------------------------------
// Flows

FlowSet parse_flows(const std::string& json_text, const NetworkGraph* graph) {
  const json doc = parse_json(json_text);
  return wrap_json_errors([&] {
    std::vector<Flow> flows;
    for (const auto& f : doc.at("flows")) {
      Flow flow;
      flow.id = f.at("id").get<int>();
      flow.source = f.at("source").get<NodeId>();
      flow.destination = f.at("destination").get<NodeId>();
      flow.period = f.at("period").get<int>();
      flow.deadline = f.at("deadline").get<int>();
      for (const auto& e : f.at("route")) flow.route.push_back(edge_from_json(e));
      flows.push_back(std::move(flow));
    }
    try {
      return FlowSet(std::move(flows), graph);
    } catch (const InvalidParameter& e) {
      throw FormatError(std::string("invalid flow set: ") + e.what());
    }
  });
}

std::string format_flows(const FlowSet& flows) {
  json arr = json::array();
  for (const Flow& f : flows.flows()) {
    json route = json::array();
    for (const Edge& e : f.route) route.push_back({e.sender, e.receiver});
    arr.push_back({{"id", f.id},
                   {"source", f.source},
                   {"destination", f.destination},
                   {"period", f.period},
                   {"deadline", f.deadline},
                   {"route", std::move(route)}});
  }
  json doc;
  doc["flows"] = std::move(arr);
  return doc.dump(2) + "\n";
}

FlowSet read_flows(const std::filesystem::path& path, const NetworkGraph* graph) {
  return parse_flows(read_text(path), graph);
}

void write_flows(const std::filesystem::path& path, const FlowSet& flows) {
  write_text(path, format_flows(flows));
}

// ---------------------------------------------------------------------------
// Schedules

ScheduleRows parse_schedule_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<ScheduleRow> rows;
  bool header = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("slot", 0) == 0) continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 7) {
      throw FormatError("line " + std::to_string(line_no) + ": expected 7 fields");
    }
    ScheduleRow row{{to_int(f[0], "slot"), to_int(f[1], "channel")}, std::nullopt};
    if (f[2] != "idle") {
      row.transmission = Transmission{to_int(f[2], "flow_id"), to_int(f[3], "instance"),
                                      to_int(f[4], "hop"),
                                      {to_int(f[5], "sender"), to_int(f[6], "receiver")}};
    }
    rows.push_back(std::move(row));
  }
  return finish_rows(std::move(rows), 0, 0);
}

std::string format_schedule_csv(const Schedule& schedule) {
  std::ostringstream os;
  os << "slot,channel,flow_id,instance,hop,sender,receiver\n";
  for (int s = 1; s <= schedule.hyper_period(); ++s) {
    for (int ch = 1; ch <= schedule.channel_count(); ++ch) {
      const auto& t = schedule.at({s, ch});
      os << s << ',' << ch << ',';
      if (t) {
        os << t->flow_id << ',' << t->instance << ',' << t->hop << ',' << t->edge.sender << ','
           << t->edge.receiver << '\n';
      } else {
        os << "idle,,,,\n";
      }
    }
  }
  return os.str();
}

ScheduleRows parse_schedule_json(const std::string& text) {
  const json doc = parse_json(text);
  return wrap_json_errors([&] {
    std::vector<ScheduleRow> rows;
    for (const auto& c : doc.at("cells")) {
      ScheduleRow row{{c.at("slot").get<int>(), c.at("channel").get<int>()}, std::nullopt};
      if (!c.value("idle", false)) {
        row.transmission = Transmission{c.at("flow_id").get<int>(), c.at("instance").get<int>(),
                                        c.at("hop").get<int>(),
                                        {c.at("sender").get<NodeId>(), c.at("receiver").get<NodeId>()}};
      }
      rows.push_back(std::move(row));
    }
    return finish_rows(std::move(rows), doc.value("hyper_period", 0), doc.value("channels", 0));
  });
}

std::string format_schedule_json(const Schedule& schedule) {
  json cells = json::array();
  for (int s = 1; s <= schedule.hyper_period(); ++s) {
    for (int ch = 1; ch <= schedule.channel_count(); ++ch) {
      const auto& t = schedule.at({s, ch});
      if (t) {
        cells.push_back({{"slot", s},
                         {"channel", ch},
                         {"flow_id", t->flow_id},
                         {"instance", t->instance},
                         {"hop", t->hop},
                         {"sender", t->edge.sender},
                         {"receiver", t->edge.receiver}});
      } else {
        cells.push_back({{"slot", s}, {"channel", ch}, {"idle", true}});
      }
    }
  }
  json doc;
  doc["hyper_period"] = schedule.hyper_period();
  doc["channels"] = schedule.channel_count();
  doc["cells"] = std::move(cells);
  return doc.dump(1) + "\n";
}

ScheduleRows read_schedule_rows(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  if (path.extension() == ".json") return parse_schedule_json(text);
  return parse_schedule_csv(text);
}

Schedule read_schedule(const std::filesystem::path& path) {
  return to_schedule(read_schedule_rows(path));
}

void write_schedule(const std::filesystem::path& path, const Schedule& schedule) {
  write_text(path, path.extension() == ".json" ? format_schedule_json(schedule)
                                               : format_schedule_csv(schedule));
}

// ---------------------------------------------------------------------------
// Pools

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < length; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
  return os.str();
}

namespace {

std::string pool_file_name(std::size_t index) {
  char name[32];
  std::snprintf(name, sizeof name, "schedule_%04zu.csv", index);
  return name;
}

}  // namespace

void write_pool(const std::filesystem::path& dir, const SchedulePool& pool) {
  if (pool.size() == 0) throw InvalidParameter("cannot write an empty pool");
  std::filesystem::create_directories(dir);
  json files = json::array();
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const std::string text = format_schedule_csv(pool.schedules[i]);
    const std::string name = pool_file_name(i);
    write_text(dir / name, text);
    files.push_back({{"file", name}, {"sha256", sha256_hex(text)}});
  }
  json manifest;
  manifest["seed"] = pool.seed;
  manifest["k"] = pool.size() - 1;
  manifest["hyper_period"] = pool.base().hyper_period();
  manifest["channels"] = pool.base().channel_count();
  manifest["schedules"] = std::move(files);
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

SchedulePool read_pool(const std::filesystem::path& dir) {
  const json manifest = parse_json(read_text(dir / "manifest.json"));
  return wrap_json_errors([&] {
    SchedulePool pool;
    pool.seed = manifest.at("seed").get<std::uint64_t>();
    for (const auto& entry : manifest.at("schedules")) {
      const std::string name = entry.at("file").get<std::string>();
      const std::string text = read_text(dir / name);
      if (sha256_hex(text) != entry.at("sha256").get<std::string>()) {
        throw FormatError("hash mismatch for " + name);
      }
      pool.schedules.push_back(to_schedule(parse_schedule_csv(text)));
    }
    if (pool.schedules.empty()) throw FormatError("pool manifest lists no schedules");
    return pool;
  });
}

}  // namespace slotswapper::io
