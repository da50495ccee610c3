#include "slotswapper/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "slotswapper/errors.hpp"

namespace slotswapper {

namespace {

std::uint64_t edge_key(const Edge& e) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.sender)) << 32) |
         static_cast<std::uint32_t>(e.receiver);
}

}  // namespace

std::string to_string(const Edge& e) {
  return std::to_string(e.sender) + "->" + std::to_string(e.receiver);
}

std::string to_string(const Cell& c) {
  return "(" + std::to_string(c.slot) + "," + std::to_string(c.channel) + ")";
}

std::string to_string(const HopRef& h) {
  return "F" + std::to_string(h.flow_id) + "/inst" + std::to_string(h.instance) + "/hop" +
         std::to_string(h.hop);
}

// ---------------------------------------------------------------------------
// NetworkGraph

NetworkGraph::NetworkGraph(int node_count, std::vector<Edge> edges,
                           std::vector<NodeId> access_points)
    : node_count_(node_count), edges_(std::move(edges)), access_points_(std::move(access_points)) {
  if (node_count_ < 1) throw InvalidParameter("graph needs at least one node");
  if (access_points_.empty()) throw InvalidParameter("graph needs at least one access point");
  for (NodeId ap : access_points_) {
    if (ap < 0 || ap >= node_count_) {
      throw InvalidParameter("access point " + std::to_string(ap) + " out of range");
    }
  }
  successors_.resize(static_cast<std::size_t>(node_count_));
  index_.reserve(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.sender < 0 || e.sender >= node_count_ || e.receiver < 0 || e.receiver >= node_count_) {
      throw InvalidParameter("edge " + to_string(e) + " references an unknown node");
    }
    if (e.sender == e.receiver) throw InvalidParameter("self loop " + to_string(e));
    if (!index_.emplace(edge_key(e), i).second) {
      throw InvalidParameter("duplicate edge " + to_string(e));
    }
    successors_[static_cast<std::size_t>(e.sender)].push_back(e.receiver);
  }
}

std::optional<std::size_t> NetworkGraph::edge_index(const Edge& e) const {
  auto it = index_.find(edge_key(e));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<NodeId>& NetworkGraph::successors(NodeId node) const {
  return successors_.at(static_cast<std::size_t>(node));
}

std::vector<NodeId> NetworkGraph::neighbors(NodeId node) const {
  std::set<NodeId> out;
  for (const Edge& e : edges_) {
    if (e.sender == node) out.insert(e.receiver);
    if (e.receiver == node) out.insert(e.sender);
  }
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// ConflictList

ConflictList::ConflictList(const NetworkGraph& graph)
    : edges_(graph.edges().begin(), graph.edges().end()) {
  const std::size_t n = edges_.size();
  lists_.resize(n);
  index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) index_.emplace(edge_key(edges_[i]), i);

  // Bucket edges by endpoint so only pairs that can conflict are visited.
  std::vector<std::vector<std::size_t>> incident(static_cast<std::size_t>(graph.node_count()));
  for (std::size_t i = 0; i < n; ++i) {
    incident[static_cast<std::size_t>(edges_[i].sender)].push_back(i);
    incident[static_cast<std::size_t>(edges_[i].receiver)].push_back(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& list = lists_[i];
    for (NodeId endpoint : {edges_[i].sender, edges_[i].receiver}) {
      for (std::size_t j : incident[static_cast<std::size_t>(endpoint)]) {
        if (j != i) list.push_back(j);
      }
    }
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  const std::size_t words = (n * n + 63) / 64;
  bits_.assign(words, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : lists_[i]) {
      const std::size_t bit = i * n + j;
      bits_[bit / 64] |= std::uint64_t{1} << (bit % 64);
    }
  }
}

std::optional<std::size_t> ConflictList::index_of(const Edge& e) const {
  auto it = index_.find(edge_key(e));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool ConflictList::conflicting(std::size_t i, std::size_t j) const {
  if (i == j) return true;
  const std::size_t bit = i * edges_.size() + j;
  return (bits_[bit / 64] >> (bit % 64)) & 1U;
}

bool ConflictList::conflicting(const Edge& a, const Edge& b) const {
  auto i = index_of(a);
  auto j = index_of(b);
  if (i && j) return conflicting(*i, *j);
  return shares_endpoint(a, b);
}

ConflictList build_conflict_list(const NetworkGraph& graph) { return ConflictList(graph); }

int physical_channel(std::uint64_t asn, int logical_channel, int channel_count) {
  if (channel_count < 1) throw InvalidParameter("channel count must be >= 1");
  if (logical_channel < 0 || logical_channel >= channel_count) {
    throw InvalidParameter("logical channel out of range");
  }
  const auto m = static_cast<std::uint64_t>(channel_count);
  return static_cast<int>((asn % m + static_cast<std::uint64_t>(logical_channel)) % m);
}

// ---------------------------------------------------------------------------
// Flows

void validate_flow(const Flow& flow, const NetworkGraph* graph) {
  const std::string who = "flow " + std::to_string(flow.id) + ": ";
  if (flow.period < 1) throw InvalidParameter(who + "period must be positive");
  if (flow.deadline < 1) throw InvalidParameter(who + "deadline must be positive");
  if (flow.deadline > flow.period) throw InvalidParameter(who + "deadline exceeds period");
  if (flow.route.empty()) throw InvalidParameter(who + "empty route");
  if (flow.hop_count() > flow.deadline) {
    throw InvalidParameter(who + "more hops than deadline slots");
  }
  if (flow.route.front().sender != flow.source) {
    throw InvalidParameter(who + "route does not start at the source");
  }
  if (flow.route.back().receiver != flow.destination) {
    throw InvalidParameter(who + "route does not end at the destination");
  }
  for (std::size_t k = 0; k + 1 < flow.route.size(); ++k) {
    if (flow.route[k].receiver != flow.route[k + 1].sender) {
      throw InvalidParameter(who + "hops " + std::to_string(k + 1) + " and " +
                             std::to_string(k + 2) + " do not chain");
    }
  }
  if (graph) {
    for (const Edge& e : flow.route) {
      if (!graph->has_edge(e)) throw InvalidParameter(who + "edge " + to_string(e) + " not in graph");
    }
  }
}

int release_slot(const Flow& flow, int instance) { return (instance - 1) * flow.period + 1; }

int deadline_slot(const Flow& flow, int instance) {
  return (instance - 1) * flow.period + flow.deadline;
}

int hyper_period(std::span<const Flow> flows) {
  if (flows.empty()) throw InvalidParameter("hyper-period of an empty flow set");
  int hp = 1;
  for (const Flow& f : flows) {
    if (f.period < 1) throw InvalidParameter("non-positive period");
    hp = std::lcm(hp, f.period);
  }
  return hp;
}

FlowSet::FlowSet(std::vector<Flow> flows, const NetworkGraph* graph) : flows_(std::move(flows)) {
  if (flows_.empty()) throw InvalidParameter("flow set is empty");
  std::sort(flows_.begin(), flows_.end(), [](const Flow& a, const Flow& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    validate_flow(flows_[i], graph);
    if (!by_id_.emplace(flows_[i].id, i).second) {
      throw InvalidParameter("duplicate flow id " + std::to_string(flows_[i].id));
    }
  }
  hyper_period_ = slotswapper::hyper_period(flows_);
}

const Flow& FlowSet::flow(int id) const {
  const Flow* f = find(id);
  if (!f) throw InvalidParameter("unknown flow id " + std::to_string(id));
  return *f;
}

const Flow* FlowSet::find(int id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &flows_[it->second];
}

// ---------------------------------------------------------------------------
// Schedule

Schedule::Schedule(int hyper_period, int channel_count)
    : hyper_period_(hyper_period), channel_count_(channel_count) {
  if (hyper_period < 1) throw InvalidParameter("hyper-period must be >= 1");
  if (channel_count < 1 || channel_count > kMaxChannels) {
    throw InvalidParameter("channel count must be in [1, 16]");
  }
  grid_.resize(static_cast<std::size_t>(hyper_period) * static_cast<std::size_t>(channel_count));
}

void Schedule::require(const Cell& c) const {
  if (!contains(c)) throw InvalidParameter("cell " + to_string(c) + " outside the schedule");
}

const std::optional<Transmission>& Schedule::at(const Cell& c) const {
  require(c);
  return grid_[offset(c)];
}

std::optional<Edge> Schedule::edge_at(const Cell& c) const {
  const auto& t = at(c);
  if (!t) return std::nullopt;
  return t->edge;
}

void Schedule::place(const Cell& c, const Transmission& t) {
  require(c);
  auto& slot = grid_[offset(c)];
  if (slot) throw InvalidParameter("cell " + to_string(c) + " already occupied");
  if (!hop_list_.emplace(t.ref(), c).second) {
    throw InvalidParameter(to_string(t.ref()) + " already placed");
  }
  slot = t;
}

std::optional<Transmission> Schedule::remove(const Cell& c) {
  require(c);
  auto& slot = grid_[offset(c)];
  std::optional<Transmission> out;
  out.swap(slot);
  if (out) hop_list_.erase(out->ref());
  return out;
}

void Schedule::swap_cells(const Cell& a, const Cell& b) {
  require(a);
  require(b);
  if (a == b) return;
  auto& x = grid_[offset(a)];
  auto& y = grid_[offset(b)];
  x.swap(y);
  if (x) hop_list_[x->ref()] = a;
  if (y) hop_list_[y->ref()] = b;
}

std::optional<Cell> Schedule::locate(const HopRef& hop) const {
  auto it = hop_list_.find(hop);
  if (it == hop_list_.end()) return std::nullopt;
  return it->second;
}

std::map<Cell, Edge> Schedule::edge_list() const {
  std::map<Cell, Edge> out;
  for (int s = 1; s <= hyper_period_; ++s) {
    for (int ch = 1; ch <= channel_count_; ++ch) {
      const auto& t = grid_[offset({s, ch})];
      if (t) out.emplace(Cell{s, ch}, t->edge);
    }
  }
  return out;
}

bool Schedule::consistent() const {
  std::unordered_map<HopRef, Cell, HopRefHash> rebuilt;
  for (int s = 1; s <= hyper_period_; ++s) {
    for (int ch = 1; ch <= channel_count_; ++ch) {
      const auto& t = grid_[offset({s, ch})];
      if (t && !rebuilt.emplace(t->ref(), Cell{s, ch}).second) return false;
    }
  }
  return rebuilt == hop_list_;
}

bool Schedule::operator==(const Schedule& other) const {
  return hyper_period_ == other.hyper_period_ && channel_count_ == other.channel_count_ &&
         grid_ == other.grid_;
}

}  // namespace slotswapper
