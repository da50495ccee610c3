#pragma once

// Domain types shared by every module: network graph, conflict list, flows,
// and the hyper-period schedule grid.
//
// Slots and channels are 1-indexed throughout: slot in [1, hp], channel in
// [1, m]. Instance indices start at 1.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace slotswapper {

using NodeId = int;

/// Directed link sender -> receiver.
struct Edge {
  NodeId sender = 0;
  NodeId receiver = 0;

  auto operator<=>(const Edge&) const = default;
};

std::string to_string(const Edge& e);

/// True when the two transmissions share any endpoint. Identical edges
/// trivially share both.
constexpr bool shares_endpoint(const Edge& a, const Edge& b) {
  return a.sender == b.sender || a.receiver == b.sender || a.sender == b.receiver ||
         a.receiver == b.receiver;
}

class NetworkGraph {
 public:
  /// Throws InvalidParameter on out-of-range ids, self loops, duplicate
  /// edges, or an empty access-point set.
  NetworkGraph(int node_count, std::vector<Edge> edges, std::vector<NodeId> access_points);

  int node_count() const { return node_count_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const NodeId> access_points() const { return access_points_; }
  /// The primary access point (first listed).
  NodeId access_point() const { return access_points_.front(); }

  std::optional<std::size_t> edge_index(const Edge& e) const;
  bool has_edge(const Edge& e) const { return edge_index(e).has_value(); }

  /// Receivers of edges leaving `node`, in edge-list order.
  const std::vector<NodeId>& successors(NodeId node) const;
  /// Distinct nodes linked to `node` in either direction.
  std::vector<NodeId> neighbors(NodeId node) const;

 private:
  int node_count_;
  std::vector<Edge> edges_;
  std::vector<NodeId> access_points_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::vector<NodeId>> successors_;
};

/// Per-edge list of conflicting edges: j is listed for i iff edges i and j
/// (i != j) share an endpoint. Symmetric and irreflexive.
class ConflictList {
 public:
  ConflictList() = default;
  explicit ConflictList(const NetworkGraph& graph);

  std::size_t edge_count() const { return edges_.size(); }
  std::span<const std::size_t> conflicts(std::size_t edge) const { return lists_.at(edge); }
  std::optional<std::size_t> index_of(const Edge& e) const;

  /// Two transmissions on edges i and j may not share a slot. An edge always
  /// conflicts with itself even though it is not in its own list.
  bool conflicting(std::size_t i, std::size_t j) const;
  /// Edge-valued form. Edges unknown to the graph fall back to the endpoint
  /// predicate.
  bool conflicting(const Edge& a, const Edge& b) const;

 private:
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::vector<std::size_t>> lists_;
  std::vector<std::uint64_t> bits_;  // edge_count^2 bit matrix, row-major
};

ConflictList build_conflict_list(const NetworkGraph& graph);

/// Logical-to-physical channel mapping used for channel hopping. All
/// arguments are 0-based here, matching the absolute slot counter.
int physical_channel(std::uint64_t asn, int logical_channel, int channel_count);

struct Flow {
  int id = 0;
  NodeId source = 0;
  NodeId destination = 0;
  int period = 0;
  int deadline = 0;
  std::vector<Edge> route;

  int hop_count() const { return static_cast<int>(route.size()); }
};

/// Throws InvalidParameter when the flow breaks a structural invariant
/// (route chaining, deadline <= period, hops <= deadline). When a graph is
/// given, every route edge must exist in it.
void validate_flow(const Flow& flow, const NetworkGraph* graph = nullptr);

/// First schedulable slot of instance `instance` (1-based).
int release_slot(const Flow& flow, int instance);
/// Last schedulable slot of instance `instance`.
int deadline_slot(const Flow& flow, int instance);

class FlowSet {
 public:
  FlowSet() = default;
  /// Flows are kept sorted by id. Throws InvalidParameter on duplicate ids,
  /// an empty set, or an invalid flow.
  explicit FlowSet(std::vector<Flow> flows, const NetworkGraph* graph = nullptr);

  std::span<const Flow> flows() const { return flows_; }
  std::size_t size() const { return flows_.size(); }
  int hyper_period() const { return hyper_period_; }
  const Flow& flow(int id) const;
  const Flow* find(int id) const;
  int instance_count(const Flow& f) const { return hyper_period_ / f.period; }

 private:
  std::vector<Flow> flows_;
  std::unordered_map<int, std::size_t> by_id_;
  int hyper_period_ = 0;
};

/// lcm of all periods. Throws InvalidParameter on an empty list.
int hyper_period(std::span<const Flow> flows);

struct Cell {
  int slot = 0;
  int channel = 0;

  auto operator<=>(const Cell&) const = default;
};

std::string to_string(const Cell& c);

/// Identifies one hop of one instance of one flow.
struct HopRef {
  int flow_id = 0;
  int instance = 0;
  int hop = 0;

  auto operator<=>(const HopRef&) const = default;
};

std::string to_string(const HopRef& h);

struct HopRefHash {
  std::size_t operator()(const HopRef& h) const noexcept {
    std::uint64_t x = static_cast<std::uint32_t>(h.flow_id);
    x = x * 0x9E3779B97F4A7C15ULL + static_cast<std::uint32_t>(h.instance);
    x = x * 0x9E3779B97F4A7C15ULL + static_cast<std::uint32_t>(h.hop);
    return static_cast<std::size_t>(x ^ (x >> 29));
  }
};

struct Transmission {
  int flow_id = 0;
  int instance = 0;
  int hop = 0;
  Edge edge;

  HopRef ref() const { return {flow_id, instance, hop}; }
  bool operator==(const Transmission&) const = default;
};

/// hp x m grid of cells, each idle or holding one transmission, with a
/// hop -> cell index kept in sync with the grid.
class Schedule {
 public:
  static constexpr int kMaxChannels = 16;

  /// Throws InvalidParameter unless hyper_period >= 1 and channel_count in [1, 16].
  Schedule(int hyper_period, int channel_count);

  int hyper_period() const { return hyper_period_; }
  int channel_count() const { return channel_count_; }
  bool contains(const Cell& c) const {
    return c.slot >= 1 && c.slot <= hyper_period_ && c.channel >= 1 && c.channel <= channel_count_;
  }

  const std::optional<Transmission>& at(const Cell& c) const;
  bool idle(const Cell& c) const { return !at(c).has_value(); }
  std::optional<Edge> edge_at(const Cell& c) const;

  /// Throws InvalidParameter if the cell is occupied or the hop is already placed.
  void place(const Cell& c, const Transmission& t);
  std::optional<Transmission> remove(const Cell& c);
  /// Exchanges the contents of two cells (either may be idle).
  void swap_cells(const Cell& a, const Cell& b);

  std::optional<Cell> locate(const HopRef& hop) const;
  const std::unordered_map<HopRef, Cell, HopRefHash>& hop_list() const { return hop_list_; }
  /// (slot, channel) -> edge for every occupied cell.
  std::map<Cell, Edge> edge_list() const;
  std::size_t transmission_count() const { return hop_list_.size(); }

  /// Rebuilds the hop index from the grid and compares it with the live one.
  bool consistent() const;

  /// Grid equality.
  bool operator==(const Schedule& other) const;

 private:
  std::size_t offset(const Cell& c) const {
    return static_cast<std::size_t>(c.slot - 1) * static_cast<std::size_t>(channel_count_) +
           static_cast<std::size_t>(c.channel - 1);
  }
  void require(const Cell& c) const;

  int hyper_period_;
  int channel_count_;
  std::vector<std::optional<Transmission>> grid_;
  std::unordered_map<HopRef, Cell, HopRefHash> hop_list_;
};

}  // namespace slotswapper
