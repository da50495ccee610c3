#pragma once

// Evaluation pipeline: random degree-bounded topologies, random flow sets
// routed through the access point, and the sweep that builds pools and
// measures entropy and jamming success per (profile, flows, channels) cell.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "slotswapper/model.hpp"
#include "slotswapper/random.hpp"

namespace slotswapper {

struct DegreeProfile {
  std::string name;  // "A", "B", "C"
  int degree_min = 0;
  int degree_max = 0;
};

/// Graph A: 2-4, Graph B: 3-6, Graph C: 3-8. Accepts "A" or "Graph A".
/// Throws InvalidParameter on an unknown name.
DegreeProfile degree_profile(const std::string& name);

/// Connected graph on `node_count` nodes whose undirected degrees all lie in
/// [degree_min, degree_max]. Every undirected link is emitted as two directed
/// edges. The access point is the highest-degree node, lowest id on ties.
///
/// Built as a degree-capped random spanning tree, then links are added until
/// every node reaches a target degree drawn from the range. Restarts on
/// failure; throws DegreeInfeasible when the bounds cannot be met.
NetworkGraph generate_topology(int node_count, int degree_min, int degree_max, Rng& rng);

/// Shortest route source -> access point -> destination over directed
/// edges. BFS visits successors in ascending id order, so the route is
/// deterministic. `destination` may be the access point itself. Throws
/// RouteInfeasible when a leg is unreachable.
std::vector<Edge> route_via_access_point(const NetworkGraph& graph, NodeId source,
                                         NodeId destination);

/// hp/8, hp/4, hp/2 and hp, skipping non-integral fractions.
std::vector<int> period_choices(int hyper_period);

struct FlowGenOptions {
  double alpha = 0.4;
  int count = 20;
  int min_hops = 2;
  int max_hops = 8;
  std::vector<int> period_choices{128, 256, 512, 1024};
  /// When positive, period draws are repeated until the set's lcm equals it.
  int required_hyper_period = 0;
};

/// round(alpha * node_count) non-AP nodes are drawn and split into disjoint
/// source and destination halves. Each flow picks a pair uniformly among
/// those whose routed hop count lies in [min_hops, max_hops]; deadline =
/// period. Ids run from 1. Throws RouteInfeasible when no pair is admissible.
FlowSet generate_flows(const NetworkGraph& graph, const FlowGenOptions& options, Rng& rng);

struct ExperimentConfig {
  std::vector<std::string> profiles{"A"};
  int nodes = 100;
  std::vector<int> flows{10, 20, 30, 40};
  std::vector<int> channels{1, 2, 3, 4};
  int hyper_period = 1024;
  double alpha = 0.4;
  int pool_size = 1000;
  int instances = 100;
  std::uint64_t seed = 42;
  /// Hyper-periods simulated for the jamming measurement.
  int attack_hyper_periods = 1000;
  /// Worker threads; 0 picks the hardware concurrency.
  int workers = 0;
};

/// Parses the JSON config. "profile" may be a string or an array; missing
/// keys keep their defaults. Throws FormatError on malformed input.
ExperimentConfig parse_experiment_config(const std::string& json_text);

struct ResultRow {
  std::string profile;
  int n_flows = 0;
  int channels = 0;
  int instance = 0;
  double entropy_bits = 0.0;
  double jam_success = 0.0;
  double runtime_ms = 0.0;
  std::string status = "ok";  // "ok", or why the cell was skipped
};

/// Runs every (profile, flow count, channel count, instance) job. Each job
/// draws from streams derived from the master seed, so results do not
/// depend on the worker count. Rows come back sorted by
/// (profile, n_flows, channels, instance).
///
/// Infeasible, DegreeInfeasible and RouteInfeasible skip the job with a
/// status instead of aborting. A pool schedule that fails validation throws
/// std::logic_error.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

/// CSV with header profile,n_flows,m,instance,entropy_bits,jam_success,
/// runtime_ms,status. With `timing` false, runtime_ms is written as 0 so the
/// file is reproducible byte for byte.
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool timing = true);

struct CellSummary {
  std::string profile;
  int n_flows = 0;
  int channels = 0;
  int count = 0;
  double entropy_mean = 0.0;
  double entropy_stddev = 0.0;
  double jam_mean = 0.0;
};

/// Mean and sample standard deviation per cell over the "ok" rows.
std::vector<CellSummary> summarize(const std::vector<ResultRow>& rows);

}  // namespace slotswapper
