#include "slotswapper/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <exception>
#include <json.hpp>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <thread>
#include <tuple>

#include "slotswapper/adversary.hpp"
#include "slotswapper/base_scheduler.hpp"
#include "slotswapper/entropy.hpp"
#include "slotswapper/errors.hpp"
#include "slotswapper/feasibility.hpp"
#include "slotswapper/protocol.hpp"
#include "slotswapper/randomizer.hpp"

namespace slotswapper {

std::vector<int> period_choices(int hyper_period) {
  if (hyper_period < 1) throw InvalidParameter("hyper-period must be >= 1");
  std::vector<int> out;
  for (int div : {8, 4, 2, 1}) {
    if (hyper_period % div == 0) out.push_back(hyper_period / div);
  }
  return out;
}

namespace {

constexpr int kTopologyAttempts = 500;
constexpr int kPeriodAttempts = 10000;

// Stream tags for derive_seed.
constexpr std::uint64_t kTopologyStream = 1;
constexpr std::uint64_t kFlowStream = 2;
constexpr std::uint64_t kSelectorStream = 0x5E1EC7;

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.index(i)]);
}

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[rng.index(v.size())];
}

std::optional<NetworkGraph> try_topology(int n, int dmin, int dmax, Rng& rng) {
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(n),
                                     std::vector<char>(static_cast<std::size_t>(n), 0));
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  auto linked = [&](int u, int v) { return adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] != 0; };
  auto link = [&](int u, int v) {
    adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
    adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
    ++deg[static_cast<std::size_t>(u)];
    ++deg[static_cast<std::size_t>(v)];
  };
  auto d = [&](int u) { return deg[static_cast<std::size_t>(u)]; };

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);

  // Spanning tree: attach each node to an earlier one with spare degree.
  std::vector<int> open;
  for (std::size_t i = 1; i < order.size(); ++i) {
    open.clear();
    for (std::size_t j = 0; j < i; ++j) {
      if (d(order[j]) < dmax) open.push_back(order[j]);
    }
    if (open.empty()) return std::nullopt;
    link(pick(open, rng), order[i]);
  }

  std::vector<int> target(static_cast<std::size_t>(n));
  for (int& t : target) t = rng.between(dmin, dmax);
  auto want = [&](int u) { return target[static_cast<std::size_t>(u)]; };

  shuffle(order, rng);
  std::vector<int> partners;
  for (int v : order) {
    while (d(v) < want(v)) {
      partners.clear();
      for (int u = 0; u < n; ++u) {
        if (u != v && !linked(u, v) && d(u) < want(u)) partners.push_back(u);
      }
      if (partners.empty() && d(v) < dmin) {
        for (int u = 0; u < n; ++u) {
          if (u != v && !linked(u, v) && d(u) < dmax) partners.push_back(u);
        }
      }
      if (partners.empty()) break;
      link(v, pick(partners, rng));
    }
  }
  for (int v = 0; v < n; ++v) {
    if (d(v) < dmin || d(v) > dmax) return std::nullopt;
  }

  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (!linked(u, v)) continue;
      edges.push_back({u, v});
      edges.push_back({v, u});
    }
  }
  std::sort(edges.begin(), edges.end());
  const auto ap = static_cast<NodeId>(std::max_element(deg.begin(), deg.end()) - deg.begin());
  return NetworkGraph(n, std::move(edges), {ap});
}

std::vector<Edge> shortest_path(const NetworkGraph& graph, NodeId from, NodeId to) {
  if (from == to) return {};
  const auto n = static_cast<std::size_t>(graph.node_count());
  std::vector<NodeId> parent(n, -1);
  std::deque<NodeId> queue{from};
  parent[static_cast<std::size_t>(from)] = from;
  std::vector<NodeId> next;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    if (u == to) break;
    next = graph.successors(u);
    std::sort(next.begin(), next.end());
    for (NodeId v : next) {
      if (parent[static_cast<std::size_t>(v)] != -1) continue;
      parent[static_cast<std::size_t>(v)] = u;
      queue.push_back(v);
    }
  }
  if (parent[static_cast<std::size_t>(to)] == -1) {
    throw RouteInfeasible("node " + std::to_string(to) + " unreachable from " + std::to_string(from));
  }
  std::vector<Edge> path;
  for (NodeId v = to; v != from; v = parent[static_cast<std::size_t>(v)]) {
    path.push_back({parent[static_cast<std::size_t>(v)], v});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

DegreeProfile degree_profile(const std::string& name) {
  std::string key = name;
  if (key.rfind("Graph ", 0) == 0) key = key.substr(6);
  if (key == "A") return {"A", 2, 4};
  if (key == "B") return {"B", 3, 6};
  if (key == "C") return {"C", 3, 8};
  throw InvalidParameter("unknown graph profile '" + name + "'");
}

NetworkGraph generate_topology(int node_count, int degree_min, int degree_max, Rng& rng) {
  if (degree_min < 1 || degree_min > degree_max || degree_max >= node_count) {
    throw InvalidParameter("need 1 <= degree_min <= degree_max < node_count");
  }
  if (node_count > 2 && degree_max < 2) {
    throw DegreeInfeasible("a connected graph on more than two nodes needs degree 2 somewhere");
  }
  if (degree_min == degree_max && (node_count * degree_min) % 2 != 0) {
    throw DegreeInfeasible("no regular graph of odd degree on an odd node count");
  }
  for (int attempt = 0; attempt < kTopologyAttempts; ++attempt) {
    if (auto g = try_topology(node_count, degree_min, degree_max, rng)) return std::move(*g);
  }
  throw DegreeInfeasible("no connected graph found with degrees in [" +
                         std::to_string(degree_min) + ", " + std::to_string(degree_max) + "]");
}

std::vector<Edge> route_via_access_point(const NetworkGraph& graph, NodeId source,
                                         NodeId destination) {
  const NodeId ap = graph.access_point();
  if (source == ap) throw RouteInfeasible("source is the access point");
  std::vector<Edge> route = shortest_path(graph, source, ap);
  const auto back = shortest_path(graph, ap, destination);
  route.insert(route.end(), back.begin(), back.end());
  return route;
}

FlowSet generate_flows(const NetworkGraph& graph, const FlowGenOptions& options, Rng& rng) {
  if (!(options.alpha > 0.0 && options.alpha <= 1.0)) throw InvalidParameter("alpha must be in (0, 1]");
  if (options.count < 1) throw InvalidParameter("flow count must be >= 1");
  if (options.min_hops < 1 || options.min_hops > options.max_hops) {
    throw InvalidParameter("bad hop range");
  }
  if (options.period_choices.empty()) throw InvalidParameter("no period choices");
  for (int p : options.period_choices) {
    if (p < options.max_hops) throw InvalidParameter("period shorter than the longest route");
  }

  const NodeId ap = graph.access_point();
  std::vector<NodeId> candidates;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (v != ap) candidates.push_back(v);
  }
  const auto wanted = static_cast<std::size_t>(std::lround(options.alpha * graph.node_count()));
  const std::size_t pool = std::clamp<std::size_t>(wanted, 2, candidates.size());
  if (candidates.size() < 2) throw RouteInfeasible("too few non-AP nodes for disjoint endpoints");
  shuffle(candidates, rng);
  const std::size_t n_sources = pool / 2;

  struct Pair {
    NodeId source;
    NodeId destination;
    std::vector<Edge> route;
  };
  std::vector<Pair> admissible;
  for (std::size_t i = 0; i < n_sources; ++i) {
    for (std::size_t j = n_sources; j < pool; ++j) {
      std::vector<Edge> route;
      try {
        route = route_via_access_point(graph, candidates[i], candidates[j]);
      } catch (const RouteInfeasible&) {
        continue;
      }
      const auto hops = static_cast<int>(route.size());
      if (hops < options.min_hops || hops > options.max_hops) continue;
      admissible.push_back({candidates[i], candidates[j], std::move(route)});
    }
  }
  if (admissible.empty()) throw RouteInfeasible("no source/destination pair has an admissible route");

  std::vector<Flow> flows;
  for (int id = 1; id <= options.count; ++id) {
    const Pair& p = pick(admissible, rng);
    flows.push_back({id, p.source, p.destination, 0, 0, p.route});
  }
  for (int attempt = 0;; ++attempt) {
    if (attempt == kPeriodAttempts) {
      throw InvalidParameter("period choices never reach hyper-period " +
                             std::to_string(options.required_hyper_period));
    }
    for (Flow& f : flows) f.period = f.deadline = pick(options.period_choices, rng);
    if (options.required_hyper_period <= 0 ||
        hyper_period(flows) == options.required_hyper_period) {
      break;
    }
  }
  return FlowSet(std::move(flows), &graph);
}

// ---------------------------------------------------------------------------
// Config

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid config JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    auto ints = [](const json& j) {
      return j.is_array() ? j.get<std::vector<int>>() : std::vector<int>{j.get<int>()};
    };
    if (doc.contains("profile")) {
      const auto& p = doc["profile"];
      c.profiles = p.is_array() ? p.get<std::vector<std::string>>()
                                : std::vector<std::string>{p.get<std::string>()};
    }
    if (doc.contains("nodes")) c.nodes = doc["nodes"].get<int>();
    if (doc.contains("flows")) c.flows = ints(doc["flows"]);
    if (doc.contains("channels")) c.channels = ints(doc["channels"]);
    c.hyper_period = doc.value("hyper_period", c.hyper_period);
    c.alpha = doc.value("alpha", c.alpha);
    c.pool_size = doc.value("pool_size", c.pool_size);
    c.instances = doc.value("instances", c.instances);
    c.seed = doc.value("seed", c.seed);
    c.attack_hyper_periods = doc.value("attack_hyper_periods", c.attack_hyper_periods);
    c.workers = doc.value("workers", c.workers);
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad config value: ") + e.what());
  }
  for (const auto& p : c.profiles) degree_profile(p);
  if (c.profiles.empty() || c.flows.empty() || c.channels.empty()) {
    throw InvalidParameter("profile, flows and channels must be non-empty");
  }
  if (c.nodes < 2) throw InvalidParameter("nodes must be >= 2");
  if (c.hyper_period < 8) throw InvalidParameter("hyper_period must be >= 8");
  if (c.pool_size < 0 || c.instances < 1 || c.attack_hyper_periods < 1) {
    throw InvalidParameter("pool_size >= 0, instances >= 1 and attack_hyper_periods >= 1 required");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Sweep

namespace {

struct Job {
  std::size_t profile = 0;
  int n_flows = 0;
  int channels = 0;
  int instance = 0;
};

std::uint64_t name_key(const std::string& name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char ch : name) h = (h ^ ch) * 0x100000001B3ULL;
  return h;
}

std::uint64_t flow_seed(std::uint64_t master, const std::string& profile, int n_flows, int instance) {
  std::uint64_t s = derive_seed(derive_seed(master, kFlowStream), name_key(profile));
  s = derive_seed(s, static_cast<std::uint64_t>(n_flows));
  return derive_seed(s, static_cast<std::uint64_t>(instance));
}

ResultRow run_job(const ExperimentConfig& config, const DegreeProfile& profile,
                  const NetworkGraph& graph, const Job& job) {
  const auto start = std::chrono::steady_clock::now();
  ResultRow row{profile.name, job.n_flows, job.channels, job.instance, 0.0, 0.0, 0.0, "ok"};

  const std::uint64_t fseed = flow_seed(config.seed, profile.name, job.n_flows, job.instance);
  Rng flow_rng(fseed);
  FlowGenOptions options;
  options.alpha = config.alpha;
  options.count = job.n_flows;
  options.period_choices = period_choices(config.hyper_period);
  options.required_hyper_period = config.hyper_period;

  std::optional<FlowSet> flows;
  try {
    flows.emplace(generate_flows(graph, options, flow_rng));
  } catch (const RouteInfeasible&) {
    row.status = "route_infeasible";
    return row;
  }
  const ConflictList conflicts(graph);
  std::optional<Schedule> base;
  try {
    base.emplace(generate_base(graph, *flows, job.channels, conflicts));
  } catch (const Infeasible&) {
    row.status = "infeasible";
    return row;
  }

  // Target: the first flow released once per hyper-period, heard at its destination.
  const Flow* target = nullptr;
  for (const Flow& f : flows->flows()) {
    if (f.period == flows->hyper_period()) {
      target = &f;
      break;
    }
  }
  if (!target) target = &flows->flows().front();
  const NodeId victim = target->destination;
  const AttackPlan plan = plan_from_schedule(*base, target->id, victim);

  const std::uint64_t pool_seed = derive_seed(fseed, 0x100 + static_cast<std::uint64_t>(job.channels));
  DistributionBuilder builder(base->hyper_period(), base->channel_count());
  std::vector<char> hits;
  hits.reserve(static_cast<std::size_t>(config.pool_size) + 1);
  auto admit = [&](const Schedule& s, int index) {
    auto report = validate(s, *flows, conflicts);
    if (!report.empty()) {
      throw std::logic_error("profile " + profile.name + " flows " + std::to_string(job.n_flows) +
                             " m " + std::to_string(job.channels) + " instance " +
                             std::to_string(job.instance) + ": schedule " + std::to_string(index) +
                             " is infeasible: " + to_string(report.front()));
    }
    builder.add(s);
    hits.push_back(plan_hits(plan, s, 0, victim) ? 1 : 0);
  };
  admit(*base, 0);
  for (int i = 1; i <= config.pool_size; ++i) {
    Rng rng(derive_seed(pool_seed, static_cast<std::uint64_t>(i)));
    admit(sched_gen(*base, *flows, conflicts, rng), i);
  }
  row.entropy_bits = schedule_entropy_upper(builder.finish());

  const std::uint64_t selector_seed = derive_seed(pool_seed, kSelectorStream);
  int jammed = 0;
  for (int h = 0; h < config.attack_hyper_periods; ++h) {
    jammed += hits[selection_index(selector_seed, static_cast<std::uint64_t>(h), hits.size())];
  }
  row.jam_success = static_cast<double>(jammed) / config.attack_hyper_periods;
  row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  std::vector<DegreeProfile> profiles;
  std::vector<std::optional<NetworkGraph>> graphs;
  for (const auto& name : config.profiles) {
    const DegreeProfile p = degree_profile(name);
    profiles.push_back(p);
    Rng rng(derive_seed(derive_seed(config.seed, kTopologyStream), name_key(p.name)));
    try {
      graphs.emplace_back(generate_topology(config.nodes, p.degree_min, p.degree_max, rng));
    } catch (const DegreeInfeasible&) {
      graphs.emplace_back(std::nullopt);
    }
  }

  std::vector<Job> jobs;
  for (std::size_t p = 0; p < profiles.size(); ++p) {
    for (int n : config.flows) {
      for (int m : config.channels) {
        for (int i = 1; i <= config.instances; ++i) jobs.push_back({p, n, m, i});
      }
    }
  }

  std::vector<ResultRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size() || failed) return;
      const Job& job = jobs[i];
      const DegreeProfile& profile = profiles[job.profile];
      try {
        if (!graphs[job.profile]) {
          rows[i] = {profile.name, job.n_flows, job.channels, job.instance, 0.0, 0.0, 0.0,
                     "degree_infeasible"};
        } else {
          rows[i] = run_job(config, profile, *graphs[job.profile], job);
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };

  unsigned threads = config.workers > 0 ? static_cast<unsigned>(config.workers)
                                        : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.profile, a.n_flows, a.channels, a.instance) <
           std::tie(b.profile, b.n_flows, b.channels, b.instance);
  });
  return rows;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool timing) {
  out << "profile,n_flows,m,instance,entropy_bits,jam_success,runtime_ms,status\n";
  char buf[160];
  for (const auto& r : rows) {
    if (r.status == "ok") {
      std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.1f", r.entropy_bits, r.jam_success,
                    timing ? r.runtime_ms : 0.0);
    } else {
      std::snprintf(buf, sizeof buf, ",,%.1f", timing ? r.runtime_ms : 0.0);
    }
    out << r.profile << ',' << r.n_flows << ',' << r.channels << ',' << r.instance << ',' << buf
        << ',' << r.status << '\n';
  }
}

std::vector<CellSummary> summarize(const std::vector<ResultRow>& rows) {
  std::vector<CellSummary> out;
  std::vector<double> values;
  std::size_t i = 0;
  while (i < rows.size()) {
    CellSummary cell{rows[i].profile, rows[i].n_flows, rows[i].channels, 0, 0.0, 0.0, 0.0};
    values.clear();
    double jam = 0.0;
    for (; i < rows.size() && rows[i].profile == cell.profile && rows[i].n_flows == cell.n_flows &&
           rows[i].channels == cell.channels;
         ++i) {
      if (rows[i].status != "ok") continue;
      values.push_back(rows[i].entropy_bits);
      jam += rows[i].jam_success;
    }
    cell.count = static_cast<int>(values.size());
    if (!values.empty()) {
      const double n = static_cast<double>(values.size());
      cell.entropy_mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
      cell.jam_mean = jam / n;
      if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - cell.entropy_mean) * (v - cell.entropy_mean);
        cell.entropy_stddev = std::sqrt(ss / (n - 1.0));
      }
    }
    out.push_back(cell);
  }
  return out;
}

}  // namespace slotswapper
