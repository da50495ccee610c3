// slotswapper: command-line front end for schedule generation, pool
// randomization, selection, entropy, attack simulation and sweeps.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "slotswapper/adversary.hpp"
#include "slotswapper/base_scheduler.hpp"
#include "slotswapper/entropy.hpp"
#include "slotswapper/errors.hpp"
#include "slotswapper/experiment.hpp"
#include "slotswapper/feasibility.hpp"
#include "slotswapper/io.hpp"
#include "slotswapper/protocol.hpp"

namespace ss = slotswapper;
using nlohmann::json;

namespace {

// Exit codes: 0 success, 1 infeasible schedule, 2 bad input or failure.
constexpr int kViolations = 1;
constexpr int kError = 2;

int cmd_validate(const std::string& schedule_path, const std::string& flows_path,
                 const std::string& topology_path) {
  const auto graph = ss::io::read_topology(topology_path);
  const auto flows = ss::io::read_flows(flows_path, &graph);
  const ss::ConflictList conflicts(graph);
  const auto rows = ss::io::read_schedule_rows(schedule_path);
  auto reports = ss::check_no_collision(rows);
  const auto schedule = ss::to_schedule(rows);
  if (schedule.hyper_period() != flows.hyper_period()) {
    std::cout << "schedule spans " << schedule.hyper_period() << " slots but the hyper-period is "
              << flows.hyper_period() << "\n";
  }
  for (auto& r : ss::validate(schedule, flows, conflicts)) reports.push_back(std::move(r));
  if (reports.empty()) {
    std::cout << "feasible\n";
    return schedule.hyper_period() == flows.hyper_period() ? 0 : kViolations;
  }
  for (const auto& r : reports) std::cout << ss::to_string(r) << "\n";
  return kViolations;
}

// Lowest flow id whose transmissions touch the victim.
std::optional<int> default_target(const ss::Schedule& s, ss::NodeId victim) {
  std::optional<int> best;
  for (const auto& [ref, cell] : s.hop_list()) {
    const auto e = *s.edge_at(cell);
    if (e.sender != victim && e.receiver != victim) continue;
    if (!best || ref.flow_id < *best) best = ref.flow_id;
  }
  return best;
}

int cmd_attack(const std::string& pool_dir, const std::string& static_path, ss::NodeId victim,
               int hyper_periods, std::uint64_t seed, std::optional<int> flow) {
  std::optional<ss::SchedulePool> pool;
  std::optional<ss::Schedule> fixed;
  std::optional<ss::ScheduleSource> source;
  if (!pool_dir.empty()) {
    pool.emplace(ss::io::read_pool(pool_dir));
    source.emplace(ss::ScheduleSource::randomized(*pool, seed));
  } else {
    fixed.emplace(ss::io::read_schedule(static_path));
    source.emplace(ss::ScheduleSource::fixed(*fixed));
  }

  const auto trace = ss::observe(*source, hyper_periods, victim);
  const auto estimate = ss::estimate_hyper_period(trace);
  const ss::Schedule& first = source->at(0);
  if (!flow) flow = default_target(first, victim);

  json out;
  out["victim"] = victim;
  out["observed_slots"] = trace.observed_slots;
  out["observed_transmissions"] = trace.events.size();
  out["estimated_hyper_period"] = estimate ? json(*estimate) : json(nullptr);
  if (!flow) {
    out["target_flow"] = nullptr;
    out["plan"] = json::array();
    out["jam_success"] = 0.0;
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  // The attacker copies the targeted cells seen in the first hyper-period.
  ss::AttackPlan plan = ss::plan_from_schedule(first, *flow, victim);
  if (estimate) plan.estimated_hyper_period = *estimate;
  json cells = json::array();
  for (const auto& c : plan.cells) cells.push_back({c.slot, c.channel});
  out["target_flow"] = *flow;
  out["plan"] = std::move(cells);
  out["jam_success"] = plan.cells.empty() ? 0.0 : ss::jam_success_rate(plan, *source, hyper_periods, victim);
  if (pool) out["placement_frequency"] = ss::placement_frequency(plan, *pool, victim);
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SlotSwapper: randomized TDMA schedules for multi-hop real-time flows"};
  app.require_subcommand(1);

  std::string schedule_path, flows_path, topology_path;
  auto* validate = app.add_subcommand("validate", "Check a schedule against a flow set and topology");
  validate->add_option("schedule", schedule_path, "Schedule file (.csv or .json)")->required();
  validate->add_option("flows", flows_path, "Flow set JSON")->required();
  validate->add_option("topology", topology_path, "Topology JSON")->required();

  int channels = 1;
  std::string out_path;
  auto* base = app.add_subcommand("schedule-base", "Build the EDF base schedule");
  base->add_option("--topology", topology_path)->required();
  base->add_option("--flows", flows_path)->required();
  base->add_option("--channels,-m", channels, "Channel count")->check(CLI::Range(1, 16));
  base->add_option("--out", out_path, "Schedule file (.csv or .json)")->required();

  std::string base_path;
  int count = 0;
  std::uint64_t seed = 0;
  auto* randomize = app.add_subcommand("randomize", "Build a pool of K randomized schedules");
  randomize->add_option("--base", base_path)->required();
  randomize->add_option("--flows", flows_path)->required();
  randomize->add_option("--topology", topology_path)->required();
  randomize->add_option("--count,-k", count, "K")->required()->check(CLI::NonNegativeNumber);
  randomize->add_option("--seed", seed);
  randomize->add_option("--out", out_path, "Pool directory")->required();

  std::string pool_dir;
  int hyper_periods = 1;
  std::uint64_t start = 0;
  auto* select = app.add_subcommand("select", "Print the schedule index chosen per hyper-period");
  select->add_option("--pool", pool_dir)->required();
  select->add_option("--seed", seed);
  select->add_option("--hyper-periods", hyper_periods)->required()->check(CLI::PositiveNumber);
  select->add_option("--start", start, "First hyper-period index");

  bool exact = false;
  std::string per_slot;
  auto* entropy = app.add_subcommand("entropy", "Schedule entropy of a pool in bits");
  entropy->add_option("--pool", pool_dir)->required();
  entropy->add_flag("--exact", exact, "Also compute the chain-rule entropy (small pools only)");
  entropy->add_option("--per-slot", per_slot, "Write per-slot entropies to this CSV");

  std::string static_path;
  ss::NodeId victim = 0;
  std::optional<int> flow;
  auto* attack = app.add_subcommand("attack", "Eavesdrop, estimate the hyper-period, and jam");
  auto* pool_opt = attack->add_option("--pool", pool_dir);
  auto* static_opt = attack->add_option("--static", static_path, "A single schedule run every hyper-period");
  pool_opt->excludes(static_opt);
  attack->add_option("--victim", victim)->required();
  attack->add_option("--hyper-periods", hyper_periods)->required()->check(CLI::PositiveNumber);
  attack->add_option("--seed", seed, "Selector seed for --pool");
  attack->add_option("--flow", flow, "Targeted flow (default: lowest id touching the victim)");

  std::string config_path;
  bool no_timing = false;
  int workers = -1;
  auto* sweep = app.add_subcommand("sweep", "Run an experiment grid and write CSV results");
  sweep->add_option("--config", config_path)->required();
  sweep->add_option("--out", out_path)->required();
  sweep->add_flag("--no-timing", no_timing, "Write runtime_ms as 0 for reproducible output");
  sweep->add_option("--workers", workers, "Worker threads (overrides the config)");

  int nodes = 100;
  std::string profile = "A";
  auto* gen_topology = app.add_subcommand("gen-topology", "Generate a random degree-bounded topology");
  gen_topology->add_option("--nodes", nodes)->check(CLI::Range(2, 100000));
  gen_topology->add_option("--profile", profile, "A, B or C");
  gen_topology->add_option("--seed", seed);
  gen_topology->add_option("--out", out_path)->required();

  ss::FlowGenOptions flow_options;
  auto* gen_flows = app.add_subcommand("gen-flows", "Generate a random flow set on a topology");
  gen_flows->add_option("--topology", topology_path)->required();
  gen_flows->add_option("--count", flow_options.count)->check(CLI::PositiveNumber);
  gen_flows->add_option("--alpha", flow_options.alpha);
  gen_flows->add_option("--hyper-period", flow_options.required_hyper_period,
                        "Draw periods from hp/8..hp until their lcm equals hp (0: 128..1024, any lcm)");
  gen_flows->add_option("--seed", seed);
  gen_flows->add_option("--out", out_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(schedule_path, flows_path, topology_path);

    if (*base) {
      const auto graph = ss::io::read_topology(topology_path);
      const auto flows = ss::io::read_flows(flows_path, &graph);
      const ss::ConflictList conflicts(graph);
      ss::io::write_schedule(out_path, ss::generate_base(graph, flows, channels, conflicts));
      return 0;
    }

    if (*randomize) {
      const auto graph = ss::io::read_topology(topology_path);
      const auto flows = ss::io::read_flows(flows_path, &graph);
      const ss::ConflictList conflicts(graph);
      const auto schedule = ss::io::read_schedule(base_path);
      ss::io::write_pool(out_path, ss::build_pool(schedule, count, seed, flows, conflicts));
      return 0;
    }

    if (*select) {
      const auto pool = ss::io::read_pool(pool_dir);
      for (int h = 0; h < hyper_periods; ++h) {
        std::cout << ss::selection_index(seed, start + static_cast<std::uint64_t>(h), pool.size())
                  << "\n";
      }
      return 0;
    }

    if (*entropy) {
      const auto pool = ss::io::read_pool(pool_dir);
      const auto dist = ss::empirical_distribution(pool);
      std::printf("entropy_upper_bits %.9f\n", ss::schedule_entropy_upper(dist));
      if (exact) std::printf("entropy_exact_bits %.9f\n", ss::schedule_entropy_exact(pool));
      if (!per_slot.empty()) {
        std::ostringstream os;
        os << "slot,entropy_bits\n";
        char buf[64];
        for (int s = 1; s <= dist.hyper_period(); ++s) {
          std::snprintf(buf, sizeof buf, "%d,%.9f\n", s, ss::slot_entropy_upper(dist, s));
          os << buf;
        }
        ss::io::write_text(per_slot, os.str());
      }
      return 0;
    }

    if (*attack) {
      if (pool_dir.empty() == static_path.empty()) {
        std::cerr << "attack needs exactly one of --pool or --static\n";
        return kError;
      }
      return cmd_attack(pool_dir, static_path, victim, hyper_periods, seed, flow);
    }

    if (*sweep) {
      auto config = ss::parse_experiment_config(ss::io::read_text(config_path));
      if (workers >= 0) config.workers = workers;
      const auto rows = ss::run_experiment(config);
      std::ostringstream os;
      ss::write_results_csv(os, rows, !no_timing);
      ss::io::write_text(out_path, os.str());
      for (const auto& cell : ss::summarize(rows)) {
        std::printf("%s flows=%d m=%d n=%d entropy=%.3f+-%.3f jam=%.3f\n", cell.profile.c_str(),
                    cell.n_flows, cell.channels, cell.count, cell.entropy_mean,
                    cell.entropy_stddev, cell.jam_mean);
      }
      return 0;
    }

    if (*gen_topology) {
      const auto p = ss::degree_profile(profile);
      ss::Rng rng(seed);
      ss::io::write_topology(out_path, ss::generate_topology(nodes, p.degree_min, p.degree_max, rng));
      return 0;
    }

    if (*gen_flows) {
      const auto graph = ss::io::read_topology(topology_path);
      if (flow_options.required_hyper_period > 0) {
        flow_options.period_choices = ss::period_choices(flow_options.required_hyper_period);
      }
      ss::Rng rng(seed);
      ss::io::write_flows(out_path, ss::generate_flows(graph, flow_options, rng));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return 0;
}
