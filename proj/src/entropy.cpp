#include "slotswapper/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "slotswapper/errors.hpp"

namespace slotswapper {

SlotDistribution::SlotDistribution(int hyper_period, int channel_count, std::vector<int> outcomes,
                                   std::vector<double> mass)
    : hyper_period_(hyper_period),
      channel_count_(channel_count),
      outcomes_(std::move(outcomes)),
      mass_(std::move(mass)) {
  const auto cells = static_cast<std::size_t>(hyper_period_) * static_cast<std::size_t>(channel_count_);
  if (outcomes_.empty() || mass_.size() != cells * outcomes_.size()) {
    throw InvalidParameter("distribution dimensions do not match");
  }
}

std::span<const double> SlotDistribution::cell(const Cell& c) const {
  if (c.slot < 1 || c.slot > hyper_period_ || c.channel < 1 || c.channel > channel_count_) {
    throw InvalidParameter("cell " + to_string(c) + " outside the distribution");
  }
  const std::size_t k = outcomes_.size();
  const std::size_t index = static_cast<std::size_t>(c.slot - 1) * static_cast<std::size_t>(channel_count_) +
                            static_cast<std::size_t>(c.channel - 1);
  return std::span<const double>(mass_).subspan(index * k, k);
}

double SlotDistribution::probability(const Cell& c, int outcome) const {
  auto it = std::find(outcomes_.begin(), outcomes_.end(), outcome);
  if (it == outcomes_.end()) return 0.0;
  return cell(c)[static_cast<std::size_t>(it - outcomes_.begin())];
}

DistributionBuilder::DistributionBuilder(int hyper_period, int channel_count)
    : hyper_period_(hyper_period), channel_count_(channel_count) {
  if (hyper_period < 1 || channel_count < 1) throw InvalidParameter("bad distribution dimensions");
  busy_.assign(static_cast<std::size_t>(hyper_period) * static_cast<std::size_t>(channel_count), 0);
}

std::size_t DistributionBuilder::column(int flow_id) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == flow_id) return i;
  }
  labels_.push_back(flow_id);
  columns_.emplace_back(busy_.size(), 0);
  return labels_.size() - 1;
}

void DistributionBuilder::add(const Schedule& schedule) {
  if (schedule.hyper_period() != hyper_period_ || schedule.channel_count() != channel_count_) {
    throw InvalidParameter("schedule dimensions differ from the pool");
  }
  std::size_t index = 0;
  for (int s = 1; s <= hyper_period_; ++s) {
    for (int ch = 1; ch <= channel_count_; ++ch, ++index) {
      const auto& t = schedule.at({s, ch});
      if (!t) continue;
      ++columns_[column(t->flow_id)][index];
      ++busy_[index];
    }
  }
  ++count_;
}

SlotDistribution DistributionBuilder::finish() const {
  if (count_ == 0) throw InvalidParameter("empirical distribution of an empty pool");
  std::vector<std::size_t> order(labels_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return labels_[a] < labels_[b]; });

  std::vector<int> outcomes{0};
  for (std::size_t i : order) outcomes.push_back(labels_[i]);
  const std::size_t k = outcomes.size();
  const double n = static_cast<double>(count_);
  std::vector<double> mass(busy_.size() * k, 0.0);
  for (std::size_t cell = 0; cell < busy_.size(); ++cell) {
    mass[cell * k] = static_cast<double>(count_ - busy_[cell]) / n;
    for (std::size_t j = 0; j < order.size(); ++j) {
      mass[cell * k + j + 1] = static_cast<double>(columns_[order[j]][cell]) / n;
    }
  }
  return SlotDistribution(hyper_period_, channel_count_, std::move(outcomes), std::move(mass));
}

SlotDistribution empirical_distribution(std::span<const Schedule> schedules) {
  if (schedules.empty()) throw InvalidParameter("empirical distribution of an empty pool");
  DistributionBuilder builder(schedules.front().hyper_period(), schedules.front().channel_count());
  for (const Schedule& s : schedules) builder.add(s);
  return builder.finish();
}

SlotDistribution empirical_distribution(const SchedulePool& pool) {
  return empirical_distribution(std::span<const Schedule>(pool.schedules));
}

double shannon_entropy(std::span<const double> masses) {
  double h = 0.0;
  for (double p : masses) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double slot_entropy_upper(const SlotDistribution& dist, int slot) {
  double h = 0.0;
  for (int ch = 1; ch <= dist.channel_count(); ++ch) h += shannon_entropy(dist.cell({slot, ch}));
  return h;
}

double schedule_entropy_upper(const SlotDistribution& dist) {
  double h = 0.0;
  for (int s = 1; s <= dist.hyper_period(); ++s) h += slot_entropy_upper(dist, s);
  return h;
}

namespace {

using SlotTuple = std::vector<int>;

SlotTuple slot_tuple(const Schedule& s, int slot) {
  SlotTuple out;
  out.reserve(static_cast<std::size_t>(s.channel_count()));
  for (int ch = 1; ch <= s.channel_count(); ++ch) {
    const auto& t = s.at({slot, ch});
    out.push_back(t ? t->flow_id : 0);
  }
  return out;
}

}  // namespace

double schedule_entropy_exact(std::span<const Schedule> schedules, ExactEntropyLimits limits) {
  if (schedules.empty()) throw InvalidParameter("exact entropy of an empty pool");
  const int hp = schedules.front().hyper_period();
  const int m = schedules.front().channel_count();
  std::set<int> flows;
  for (const Schedule& s : schedules) {
    if (s.hyper_period() != hp || s.channel_count() != m) {
      throw InvalidParameter("schedule dimensions differ within the pool");
    }
    for (const auto& [ref, cell] : s.hop_list()) flows.insert(ref.flow_id);
  }
  if (hp > limits.max_hyper_period || m > limits.max_channels ||
      static_cast<int>(flows.size()) > limits.max_flows) {
    throw InstanceTooLarge("exact entropy needs hp <= " + std::to_string(limits.max_hyper_period) +
                           ", m <= " + std::to_string(limits.max_channels) + ", n <= " +
                           std::to_string(limits.max_flows));
  }

  const double n = static_cast<double>(schedules.size());
  // prefix[i] identifies the group of schedules sharing slots 1..i-1.
  std::vector<std::size_t> group(schedules.size(), 0);
  double total = 0.0;
  for (int slot = 1; slot <= hp; ++slot) {
    // (previous group, slot tuple) -> count
    std::map<std::pair<std::size_t, SlotTuple>, std::size_t> joint;
    std::map<std::size_t, std::size_t> prefix_count;
    std::vector<SlotTuple> tuples;
    tuples.reserve(schedules.size());
    for (std::size_t i = 0; i < schedules.size(); ++i) {
      tuples.push_back(slot_tuple(schedules[i], slot));
      ++joint[{group[i], tuples.back()}];
      ++prefix_count[group[i]];
    }
    // H(slot | prefix) = sum_prefix P(prefix) * H(slot | prefix = that prefix)
    for (const auto& [key, count] : joint) {
      const double p_joint = static_cast<double>(count) / n;
      const double p_cond = static_cast<double>(count) / static_cast<double>(prefix_count[key.first]);
      total -= p_joint * std::log2(p_cond);
    }
    std::map<std::pair<std::size_t, SlotTuple>, std::size_t> next_id;
    for (std::size_t i = 0; i < schedules.size(); ++i) {
      auto [it, fresh] = next_id.emplace(std::make_pair(group[i], tuples[i]), next_id.size());
      group[i] = it->second;
    }
  }
  return total;
}

double schedule_entropy_exact(const SchedulePool& pool, ExactEntropyLimits limits) {
  return schedule_entropy_exact(std::span<const Schedule>(pool.schedules), limits);
}

}  // namespace slotswapper
