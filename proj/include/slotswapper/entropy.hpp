#pragma once

// Schedule entropy of a pool, in bits. Each (slot, channel) cell is a random
// variable over {idle, flow ids}; probabilities are pool frequencies.

#include <span>
#include <vector>

#include "slotswapper/model.hpp"
#include "slotswapper/protocol.hpp"

namespace slotswapper {

/// Per-cell empirical distribution over outcomes. Outcome 0 is idle; the
/// others are flow ids.
class SlotDistribution {
 public:
  SlotDistribution(int hyper_period, int channel_count, std::vector<int> outcomes,
                   std::vector<double> mass);

  int hyper_period() const { return hyper_period_; }
  int channel_count() const { return channel_count_; }
  /// Outcome labels, idle (0) first then ascending flow ids.
  std::span<const int> outcomes() const { return outcomes_; }
  /// Masses of `cell`, aligned with outcomes().
  std::span<const double> cell(const Cell& c) const;
  double probability(const Cell& c, int outcome) const;

 private:
  int hyper_period_;
  int channel_count_;
  std::vector<int> outcomes_;
  std::vector<double> mass_;
};

/// Streams schedules into per-cell outcome counts so large pools need not be
/// held in memory.
class DistributionBuilder {
 public:
  DistributionBuilder(int hyper_period, int channel_count);

  /// Throws InvalidParameter on a dimension mismatch.
  void add(const Schedule& schedule);
  std::size_t count() const { return count_; }
  /// Throws InvalidParameter when no schedule was added.
  SlotDistribution finish() const;

 private:
  std::size_t column(int flow_id);

  int hyper_period_;
  int channel_count_;
  std::size_t count_ = 0;
  std::vector<int> labels_;                          // column -> flow id
  std::vector<std::vector<std::uint32_t>> columns_;  // column -> per-cell counts
  std::vector<std::uint32_t> busy_;                  // per-cell occupied count
};

SlotDistribution empirical_distribution(const SchedulePool& pool);
SlotDistribution empirical_distribution(std::span<const Schedule> schedules);

/// Shannon entropy in bits of a mass vector, with 0 log 0 = 0.
double shannon_entropy(std::span<const double> masses);

/// Sum over channels of the marginal cell entropies of `slot`.
double slot_entropy_upper(const SlotDistribution& dist, int slot);
/// Sum of slot_entropy_upper over all slots.
double schedule_entropy_upper(const SlotDistribution& dist);

struct ExactEntropyLimits {
  int max_hyper_period = 16;
  int max_channels = 2;
  int max_flows = 4;
};

/// Chain-rule entropy sum_i H(slot_i | slots_1..i-1) with every term
/// estimated from joint frequencies of whole slot tuples in the pool. Throws
/// InstanceTooLarge beyond `limits`.
double schedule_entropy_exact(std::span<const Schedule> schedules, ExactEntropyLimits limits = {});
double schedule_entropy_exact(const SchedulePool& pool, ExactEntropyLimits limits = {});

}  // namespace slotswapper
