#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cascadeq/distributions.hpp"
#include "cascadeq/queue_sim.hpp"
#include "cascadeq/random.hpp"

namespace cascadeq {

// One agent threshold below the cascade start P*, measured as a log-price
// offset (>= 0). State +1 agents sell when reached and push the price down;
// state -1 agents buy and push it back up.
struct ThresholdEntry {
  double offset = 0;
  int state = 1;
  double weight = 1;
};

// Stochastic field: thresholds at the points of a Poisson process with
// `rate` per unit log-price, i.i.d. weights, and each agent in state -1 with
// probability anti_fraction.
struct FieldGenerator {
  double rate = 1.0;
  Distribution weights = Deterministic{1.0};
  double anti_fraction = 0.0;
};

struct ThresholdField {
  std::vector<ThresholdEntry> entries;  // ascending offsets
  double coupling = 0.1;
  double total_weight = 1.0;
  std::optional<FieldGenerator> generator;

  // Price jump 2 kappa w / W caused by one switch of an agent of weight w.
  double jump(double weight) const { return 2.0 * coupling * weight / total_weight; }

  // Sorts entries (stably, preserving insertion order on ties) and checks
  // invariants.
  void normalize();
  void validate() const;
};

struct CascadeSwitch {
  std::size_t agent = 0;  // 0 is the initiator; i >= 1 is the i-th threshold reached
  double offset = 0;
  double jump = 0;  // signed: positive deepens the drop
};

struct CascadeOutcome {
  // Deepest extent of the relaxation, the analogue of a busy period. Opposite
  // switches pull the front back but never above a threshold already swept.
  double total_drop = 0;
  std::int64_t num_switches = 0;
  std::vector<CascadeSwitch> switches;  // only when requested
  // Opposing jump size that could not be absorbed because the front had
  // reached the swept region; the final log-price sits this far above
  // P* - total_drop.
  double terminal_bounce = 0;
  bool truncated = false;
};

struct CascadeOptions {
  std::int64_t max_switches = 10'000'000;
  bool record_switches = false;
};

// Instantaneous relaxation started by a +1 agent of weight initiator_weight
// at offset 0. Explicit entries are processed in ascending offset (ties in
// insertion order); with a generator, thresholds are drawn lazily from `rng`
// beyond the explicit ones.
CascadeOutcome run_cascade(const ThresholdField& field, double initiator_weight,
                           Engine* rng = nullptr, const CascadeOptions& options = {});

// Queue whose busy period has the same law as total_drop for a Poisson field:
// arrivals at rate(1 - anti_fraction), service 2 kappa w / W, and
// anti-customer cancellations at rate * anti_fraction of the same size law.
QueueParams cascade_to_queue(const ThresholdField& field);

// n independent generated-field cascades; replication i uses substreams
// (seed, cascade_field|cascade_initiator, i). The initiator's weight is drawn
// from the generator's weight law.
std::vector<CascadeOutcome> sample_cascades(const ThresholdField& field, std::size_t n,
                                            std::uint64_t seed,
                                            const CascadeOptions& options = {});

}  // namespace cascadeq
