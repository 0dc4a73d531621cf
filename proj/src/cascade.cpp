#include "cascadeq/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cascadeq/error.hpp"

namespace cascadeq {

void ThresholdField::normalize() {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const ThresholdEntry& a, const ThresholdEntry& b) { return a.offset < b.offset; });
  validate();
}

void ThresholdField::validate() const {
  if (!(coupling >= 0) || !std::isfinite(coupling))
    throw InvalidInput("cascade field: coupling must be >= 0");
  if (!(total_weight > 0) || !std::isfinite(total_weight))
    throw InvalidInput("cascade field: total weight must be positive");
  double last = 0.0;
  for (const auto& e : entries) {
    if (!(e.offset >= 0) || !std::isfinite(e.offset))
      throw InvalidInput("cascade field: offsets must be >= 0");
    if (e.offset < last) throw InvalidInput("cascade field: offsets must be ascending");
    if (e.state != 1 && e.state != -1) throw InvalidInput("cascade field: state must be +1 or -1");
    if (!(e.weight > 0) || !std::isfinite(e.weight))
      throw InvalidInput("cascade field: weights must be positive");
    last = e.offset;
  }
  if (generator) {
    if (!(generator->rate > 0) || !std::isfinite(generator->rate))
      throw InvalidInput("cascade generator: rate must be positive");
    if (!(generator->anti_fraction >= 0 && generator->anti_fraction <= 1))
      throw InvalidInput("cascade generator: anti_fraction must lie in [0, 1]");
  }
}

namespace {

class ThresholdSource {
 public:
  ThresholdSource(const ThresholdField& field, Engine* rng) : field_(field), rng_(rng) {
    if (field.generator) {
      if (!rng) throw InvalidInput("run_cascade: generated field needs an RNG");
      draw_generated();
    }
  }

  const ThresholdEntry* peek() const {
    const ThresholdEntry* exp = next_ < field_.entries.size() ? &field_.entries[next_] : nullptr;
    if (!field_.generator) return exp;
    if (!exp || generated_.offset < exp->offset) return &generated_;
    return exp;
  }

  void pop() {
    const ThresholdEntry* head = peek();
    if (head == &generated_) {
      draw_generated();
    } else {
      ++next_;
    }
  }

 private:
  void draw_generated() {
    const auto& gen = *field_.generator;
    generated_.offset += -std::log(rng_->uniform_open()) / gen.rate;
    generated_.state = rng_->uniform_open() < gen.anti_fraction ? -1 : 1;
    generated_.weight = gen.weights.sample(*rng_);
  }

  const ThresholdField& field_;
  Engine* rng_;
  std::size_t next_ = 0;
  ThresholdEntry generated_{0.0, 1, 1.0};
};

}  // namespace

CascadeOutcome run_cascade(const ThresholdField& field, double initiator_weight, Engine* rng,
                           const CascadeOptions& options) {
  field.validate();
  if (!(initiator_weight > 0) || !std::isfinite(initiator_weight))
    throw InvalidInput("run_cascade: initiator weight must be positive");
  if (options.max_switches < 1) throw InvalidInput("run_cascade: max_switches must be >= 1");

  CascadeOutcome out;
  double front = field.jump(initiator_weight);
  out.num_switches = 1;
  if (options.record_switches) out.switches.push_back({0, 0.0, front});

  ThresholdSource source(field, rng);
  std::size_t reached = 0;
  while (const ThresholdEntry* next = source.peek()) {
    if (next->offset > front) break;
    if (out.num_switches >= options.max_switches) {
      out.truncated = true;
      break;
    }
    const ThresholdEntry e = *next;
    source.pop();
    ++reached;
    const double j = field.jump(e.weight);
    if (e.state == 1) {
      front += j;
    } else {
      // Cancelled work cannot reach back past the point already swept.
      const double pulled = front - j;
      if (pulled < e.offset) {
        out.terminal_bounce += e.offset - pulled;
        front = e.offset;
      } else {
        front = pulled;
      }
    }
    ++out.num_switches;
    if (options.record_switches)
      out.switches.push_back({reached, e.offset, e.state == 1 ? j : -j});
  }
  out.total_drop = front;
  return out;
}

QueueParams cascade_to_queue(const ThresholdField& field) {
  field.validate();
  if (!field.generator || !field.entries.empty())
    throw UnsupportedMapping(
        "cascade_to_queue: only purely Poisson-generated fields map onto an M/G/1 queue");
  const auto& gen = *field.generator;
  const double scale = 2.0 * field.coupling / field.total_weight;
  if (!(scale > 0))
    throw UnsupportedMapping("cascade_to_queue: zero coupling gives zero service times");
  QueueParams q;
  const double same = gen.rate * (1.0 - gen.anti_fraction);
  if (!(same > 0))
    throw UnsupportedMapping("cascade_to_queue: field has no same-direction agents");
  q.arrival = RateFunction::constant(same);
  q.service = gen.weights.scaled(scale);
  if (gen.anti_fraction > 0) {
    q.reneging.kind = RenegingKind::anti_customer;
    q.reneging.rate = RateFunction::constant(gen.rate * gen.anti_fraction);
    q.reneging.cancel_size = gen.weights.scaled(scale);
  }
  return q;
}

std::vector<CascadeOutcome> sample_cascades(const ThresholdField& field, std::size_t n,
                                            std::uint64_t seed, const CascadeOptions& options) {
  if (!field.generator) throw InvalidInput("sample_cascades: field has no generator");
  std::vector<CascadeOutcome> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Engine field_rng = make_engine(seed, Stream::cascade_field, i);
    Engine initiator_rng = make_engine(seed, Stream::cascade_initiator, i);
    const double w0 = field.generator->weights.sample(initiator_rng);
    out.push_back(run_cascade(field, w0, &field_rng, options));
  }
  return out;
}

}  // namespace cascadeq
