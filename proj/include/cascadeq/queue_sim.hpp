#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cascadeq/distributions.hpp"

namespace cascadeq {

// Piecewise-constant rate r(t, n) of elapsed busy-period time t and number in
// system n. Time is cut at `time_breaks` (ascending); segment j uses
// levels[j][min(n, levels[j].size() - 1)].
class RateFunction {
 public:
  RateFunction() : levels_{{0.0}} {}
  RateFunction(std::vector<double> time_breaks, std::vector<std::vector<double>> levels);

  static RateFunction constant(double rate) { return RateFunction({}, {{rate}}); }
  static RateFunction by_length(std::vector<double> levels) {
    return RateFunction({}, {std::move(levels)});
  }

  double operator()(double t, std::size_t n) const;

  // First break strictly after t, or +inf.
  double next_break_after(double t) const;

  bool is_constant() const noexcept;
  bool is_zero() const noexcept;
  double max_rate() const noexcept;
  // Rate in the last time segment at large n; decides long-run stability.
  double tail_rate() const noexcept { return levels_.back().back(); }

  // "0.5" for constants, otherwise "t0:[a|b|c];t1:[...]" style.
  std::string describe() const;
  static RateFunction parse(const std::string& text);

 private:
  std::vector<double> breaks_;
  std::vector<std::vector<double>> levels_;
};

enum class RenegingKind {
  none,
  // Every waiting customer (not the one in service) abandons independently
  // at rate theta(t, n).
  per_customer,
  // Anti-customers arrive at rate nu(t, n) and each cancels `cancel_size`
  // of outstanding work, newest customers first, including the remaining
  // work of the customer in service. Served work cannot be cancelled.
  anti_customer,
};

struct Reneging {
  RenegingKind kind = RenegingKind::none;
  RateFunction rate;
  Distribution cancel_size;
};

struct QueueParams {
  RateFunction arrival = RateFunction::constant(1.0);
  Distribution service = Exponential{2.0};
  Reneging reneging;

  // lambda E[Y], using the largest arrival rate when arrivals are state or
  // time dependent.
  double utilization() const { return arrival.max_rate() * service.mean(); }
  // tail_rate E[Y]: busy periods without reneging end a.s. only when this is < 1.
  double tail_utilization() const { return arrival.tail_rate() * service.mean(); }
  void validate() const;
};

struct BusyPeriodSample {
  std::vector<double> durations;
  std::vector<std::int64_t> customers_served;
  std::vector<std::int64_t> reneged;
  // Total service requirement brought by all arrivals, and the part of it
  // removed by reneging; duration == offered - cancelled up to rounding.
  std::vector<double> offered_work;
  std::vector<double> cancelled_work;
  std::int64_t truncated_count = 0;

  std::size_t size() const noexcept { return durations.size(); }
};

struct BusyPeriodOptions {
  double max_duration = std::numeric_limits<double>::infinity();
  // 0 selects std::thread::hardware_concurrency(). Output does not depend on
  // the thread count.
  unsigned threads = 0;
};

// Samples busy periods, each starting with one arrival to an empty queue.
// Replication i draws from substreams (seed, arrivals|services|reneging, i),
// so runs that differ only in their reneging rule are pathwise coupled.
// Busy periods longer than max_duration are dropped and counted.
BusyPeriodSample sample_busy_periods(const QueueParams& params, std::size_t n_samples,
                                     std::uint64_t seed, const BusyPeriodOptions& options = {});

}  // namespace cascadeq
