#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cascadeq/random.hpp"
#include "cascadeq/stats.hpp"

namespace cascadeq {

struct Interval {
  double lo = 0;
  double hi = 0;
};

// Multiplier f(sigma) on the exogenous information term of the price update.
struct VolatilityFn {
  enum class Kind { constant_one, sentiment_linear };
  Kind kind = Kind::sentiment_linear;
  double a = 1.0;  // f(sigma) = a + b |sigma| for sentiment_linear
  double b = 2.0;

  static VolatilityFn constant_one() { return {Kind::constant_one, 1.0, 0.0}; }
  static VolatilityFn sentiment_linear(double a, double b) {
    return {Kind::sentiment_linear, a, b};
  }

  double operator()(double sentiment) const {
    return kind == Kind::constant_one ? 1.0 : a + b * std::abs(sentiment);
  }
};

// How the threshold noise parameter delta maps to the N(0, .) draws.
enum class NoiseScale { std_dev, variance };

struct MarketParams {
  std::size_t num_agents = 100000;
  double timestep = 4e-6;
  double coupling = 0.1;
  double threshold_noise = 1e-8;
  NoiseScale noise_scale = NoiseScale::std_dev;
  Interval reset_low{0.05, 0.25};   // Z_L
  Interval reset_high{0.05, 0.25};  // Z_U
  Interval herding{20.0, 100.0};    // C_i
  VolatilityFn volatility{};
  int substeps_per_day = 10;
  std::uint64_t seed = 1;
  double initial_price = 1.0;
  double initial_long_fraction = 0.5;  // P(s_i(0) = +1)

  void validate() const;
  double noise_std_dev() const;
};

struct Agent {
  int state = 1;  // +1 owns the asset, -1 does not
  double lower = 0;
  double upper = 0;
  double weight = 1;
  double herding = 0;

  bool holds(double price) const { return lower < price && price < upper; }
};

struct MarketState {
  double price = 1.0;
  double sentiment = 0;
  double prev_sentiment = 0;
  std::vector<Agent> agents;
  double total_weight = 0;
  double weighted_state_sum = 0;  // sum w_i s_i, maintained incrementally
  std::int64_t step_index = 0;
  std::int64_t last_switches = 0;

  double sentiment_change() const { return sentiment - prev_sentiment; }
};

// Independent streams so that e.g. the price path can be held fixed while
// threshold dynamics change.
struct MarketStreams {
  Engine price;
  Engine noise;
  Engine reset;

  static MarketStreams from_seed(std::uint64_t seed) {
    return {make_engine(seed, Stream::price_noise), make_engine(seed, Stream::threshold_noise),
            make_engine(seed, Stream::threshold_reset)};
  }
};

// Weighted mean of agent states, (1/W) sum w_i s_i.
double sentiment(std::span<const Agent> agents, double total_weight);

// p * exp(sqrt(h) eta f(sigma) - h/2 + kappa dsigma).
double price_step(double price, double sentiment_change, double eta, double current_sentiment,
                  const MarketParams& params);

// Interval [P/(1+z_low), P(1+z_high)] assigned after a switch at price P.
Interval reset_interval(double price, double z_low, double z_high);

// Herding drift (minority agents only, i.e. state * sigma < 0) plus N(0, delta)
// noise on each threshold.
Agent drift_thresholds(Agent agent, double sentiment, const MarketParams& params, Engine& noise);

struct SwitchResult {
  Agent agent;
  bool switched = false;
};

// Flips the agent when price is outside (lower, upper), including inverted
// intervals, and resets its thresholds around price.
SwitchResult detect_and_switch(Agent agent, double price, const MarketParams& params,
                               Engine& reset);

// Initial population: states +1 with probability initial_long_fraction,
// thresholds drawn by the reset rule around the initial price, C_i uniform
// on the herding range, unit weights.
MarketState initialize(const MarketParams& params, Engine& init);

struct StepRecord {
  double eta = 0;
  double log_return = 0;
  std::int64_t switches = 0;
};

// One synchronous update: price from the previous step's sentiment change,
// threshold drift at the current sentiment, switching against the new price,
// then sentiment recomputation.
StepRecord step(MarketState& state, const MarketParams& params, MarketStreams& streams);

struct PathPoint {
  std::int64_t step = 0;
  double price = 0;
  double log_return = 0;
  double sentiment = 0;
  std::int64_t switches = 0;
};

struct ReturnSeries {
  std::vector<double> daily_log_returns;
  int substeps_per_day = 1;
};

struct SwitchEvent {
  std::int64_t step = 0;
  std::size_t agent = 0;
  int new_state = 0;
};

struct RunResult {
  std::vector<PathPoint> path;  // one entry per substep, plus step 0
  ReturnSeries returns;
  std::vector<PathPoint> daily;  // aggregated daily rows, day index in .step
  std::vector<SwitchEvent> switch_log;
  MarketState final_state;
};

struct RunOptions {
  bool record_path = true;
  bool record_switch_log = false;
  // Called after every step with the updated state.
  std::function<void(const MarketState&)> observer;
};

// Deterministic given params.seed.
RunResult run(const MarketParams& params, std::int64_t total_days, const RunOptions& options = {});

enum class ThresholdSide { lower, upper };

// Histograms of threshold positions on the price axis. With by_state the
// result holds {+1 agents, -1 agents}; otherwise a single combined
// histogram. Under/overflow bins keep every agent counted.
struct ThresholdDensity {
  std::vector<int> states;  // +1, -1, or 0 for combined
  std::vector<Histogram> histograms;
};

ThresholdDensity threshold_density(const MarketState& state, ThresholdSide side, bool by_state,
                                   std::span<const double> edges);

}  // namespace cascadeq
