#include "cascadeq/market.hpp"

#include <cmath>
#include <random>

#include "cascadeq/error.hpp"

namespace cascadeq {

namespace {

double uniform_in(const Interval& range, Engine& rng) {
  return range.lo + (range.hi - range.lo) * rng.uniform_open();
}

void check_interval(const Interval& r, const char* name, bool strictly_positive) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi)
    throw InvalidInput(std::string(name) + ": range bounds must be finite and ordered");
  if (strictly_positive ? !(r.lo > 0) : !(r.lo >= 0))
    throw InvalidInput(std::string(name) + ": range must be " +
                       (strictly_positive ? "positive" : "nonnegative"));
}

}  // namespace

void MarketParams::validate() const {
  if (num_agents < 1) throw InvalidInput("num_agents must be >= 1");
  if (!(timestep > 0) || !std::isfinite(timestep)) throw InvalidInput("timestep must be > 0");
  if (!(coupling >= 0) || !std::isfinite(coupling)) throw InvalidInput("coupling must be >= 0");
  if (!(threshold_noise >= 0) || !std::isfinite(threshold_noise))
    throw InvalidInput("threshold_noise must be >= 0");
  check_interval(reset_low, "reset_low", true);
  check_interval(reset_high, "reset_high", true);
  check_interval(herding, "herding", false);
  if (substeps_per_day < 1) throw InvalidInput("substeps_per_day must be >= 1");
  if (!(initial_price > 0) || !std::isfinite(initial_price))
    throw InvalidInput("initial_price must be > 0");
  if (!(initial_long_fraction >= 0 && initial_long_fraction <= 1))
    throw InvalidInput("initial_long_fraction must lie in [0, 1]");
  if (volatility.kind == VolatilityFn::Kind::sentiment_linear &&
      (!std::isfinite(volatility.a) || !std::isfinite(volatility.b)))
    throw InvalidInput("volatility coefficients must be finite");
}

double MarketParams::noise_std_dev() const {
  return noise_scale == NoiseScale::std_dev ? threshold_noise : std::sqrt(threshold_noise);
}

double sentiment(std::span<const Agent> agents, double total_weight) {
  if (agents.empty()) throw InvalidInput("sentiment: empty agent set");
  if (!(total_weight > 0)) throw InvalidInput("sentiment: total weight must be positive");
  double acc = 0.0;
  for (const auto& a : agents) {
    if (!(a.weight > 0)) throw InvalidInput("sentiment: agent weights must be positive");
    acc += a.weight * a.state;
  }
  return acc / total_weight;
}

double price_step(double price, double sentiment_change, double eta, double current_sentiment,
                  const MarketParams& params) {
  if (!(price > 0)) throw InvalidInput("price_step: price must be positive");
  const double h = params.timestep;
  const double f = params.volatility(current_sentiment);
  return price * std::exp(std::sqrt(h) * eta * f - 0.5 * h + params.coupling * sentiment_change);
}

Interval reset_interval(double price, double z_low, double z_high) {
  return {price / (1.0 + z_low), price * (1.0 + z_high)};
}

Agent drift_thresholds(Agent agent, double sentiment, const MarketParams& params,
                       Engine& noise) {
  if (agent.state * sentiment < 0) {
    const double pull = agent.herding * params.timestep * std::abs(sentiment);
    agent.lower += pull;
    agent.upper -= pull;
  }
  const double sd = params.noise_std_dev();
  if (sd > 0) {
    std::normal_distribution<double> gauss(0.0, sd);
    agent.lower += gauss(noise);
    agent.upper += gauss(noise);
  }
  return agent;
}

SwitchResult detect_and_switch(Agent agent, double price, const MarketParams& params,
                               Engine& reset) {
  if (agent.holds(price)) return {agent, false};
  agent.state = -agent.state;
  const double z_low = uniform_in(params.reset_low, reset);
  const double z_high = uniform_in(params.reset_high, reset);
  const Interval fresh = reset_interval(price, z_low, z_high);
  agent.lower = fresh.lo;
  agent.upper = fresh.hi;
  return {agent, true};
}

MarketState initialize(const MarketParams& params, Engine& init) {
  params.validate();
  MarketState s;
  s.price = params.initial_price;
  s.agents.resize(params.num_agents);
  for (auto& a : s.agents) {
    a.state = init.uniform_open() < params.initial_long_fraction ? 1 : -1;
    const double z_low = uniform_in(params.reset_low, init);
    const double z_high = uniform_in(params.reset_high, init);
    const Interval iv = reset_interval(s.price, z_low, z_high);
    a.lower = iv.lo;
    a.upper = iv.hi;
    a.weight = 1.0;
    a.herding = uniform_in(params.herding, init);
    s.total_weight += a.weight;
    s.weighted_state_sum += a.weight * a.state;
  }
  s.sentiment = s.weighted_state_sum / s.total_weight;
  s.prev_sentiment = s.sentiment;
  return s;
}

StepRecord step(MarketState& state, const MarketParams& params, MarketStreams& streams) {
  StepRecord rec;
  std::normal_distribution<double> standard;
  rec.eta = standard(streams.price);

  const double sigma = state.sentiment;
  const double before = state.price;
  state.price = price_step(before, state.sentiment_change(), rec.eta, sigma, params);
  rec.log_return = std::log(state.price / before);

  // Drift uses sigma(n); all crossings are checked against the new price and
  // only affect sentiment after every agent has been processed.
  double switched_weight = 0.0;
  for (auto& agent : state.agents) {
    agent = drift_thresholds(agent, sigma, params, streams.noise);
    const auto result = detect_and_switch(agent, state.price, params, streams.reset);
    if (result.switched) {
      agent = result.agent;
      switched_weight += 2.0 * agent.weight * agent.state;
      ++rec.switches;
    }
  }
  state.weighted_state_sum += switched_weight;
  state.prev_sentiment = sigma;
  state.sentiment = state.weighted_state_sum / state.total_weight;
  state.last_switches = rec.switches;
  ++state.step_index;
  return rec;
}

RunResult run(const MarketParams& params, std::int64_t total_days, const RunOptions& options) {
  if (total_days < 1) throw InvalidInput("run: total_days must be >= 1");
  params.validate();
  Engine init = make_engine(params.seed, Stream::initialization);
  MarketState state = initialize(params, init);
  MarketStreams streams = MarketStreams::from_seed(params.seed);

  RunResult out;
  const std::int64_t per_day = params.substeps_per_day;
  const std::int64_t total_steps = total_days * per_day;
  if (options.record_path) {
    out.path.reserve(static_cast<std::size_t>(total_steps + 1));
    out.path.push_back({0, state.price, 0.0, state.sentiment, 0});
  }
  out.returns.substeps_per_day = params.substeps_per_day;
  out.returns.daily_log_returns.reserve(static_cast<std::size_t>(total_days));
  out.daily.reserve(static_cast<std::size_t>(total_days + 1));
  out.daily.push_back({0, state.price, 0.0, state.sentiment, 0});

  std::vector<int> states_before;
  double day_return = 0.0;
  std::int64_t day_switches = 0;
  for (std::int64_t n = 1; n <= total_steps; ++n) {
    if (options.record_switch_log) {
      states_before.resize(state.agents.size());
      for (std::size_t i = 0; i < states_before.size(); ++i)
        states_before[i] = state.agents[i].state;
    }
    const StepRecord rec = step(state, params, streams);
    if (options.record_switch_log && rec.switches > 0) {
      for (std::size_t i = 0; i < states_before.size(); ++i)
        if (state.agents[i].state != states_before[i])
          out.switch_log.push_back({n, i, state.agents[i].state});
    }
    day_return += rec.log_return;
    day_switches += rec.switches;
    if (options.record_path)
      out.path.push_back({n, state.price, rec.log_return, state.sentiment, rec.switches});
    if (options.observer) options.observer(state);
    if (n % per_day == 0) {
      out.returns.daily_log_returns.push_back(day_return);
      out.daily.push_back({n / per_day, state.price, day_return, state.sentiment, day_switches});
      day_return = 0.0;
      day_switches = 0;
    }
  }
  out.final_state = std::move(state);
  return out;
}

ThresholdDensity threshold_density(const MarketState& state, ThresholdSide side, bool by_state,
                                   std::span<const double> edges) {
  if (edges.size() < 2) throw InvalidInput("threshold_density: empty bins specification");
  auto position = [side](const Agent& a) { return side == ThresholdSide::lower ? a.lower : a.upper; };
  ThresholdDensity out;
  auto collect = [&](int which) {
    std::vector<double> v;
    for (const auto& a : state.agents)
      if (which == 0 || a.state == which) v.push_back(position(a));
    return histogram(as_array(v), edges);
  };
  if (by_state) {
    out.states = {1, -1};
    out.histograms = {collect(1), collect(-1)};
  } else {
    out.states = {0};
    out.histograms = {collect(0)};
  }
  return out;
}

}  // namespace cascadeq
