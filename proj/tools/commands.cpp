#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>

#include "cascadeq/error.hpp"
#include "cascadeq/queue_analytics.hpp"
#include "cascadeq/stats.hpp"
#include "cascadeq/text.hpp"

namespace cascadeq::cli {

namespace {

double positive(const Config& c, const char* s, const char* k) {
  const double v = c.real(s, k);
  if (!(v > 0) || !std::isfinite(v)) c.fail(s, k, "must be positive and finite");
  return v;
}

double nonnegative(const Config& c, const char* s, const char* k) {
  const double v = c.real(s, k);
  if (!(v >= 0) || !std::isfinite(v)) c.fail(s, k, "must be >= 0 and finite");
  return v;
}

double probability(const Config& c, const char* s, const char* k) {
  const double v = c.real(s, k);
  if (!(v >= 0 && v <= 1)) c.fail(s, k, "must lie in [0, 1]");
  return v;
}

std::int64_t at_least(const Config& c, const char* s, const char* k, std::int64_t lo) {
  const auto v = c.integer(s, k);
  if (v < lo) c.fail(s, k, "must be >= " + std::to_string(lo));
  return v;
}

Interval range(const Config& c, const char* s, const char* lo_key, const char* hi_key,
               bool strictly_positive) {
  const double lo = strictly_positive ? positive(c, s, lo_key) : nonnegative(c, s, lo_key);
  const double hi = strictly_positive ? positive(c, s, hi_key) : nonnegative(c, s, hi_key);
  if (hi < lo) c.fail(s, hi_key, std::string("must be >= ") + s + "." + lo_key);
  return {lo, hi};
}

Distribution distribution(const Config& c, const char* s, const char* k) {
  try {
    return Distribution::parse(c.text(s, k));
  } catch (const InvalidInput& e) {
    c.fail(s, k, e.what());
  }
}

RateFunction rate_function(const Config& c, const char* s, const char* k) {
  try {
    return RateFunction::parse(c.text(s, k));
  } catch (const InvalidInput& e) {
    c.fail(s, k, e.what());
  }
}

// queue.max_duration accepts "inf".
double positive_or_inf(const Config& c) {
  const double v = c.real("queue", "max_duration");
  if (!(v > 0)) c.fail("queue", "max_duration", "must be positive (or inf)");
  return v;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Sectioned dump of the resolved configuration preceded by run metadata in
// comments, so a manifest can be passed back through --config.
void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const Config& c, const std::vector<std::string>& outputs) {
  std::ofstream out(dir / "manifest.ini", std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + (dir / "manifest.ini").string());
  out << "# cascadeq manifest v1\n";
  out << "# tool_version = " << kToolVersion << "\n";
  out << "# command = " << command << "\n";
  out << "# seed = " << c.text("run", "seed") << "\n";
  out << "# config_hash = " << hex64(c.hash()) << "\n";
  out << "# outputs =";
  for (const auto& f : outputs) out << " " << f;
  out << "\n";
  std::string section;
  const std::string canonical = c.canonical();
  for (std::string_view line : split(canonical, '\n')) {
    if (line.empty()) continue;
    const auto dot = line.find('.');
    const auto eq = line.find('=');
    const std::string s(line.substr(0, dot));
    if (s != section) {
      out << "\n[" << s << "]\n";
      section = s;
    }
    const auto value = line.substr(eq + 1);
    out << line.substr(dot + 1, eq - dot - 1) << (value.empty() ? " =" : " = ") << value << "\n";
  }
}

std::size_t default_hill_k(std::size_t n) {
  return static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
}

// ----------------------------------------------------------------- simulate

void write_path(const std::filesystem::path& path, std::string_view schema,
                std::string_view index_name, const std::vector<PathPoint>& rows) {
  CsvWriter w(path, schema, 1, {index_name, "price", "log_return", "sentiment", "num_switches"});
  for (const auto& r : rows) {
    w << r.step << r.price << r.log_return << r.sentiment << r.switches;
    w.end_row();
  }
}

void write_threshold_rows(CsvWriter& w, const MarketState& state, std::int64_t step,
                          std::span<const double> rel_edges) {
  std::vector<double> edges(rel_edges.begin(), rel_edges.end());
  for (double& e : edges) e *= state.price;
  for (auto side : {ThresholdSide::lower, ThresholdSide::upper}) {
    const auto d = threshold_density(state, side, true, edges);
    const char* side_name = side == ThresholdSide::lower ? "lower" : "upper";
    for (std::size_t h = 0; h < d.histograms.size(); ++h) {
      const auto& hist = d.histograms[h];
      const double inf = std::numeric_limits<double>::infinity();
      w << step << side_name << d.states[h] << -inf << rel_edges.front() << hist.underflow;
      w.end_row();
      for (std::size_t b = 0; b < hist.counts.size(); ++b) {
        w << step << side_name << d.states[h] << rel_edges[b] << rel_edges[b + 1]
          << hist.counts[b];
        w.end_row();
      }
      w << step << side_name << d.states[h] << rel_edges.back() << inf << hist.overflow;
      w.end_row();
    }
  }
}

std::vector<std::string> run_simulate(const Config& c, const std::filesystem::path& dir) {
  const MarketParams p = market_params(c);
  const auto days = at_least(c, "simulate", "days", 1);
  const auto max_lag = static_cast<std::size_t>(at_least(c, "simulate", "max_lag", 1));
  const auto hill_k = static_cast<std::size_t>(at_least(c, "simulate", "hill_k", 0));
  const auto bins = static_cast<std::size_t>(at_least(c, "simulate", "hist_bins", 1));
  const double hist_min = positive(c, "simulate", "hist_min");
  const double hist_max = positive(c, "simulate", "hist_max");
  if (!(hist_max > hist_min)) c.fail("simulate", "hist_max", "must exceed simulate.hist_min");
  const auto rel_edges = uniform_edges(hist_min, hist_max, bins);

  Engine init = make_engine(p.seed, Stream::initialization);
  const MarketState initial = initialize(p, init);

  const std::int64_t report_every = std::max<std::int64_t>(1, days / 10) * p.substeps_per_day;
  RunOptions opts;
  opts.observer = [&](const MarketState& s) {
    if (s.step_index % report_every == 0)
      std::cerr << "simulate: day " << s.step_index / p.substeps_per_day << "/" << days << "\n";
  };
  const RunResult r = run(p, days, opts);

  write_path(dir / "price.csv", "market_path", "step", r.path);
  {
    std::vector<PathPoint> daily(r.daily.begin() + 1, r.daily.end());
    write_path(dir / "returns.csv", "daily_returns", "day", daily);
  }
  {
    CsvWriter w(dir / "sentiment.csv", "sentiment", 1, {"step", "sentiment", "num_switches"});
    for (const auto& pt : r.path) {
      w << pt.step << pt.sentiment << pt.switches;
      w.end_row();
    }
  }
  {
    CsvWriter w(dir / "thresholds_hist.csv", "threshold_histogram", 1,
                {"step", "side", "state", "bin_lo", "bin_hi", "count"});
    write_threshold_rows(w, initial, 0, rel_edges);
    write_threshold_rows(w, r.final_state, r.final_state.step_index, rel_edges);
  }
  write_summary(dir / "summary.csv", r.returns.daily_log_returns, max_lag, hill_k);
  return {"price.csv", "returns.csv", "sentiment.csv", "thresholds_hist.csv", "summary.csv"};
}

// ------------------------------------------------------------------ cascade

std::vector<std::string> run_cascade_cmd(const Config& c, const std::filesystem::path& dir) {
  const ThresholdField field = cascade_field(c);
  CascadeOptions opts;
  opts.max_switches = at_least(c, "cascade", "max_switches", 1);
  opts.record_switches = c.boolean("cascade", "record_switches");
  const std::uint64_t seed = c.unsigned_integer("run", "seed");

  std::vector<CascadeOutcome> outcomes;
  if (field.generator) {
    const auto n = static_cast<std::size_t>(at_least(c, "cascade", "samples", 1));
    outcomes = sample_cascades(field, n, seed, opts);
  } else {
    outcomes.push_back(run_cascade(field, positive(c, "cascade", "initiator_weight"), nullptr, opts));
  }

  CsvWriter w(dir / "cascades.csv", "cascade_outcomes", 1,
              {"replication", "drop", "switches", "bounce", "truncated"});
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    w << i << o.total_drop << o.num_switches << o.terminal_bounce << (o.truncated ? 1 : 0);
    w.end_row();
  }
  std::vector<std::string> files{"cascades.csv"};
  if (opts.record_switches) {
    CsvWriter s(dir / "switches.csv", "cascade_switches", 1,
                {"replication", "agent", "offset", "jump"});
    for (std::size_t i = 0; i < outcomes.size(); ++i)
      for (const auto& sw : outcomes[i].switches) {
        s << i << sw.agent << sw.offset << sw.jump;
        s.end_row();
      }
    files.push_back("switches.csv");
  }
  return files;
}

// ---------------------------------------------------------------- queue-sim

std::vector<std::string> run_queue_sim(const Config& c, const std::filesystem::path& dir) {
  const QueueParams q = queue_params(c);
  const auto n = static_cast<std::size_t>(at_least(c, "queue", "samples", 1));
  BusyPeriodOptions opts;
  opts.max_duration = positive_or_inf(c);
  opts.threads = static_cast<unsigned>(at_least(c, "queue", "threads", 0));
  const auto s = sample_busy_periods(q, n, c.unsigned_integer("run", "seed"), opts);

  {
    CsvWriter w(dir / "busy_periods.csv", "busy_periods", 1,
                {"duration", "served", "reneged", "offered_work", "cancelled_work"});
    for (std::size_t i = 0; i < s.size(); ++i) {
      w << s.durations[i] << s.customers_served[i] << s.reneged[i] << s.offered_work[i]
        << s.cancelled_work[i];
      w.end_row();
    }
  }
  CsvWriter w(dir / "queue_summary.csv", "queue_summary", 1, {"metric", "value"});
  auto row = [&](const char* name, double v) {
    w << name << v;
    w.end_row();
  };
  row("samples", static_cast<double>(s.size()));
  row("truncated", static_cast<double>(s.truncated_count));
  row("utilization", q.utilization());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (s.size() > 0) {
    const auto x = as_array(s.durations);
    row("mean", sample_mean(x));
    row("moment2", raw_moment(x, 2));
    row("moment4", raw_moment(x, 4));
  }
  const bool classical = q.reneging.kind == RenegingKind::none && q.arrival.is_constant() &&
                         q.utilization() < 1;
  const double lambda = q.arrival.max_rate();
  row("mean_formula", classical ? busy_mean(lambda, q.service.mean()) : nan);
  const ServiceMoments m{q.service.moment(1), q.service.moment(2), q.service.moment(3),
                         q.service.moment(4)};
  row("moment4_formula", classical && std::isfinite(m.m4) ? busy_moment4(lambda, m) : nan);
  return {"busy_periods.csv", "queue_summary.csv"};
}

// ----------------------------------------------------------- queue-analytic

std::vector<double> grid(const Config& c) {
  const double step = positive(c, "analytic", "t_step");
  const double t_max = positive(c, "analytic", "t_max");
  if (t_max < step) c.fail("analytic", "t_max", "must be >= analytic.t_step");
  std::vector<double> ts;
  const auto n = static_cast<std::size_t>(std::floor(t_max / step * (1 + 1e-12)));
  for (std::size_t i = 1; i <= n; ++i) ts.push_back(static_cast<double>(i) * step);
  return ts;
}

std::vector<std::string> run_queue_analytic(const Config& c, const std::filesystem::path& dir) {
  const std::string mode = c.text("analytic", "mode");
  if (mode != "tabulate" && mode != "compare")
    c.fail("analytic", "mode", "expected 'tabulate' or 'compare'");
  const double lambda = positive(c, "analytic", "lambda");
  const double mu = positive(c, "analytic", "mu");
  if (!(lambda < mu)) c.fail("analytic", "lambda", "requires lambda < mu (rho < 1)");
  const TailSpec tail{positive(c, "analytic", "tail_alpha"),
                      positive(c, "analytic", "tail_constant")};
  if (tail.alpha < 1) c.fail("analytic", "tail_alpha", "must be >= 1");
  const double rho = lambda / mu;
  const auto ts = grid(c);
  const auto cdf = busy_cdf_mm1_sorted(ts, lambda, mu);

  if (mode == "tabulate") {
    CsvWriter w(dir / "tabulate.csv", "busy_period_table", 1,
                {"t", "density", "cdf", "tail_prediction"});
    for (std::size_t i = 0; i < ts.size(); ++i) {
      w << ts[i] << busy_density_mm1(ts[i], lambda, mu) << cdf[i]
        << tail_prediction(ts[i], rho, tail);
      w.end_row();
    }
    return {"tabulate.csv"};
  }

  const auto n = static_cast<std::size_t>(at_least(c, "analytic", "samples", 1));
  QueueParams q;
  q.arrival = RateFunction::constant(lambda);
  q.service = Exponential{mu};
  auto s = sample_busy_periods(q, n, c.unsigned_integer("run", "seed"));
  std::vector<double> sorted = s.durations;
  std::sort(sorted.begin(), sorted.end());
  const auto model = busy_cdf_mm1_sorted(sorted, lambda, mu);
  const double sup = ks_distance_one_sample(sorted, model);
  {
    CsvWriter w(dir / "compare.csv", "busy_period_compare", 1,
                {"t", "analytic_cdf", "monte_carlo_cdf", "difference"});
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const auto below = std::upper_bound(sorted.begin(), sorted.end(), ts[i]) - sorted.begin();
      const double emp = static_cast<double>(below) / static_cast<double>(sorted.size());
      w << ts[i] << cdf[i] << emp << emp - cdf[i];
      w.end_row();
    }
  }
  CsvWriter w(dir / "compare_summary.csv", "busy_period_compare_summary", 1, {"metric", "value"});
  auto row = [&](const char* name, double v) {
    w << name << v;
    w.end_row();
  };
  const auto x = as_array(s.durations);
  const ServiceMoments m{1 / mu, 2 / (mu * mu), 6 / std::pow(mu, 3), 24 / std::pow(mu, 4)};
  row("samples", static_cast<double>(s.size()));
  row("sup_distance", sup);
  row("mean_formula", busy_mean(lambda, 1 / mu));
  row("mean_monte_carlo", sample_mean(x));
  row("moment4_formula", busy_moment4(lambda, m));
  row("moment4_lst_derivative",
      central_derivative([&](double u) { return busy_lst_mm1(u, lambda, mu); }, 0.0, 4, 2e-3));
  row("moment4_monte_carlo", raw_moment(x, 4));
  return {"compare.csv", "compare_summary.csv"};
}

// ------------------------------------------------------------------ analyze

std::vector<std::string> run_analyze(const Config& c, const std::filesystem::path& dir) {
  const std::string input = c.text("analysis", "input");
  if (input.empty()) c.fail("analysis", "input", "a returns CSV path is required");
  if (!std::filesystem::exists(input)) c.fail("analysis", "input", "file does not exist");
  const auto table = read_csv(input);
  const std::string col_name = c.text("analysis", "column");
  int col = table.header.empty() ? 0 : table.column(col_name);
  if (col < 0) {
    if (table.header.size() == 1) {
      col = 0;
    } else {
      c.fail("analysis", "column", "no such column in " + input);
    }
  }
  std::vector<double> values;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string where = input + ":" + std::to_string(table.row_lines[i]) + ": ";
    if (static_cast<std::size_t>(col) >= row.size())
      throw ConfigError(where + "row has no column " + std::to_string(col + 1),
                        table.row_lines[i]);
    try {
      values.push_back(parse_double(row[static_cast<std::size_t>(col)]));
    } catch (const InvalidInput& e) {
      throw ConfigError(where + e.what(), table.row_lines[i]);
    }
    if (!std::isfinite(values.back()))
      throw ConfigError(where + "non-finite value", table.row_lines[i]);
  }
  if (values.size() < 4) c.fail("analysis", "input", "needs at least 4 values");
  write_summary(dir / "summary.csv", values,
                static_cast<std::size_t>(at_least(c, "analysis", "max_lag", 1)),
                static_cast<std::size_t>(at_least(c, "analysis", "hill_k", 0)));
  return {"summary.csv"};
}

}  // namespace

Config resolve_config(const Invocation& inv) {
  Config c = Config::defaults();
  if (inv.config_path) c.load_file(*inv.config_path);
  for (const auto& o : inv.overrides) c.apply_override(o);
  if (inv.seed) c.set("run", "seed", std::to_string(*inv.seed), "--seed");
  c.unsigned_integer("run", "seed");
  return c;
}

std::filesystem::path resolve_out_dir(const Invocation& inv) {
  if (inv.out_dir) return *inv.out_dir;
  if (const char* env = std::getenv(kOutEnv); env && *env) return env;
  return "out";
}

MarketParams market_params(const Config& c) {
  MarketParams p;
  p.num_agents = static_cast<std::size_t>(at_least(c, "market", "num_agents", 1));
  p.timestep = positive(c, "market", "timestep");
  p.coupling = nonnegative(c, "market", "coupling");
  p.threshold_noise = nonnegative(c, "market", "threshold_noise");
  const std::string scale = c.text("market", "noise_scale");
  if (scale == "std_dev") {
    p.noise_scale = NoiseScale::std_dev;
  } else if (scale == "variance") {
    p.noise_scale = NoiseScale::variance;
  } else {
    c.fail("market", "noise_scale", "expected 'std_dev' or 'variance'");
  }
  p.reset_low = range(c, "market", "reset_low_min", "reset_low_max", true);
  p.reset_high = range(c, "market", "reset_high_min", "reset_high_max", true);
  p.herding = range(c, "market", "herding_min", "herding_max", false);
  const std::string vol = c.text("market", "volatility");
  if (vol == "constant") {
    p.volatility = VolatilityFn::constant_one();
  } else if (vol == "linear") {
    p.volatility = VolatilityFn::sentiment_linear(c.real("market", "volatility_a"),
                                                  c.real("market", "volatility_b"));
    if (!std::isfinite(p.volatility.a)) c.fail("market", "volatility_a", "must be finite");
    if (!std::isfinite(p.volatility.b)) c.fail("market", "volatility_b", "must be finite");
  } else {
    c.fail("market", "volatility", "expected 'linear' or 'constant'");
  }
  p.substeps_per_day = static_cast<int>(at_least(c, "market", "substeps_per_day", 1));
  p.initial_price = positive(c, "market", "initial_price");
  p.initial_long_fraction = probability(c, "market", "initial_long_fraction");
  p.seed = c.unsigned_integer("run", "seed");
  try {
    p.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("[market]: ") + e.what());
  }
  return p;
}

QueueParams queue_params(const Config& c) {
  QueueParams q;
  q.arrival = rate_function(c, "queue", "arrival");
  if (q.arrival.is_zero()) c.fail("queue", "arrival", "arrival rate must be positive somewhere");
  q.service = distribution(c, "queue", "service");
  const std::string kind = c.text("queue", "reneging");
  if (kind == "none") {
    q.reneging.kind = RenegingKind::none;
  } else if (kind == "per_customer") {
    q.reneging.kind = RenegingKind::per_customer;
  } else if (kind == "anti_customer") {
    q.reneging.kind = RenegingKind::anti_customer;
  } else {
    c.fail("queue", "reneging", "expected 'none', 'per_customer' or 'anti_customer'");
  }
  if (q.reneging.kind != RenegingKind::none) {
    q.reneging.rate = rate_function(c, "queue", "reneging_rate");
    if (q.reneging.rate.is_zero())
      c.fail("queue", "reneging_rate", "must be positive somewhere when reneging is enabled");
    q.reneging.cancel_size = distribution(c, "queue", "cancel_size");
  }
  const double max_duration = positive_or_inf(c);
  if (q.reneging.kind == RenegingKind::none && !(q.tail_utilization() < 1) &&
      std::isinf(max_duration))
    c.fail("queue", "arrival",
           "busy periods are not a.s. finite (utilization " + format_double(q.tail_utilization()) +
               " >= 1); set queue.max_duration or enable reneging");
  return q;
}

ThresholdField cascade_field(const Config& c) {
  ThresholdField f;
  f.coupling = nonnegative(c, "cascade", "coupling");
  f.total_weight = positive(c, "cascade", "total_weight");
  const std::string path = c.text("cascade", "field");
  if (!path.empty()) {
    if (!std::filesystem::exists(path)) c.fail("cascade", "field", "file does not exist");
    const auto t = read_csv(path);
    const int io = t.column("offset"), is = t.column("state"), iw = t.column("weight");
    if (io < 0 || is < 0 || iw < 0)
      c.fail("cascade", "field", "needs a header with columns offset, state, weight");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& row = t.rows[i];
      const int line = t.row_lines[i];
      const std::string where = path + ":" + std::to_string(line) + ": ";
      try {
        const auto at = [&](int j) {
          if (static_cast<std::size_t>(j) >= row.size()) throw InvalidInput("missing field");
          return row[static_cast<std::size_t>(j)];
        };
        ThresholdEntry e{parse_double(at(io)), static_cast<int>(parse_int(at(is))),
                         parse_double(at(iw))};
        if (!(e.offset >= 0) || !std::isfinite(e.offset)) throw InvalidInput("offset must be >= 0");
        if (e.state != 1 && e.state != -1) throw InvalidInput("state must be 1 or -1");
        if (!(e.weight > 0) || !std::isfinite(e.weight)) throw InvalidInput("weight must be > 0");
        f.entries.push_back(e);
      } catch (const InvalidInput& e) {
        throw ConfigError(where + e.what(), line);
      }
    }
  } else {
    FieldGenerator g;
    g.rate = positive(c, "cascade", "rate");
    g.weights = distribution(c, "cascade", "weights");
    g.anti_fraction = probability(c, "cascade", "anti_fraction");
    f.generator = g;
  }
  f.normalize();
  return f;
}

void write_summary(const std::filesystem::path& path, std::span<const double> returns,
                   std::size_t max_lag, std::size_t hill_k) {
  CsvWriter w(path, "stylized_facts", 1, {"metric", "lag", "value"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto row = [&](const char* name, std::string_view lag, double v) {
    w << name << lag << v;
    w.end_row();
  };
  const auto x = as_array(returns);
  const std::size_t n = returns.size();
  row("samples", "", static_cast<double>(n));
  auto guarded = [&](const char* name, auto&& f) {
    try {
      row(name, "", f());
    } catch (const std::exception& e) {
      std::cerr << "summary: " << name << " undefined: " << e.what() << "\n";
      row(name, "", nan);
    }
  };
  guarded("mean", [&] { return sample_mean(x); });
  guarded("std_dev", [&] { return std::sqrt(sample_variance(x)); });
  guarded("excess_kurtosis", [&] { return excess_kurtosis(x); });

  const std::size_t k = hill_k ? hill_k : default_hill_k(n);
  row("hill_k", "", static_cast<double>(k));
  TailEstimate est{nan, k, nan};
  try {
    est = hill_estimate(x, k);
  } catch (const std::exception& e) {
    std::cerr << "summary: hill estimate undefined: " << e.what() << "\n";
  }
  row("hill_exponent", "", est.exponent);
  row("hill_standard_error", "", est.standard_error);
  HillSweep sweep{{}, {}, nan, nan, false};
  bool swept = false;
  try {
    sweep = hill_sweep(x, hill_grid(n));
    swept = true;
  } catch (const std::exception& e) {
    std::cerr << "summary: hill sweep undefined: " << e.what() << "\n";
  }
  row("hill_sweep_median", "", sweep.median_exponent);
  row("hill_sweep_relative_slope", "", sweep.relative_slope);
  row("hill_drifts_as_k_shrinks", "", swept ? (sweep.drifts_as_k_shrinks ? 1.0 : 0.0) : nan);

  std::size_t lags = max_lag;
  if (n < 8) {
    lags = 0;
  } else if (4 * lags >= n) {
    lags = (n - 1) / 4;
    std::cerr << "summary: max_lag reduced to " << lags << " for " << n << " samples\n";
  }
  if (lags == 0) return;
  try {
    const auto a = autocorrelation(x, lags);
    const Eigen::ArrayXd abs_x = x.abs();
    const auto b = autocorrelation(abs_x, lags);
    row("acf_band", "", a.band);
    row("acf_returns_inside_band", "", a.fraction_inside_band());
    row("acf_abs_returns_inside_band", "", b.fraction_inside_band());
    for (std::size_t l = 1; l <= lags; ++l)
      row("acf_returns", std::to_string(l), a.values[static_cast<Eigen::Index>(l - 1)]);
    for (std::size_t l = 1; l <= lags; ++l)
      row("acf_abs_returns", std::to_string(l), b.values[static_cast<Eigen::Index>(l - 1)]);
  } catch (const std::exception& e) {
    std::cerr << "summary: autocorrelation undefined: " << e.what() << "\n";
  }
}

int execute(const Invocation& inv) {
  try {
    const Config c = resolve_config(inv);
    const auto dir = resolve_out_dir(inv);
    std::vector<std::string> files;
    // Validate every parameter block the command reads before creating output.
    if (inv.command == "simulate") {
      market_params(c);
    } else if (inv.command == "cascade") {
      cascade_field(c);
    } else if (inv.command == "queue-sim") {
      queue_params(c);
    } else if (inv.command != "queue-analytic" && inv.command != "analyze") {
      std::cerr << "cascadeq: unknown command '" << inv.command << "'\n";
      return kExitUsage;
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      std::cerr << "cascadeq: cannot create output directory '" << dir.string()
                << "': " << ec.message() << "\n";
      return kExitRuntime;
    }
    if (inv.command == "simulate") files = run_simulate(c, dir);
    if (inv.command == "cascade") files = run_cascade_cmd(c, dir);
    if (inv.command == "queue-sim") files = run_queue_sim(c, dir);
    if (inv.command == "queue-analytic") files = run_queue_analytic(c, dir);
    if (inv.command == "analyze") files = run_analyze(c, dir);
    write_manifest(dir, inv.command, c, files);
    std::cerr << inv.command << ": wrote";
    for (const auto& f : files) std::cerr << " " << f;
    std::cerr << " manifest.ini to " << dir.string() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "cascadeq: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "cascadeq: error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace cascadeq::cli
