#include "cascadeq/queue_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <regex>
#include <sstream>
#include <thread>

#include "cascadeq/error.hpp"
#include "cascadeq/text.hpp"

namespace cascadeq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

RateFunction::RateFunction(std::vector<double> time_breaks,
                           std::vector<std::vector<double>> levels)
    : breaks_(std::move(time_breaks)), levels_(std::move(levels)) {
  if (levels_.size() != breaks_.size() + 1)
    throw InvalidInput("rate function needs one level table per time segment");
  if (!std::is_sorted(breaks_.begin(), breaks_.end()) ||
      std::adjacent_find(breaks_.begin(), breaks_.end()) != breaks_.end())
    throw InvalidInput("rate function time breaks must be strictly increasing");
  for (double b : breaks_)
    if (!(b > 0) || !std::isfinite(b)) throw InvalidInput("rate function breaks must be > 0");
  for (const auto& seg : levels_) {
    if (seg.empty()) throw InvalidInput("rate function segment has no levels");
    for (double r : seg)
      if (!(r >= 0) || !std::isfinite(r))
        throw InvalidInput("rates must be nonnegative and finite");
  }
}

double RateFunction::operator()(double t, std::size_t n) const {
  const auto seg = static_cast<std::size_t>(
      std::upper_bound(breaks_.begin(), breaks_.end(), t) - breaks_.begin());
  const auto& lv = levels_[seg];
  return lv[std::min(n, lv.size() - 1)];
}

double RateFunction::next_break_after(double t) const {
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  return it == breaks_.end() ? kInf : *it;
}

bool RateFunction::is_constant() const noexcept {
  return breaks_.empty() && levels_.front().size() == 1;
}

bool RateFunction::is_zero() const noexcept { return max_rate() == 0.0; }

double RateFunction::max_rate() const noexcept {
  double m = 0.0;
  for (const auto& seg : levels_)
    for (double r : seg) m = std::max(m, r);
  return m;
}

std::string RateFunction::describe() const {
  if (is_constant()) return format_double(levels_.front().front());
  std::string out;
  for (std::size_t j = 0; j < levels_.size(); ++j) {
    if (j > 0) out += ";" + format_double(breaks_[j - 1]) + ":";
    out += "[";
    for (std::size_t i = 0; i < levels_[j].size(); ++i) {
      if (i > 0) out += "|";
      out += format_double(levels_[j][i]);
    }
    out += "]";
  }
  return out;
}

// Grammar: SEG (';' BREAK ':' SEG)*, SEG = number | '[' number ('|' number)* ']'.
RateFunction RateFunction::parse(const std::string& text) {
  std::vector<double> breaks;
  std::vector<std::vector<double>> levels;
  const auto parts = split(trim(text), ';');
  for (std::size_t j = 0; j < parts.size(); ++j) {
    std::string_view seg = trim(parts[j]);
    if (j > 0) {
      const auto colon = seg.find(':');
      if (colon == std::string_view::npos)
        throw InvalidInput("rate segment '" + std::string(seg) + "' lacks 'time:' prefix");
      breaks.push_back(parse_double(seg.substr(0, colon)));
      seg = trim(seg.substr(colon + 1));
    }
    std::vector<double> lv;
    if (!seg.empty() && seg.front() == '[') {
      if (seg.back() != ']') throw InvalidInput("unterminated '[' in rate '" + text + "'");
      for (auto v : split(seg.substr(1, seg.size() - 2), '|')) lv.push_back(parse_double(v));
    } else {
      lv.push_back(parse_double(seg));
    }
    levels.push_back(std::move(lv));
  }
  return RateFunction(std::move(breaks), std::move(levels));
}

void QueueParams::validate() const {
  if (!(arrival.max_rate() > 0)) throw InvalidInput("arrival rate must be positive somewhere");
  if (reneging.kind != RenegingKind::none && reneging.rate.is_zero())
    throw InvalidInput("reneging enabled with zero rate");
}

namespace {

struct Replication {
  double duration = 0;
  std::int64_t served = 0;
  std::int64_t reneged = 0;
  double offered = 0;
  double cancelled = 0;
  bool truncated = false;
};

struct Waiting {
  double work;
  double renege_at;  // cumulative reneging hazard at which this customer leaves
};

double unit_exponential(Engine& rng) { return -std::log(rng.uniform_open()); }

Replication simulate_one(const QueueParams& p, std::uint64_t seed, std::uint64_t index,
                         double max_duration) {
  Engine arrivals = make_engine(seed, Stream::arrivals, index);
  Engine services = make_engine(seed, Stream::services, index);
  Engine reneging = make_engine(seed, Stream::reneging, index);

  const RenegingKind kind = p.reneging.kind;
  const bool time_varying = !p.arrival.is_constant() ||
                            (kind != RenegingKind::none && !p.reneging.rate.is_constant());

  Replication r;
  double t = 0.0;
  double in_service = p.service.sample(services);
  r.offered = in_service;
  std::deque<Waiting> queue;

  double arrival_clock = unit_exponential(arrivals);
  double anti_clock = kind == RenegingKind::anti_customer ? unit_exponential(reneging) : kInf;
  double hazard = 0.0;  // integrated per-customer reneging rate

  while (true) {
    const std::size_t n = queue.size() + 1;
    const double a = p.arrival(t, n);
    const double nu = kind == RenegingKind::anti_customer ? p.reneging.rate(t, n) : 0.0;
    const double theta = kind == RenegingKind::per_customer ? p.reneging.rate(t, n) : 0.0;

    const double dt_departure = in_service;
    const double dt_arrival = a > 0 ? arrival_clock / a : kInf;
    const double dt_anti = nu > 0 ? anti_clock / nu : kInf;
    double dt_renege = kInf;
    std::size_t renege_idx = 0;
    if (theta > 0 && !queue.empty()) {
      auto it = std::min_element(queue.begin(), queue.end(), [](const Waiting& x, const Waiting& y) {
        return x.renege_at < y.renege_at;
      });
      renege_idx = static_cast<std::size_t>(it - queue.begin());
      dt_renege = std::max(0.0, (it->renege_at - hazard) / theta);
    }
    const double dt_break = time_varying ? p.arrival.next_break_after(t) - t : kInf;
    const double dt_break_renege =
        time_varying && kind != RenegingKind::none ? p.reneging.rate.next_break_after(t) - t
                                                   : kInf;

    enum class Ev { departure, arrival, anti, renege, rate_change } ev = Ev::departure;
    double dt = dt_departure;
    // Departures win ties.
    if (dt_arrival < dt) { dt = dt_arrival; ev = Ev::arrival; }
    if (dt_anti < dt) { dt = dt_anti; ev = Ev::anti; }
    if (dt_renege < dt) { dt = dt_renege; ev = Ev::renege; }
    if (std::min(dt_break, dt_break_renege) < dt) {
      dt = std::min(dt_break, dt_break_renege);
      ev = Ev::rate_change;
    }

    if (t + dt > max_duration) {
      r.truncated = true;
      r.duration = max_duration;
      return r;
    }

    t += dt;
    if (ev == Ev::departure) {
      in_service = 0.0;
    } else {
      in_service -= dt;
    }
    if (a > 0) arrival_clock -= a * dt;
    if (nu > 0) anti_clock -= nu * dt;
    hazard += theta * dt;

    switch (ev) {
      case Ev::departure:
        ++r.served;
        if (queue.empty()) {
          r.duration = t;
          return r;
        }
        in_service = queue.front().work;
        queue.pop_front();
        break;
      case Ev::arrival: {
        const double work = p.service.sample(services);
        r.offered += work;
        const double renege_at =
            kind == RenegingKind::per_customer ? hazard + unit_exponential(reneging) : kInf;
        queue.push_back({work, renege_at});
        arrival_clock = unit_exponential(arrivals);
        break;
      }
      case Ev::anti: {
        double cancel = p.reneging.cancel_size.sample(reneging);
        anti_clock = unit_exponential(reneging);
        while (cancel > 0 && !queue.empty()) {
          Waiting& last = queue.back();
          if (last.work <= cancel) {
            cancel -= last.work;
            r.cancelled += last.work;
            ++r.reneged;
            queue.pop_back();
          } else {
            last.work -= cancel;
            r.cancelled += cancel;
            cancel = 0;
          }
        }
        if (cancel > 0) {
          if (in_service <= cancel) {
            r.cancelled += in_service;
            ++r.reneged;
            r.duration = t;
            return r;
          }
          in_service -= cancel;
          r.cancelled += cancel;
        }
        break;
      }
      case Ev::renege:
        r.cancelled += queue[renege_idx].work;
        ++r.reneged;
        queue.erase(queue.begin() + static_cast<std::ptrdiff_t>(renege_idx));
        break;
      case Ev::rate_change:
        break;
    }
  }
}

}  // namespace

BusyPeriodSample sample_busy_periods(const QueueParams& params, std::size_t n_samples,
                                     std::uint64_t seed, const BusyPeriodOptions& options) {
  params.validate();
  if (n_samples < 1) throw InvalidInput("sample_busy_periods: n_samples must be >= 1");
  if (!(options.max_duration > 0)) throw InvalidInput("max_duration must be positive");
  const double rho = params.tail_utilization();
  if (params.reneging.kind == RenegingKind::none && !(rho < 1) &&
      std::isinf(options.max_duration))
    throw ConfigError("busy period is not almost surely finite (rho = " + format_double(rho) +
                      " >= 1); set a finite max_duration");

  std::vector<Replication> reps(n_samples);
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                                                         std::min<std::size_t>(n_samples, 64))));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      reps[i] = simulate_one(params, seed, i, options.max_duration);
  };
  if (threads == 1) {
    work(0, n_samples);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n_samples + threads - 1) / threads;
    for (unsigned k = 0; k < threads; ++k) {
      const std::size_t b = k * chunk;
      const std::size_t e = std::min(n_samples, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
  }

  BusyPeriodSample out;
  out.durations.reserve(n_samples);
  for (const auto& r : reps) {
    if (r.truncated) {
      ++out.truncated_count;
      continue;
    }
    out.durations.push_back(r.duration);
    out.customers_served.push_back(r.served);
    out.reneged.push_back(r.reneged);
    out.offered_work.push_back(r.offered);
    out.cancelled_work.push_back(r.cancelled);
  }
  return out;
}

}  // namespace cascadeq
