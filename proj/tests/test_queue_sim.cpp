#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cascadeq/error.hpp"
#include "cascadeq/queue_sim.hpp"
#include "cascadeq/stats.hpp"

using namespace cascadeq;

namespace {

QueueParams mm1(double lambda, double mu) {
  QueueParams p;
  p.arrival = RateFunction::constant(lambda);
  p.service = Exponential{mu};
  return p;
}

}  // namespace

TEST_CASE("m/m/1 busy period mean and second moment") {
  const auto s = sample_busy_periods(mm1(0.5, 1.0), 200000, 11);
  REQUIRE(s.size() == 200000);
  const auto x = as_array(s.durations);
  // E = 2, Var = E[Y^2]/(1-rho)^3 - 4 = 12
  const double se = std::sqrt(12.0 / 200000.0);
  CHECK(std::abs(sample_mean(x) - 2.0) < 4 * se);
  CHECK(raw_moment(x, 2) == doctest::Approx(16.0).epsilon(0.05));
  // mean number served 1/(1-rho)
  const double served = std::accumulate(s.customers_served.begin(), s.customers_served.end(), 0.0);
  CHECK(served / 200000.0 == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("m/d/1 durations sit on the service lattice") {
  QueueParams p;
  p.arrival = RateFunction::constant(0.5);
  p.service = Deterministic{1.0};
  const auto s = sample_busy_periods(p, 20000, 3);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(std::abs(s.durations[i] - double(s.customers_served[i])) < 1e-9 * s.durations[i]);
  }
  CHECK(sample_mean(as_array(s.durations)) == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("work conservation") {
  QueueParams p = mm1(0.6, 1.0);
  for (auto kind : {RenegingKind::none, RenegingKind::per_customer, RenegingKind::anti_customer}) {
    p.reneging.kind = kind;
    p.reneging.rate = RateFunction::constant(kind == RenegingKind::none ? 0.0 : 0.3);
    p.reneging.cancel_size = Exponential{1.0};
    const auto s = sample_busy_periods(p, 5000, 5);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double expect = s.offered_work[i] - s.cancelled_work[i];
      CHECK(std::abs(s.durations[i] - expect) <= 1e-9 * std::max(1.0, s.offered_work[i]));
      if (kind == RenegingKind::none) CHECK(s.reneged[i] == 0);
    }
  }
}

TEST_CASE("reneging shortens every coupled busy period") {
  // same seed => same arrival and service streams
  QueueParams base = mm1(0.8, 1.0);
  const auto plain = sample_busy_periods(base, 5000, 21);
  QueueParams ren = base;
  ren.reneging.kind = RenegingKind::per_customer;
  ren.reneging.rate = RateFunction::constant(0.5);
  const auto with = sample_busy_periods(ren, 5000, 21);
  REQUIRE(plain.size() == with.size());
  for (std::size_t i = 0; i < plain.size(); ++i) CHECK(with.durations[i] <= plain.durations[i] + 1e-12);

  QueueParams anti = base;
  anti.reneging.kind = RenegingKind::anti_customer;
  anti.reneging.rate = RateFunction::constant(0.2);
  anti.reneging.cancel_size = Exponential{1.0};
  const auto a = sample_busy_periods(anti, 5000, 21);
  for (std::size_t i = 0; i < plain.size(); ++i) CHECK(a.durations[i] <= plain.durations[i] + 1e-12);
}

TEST_CASE("output does not depend on thread count") {
  QueueParams p = mm1(0.5, 1.0);
  const auto one = sample_busy_periods(p, 3000, 8, {.threads = 1});
  const auto many = sample_busy_periods(p, 3000, 8, {.threads = 7});
  CHECK(one.durations == many.durations);
  CHECK(one.customers_served == many.customers_served);
}

TEST_CASE("unstable queue needs a horizon") {
  CHECK_THROWS_AS(sample_busy_periods(mm1(1.0, 1.0), 10, 1), ConfigError);
  CHECK_THROWS_AS(sample_busy_periods(mm1(2.0, 1.0), 10, 1), ConfigError);
  const auto s = sample_busy_periods(mm1(2.0, 1.0), 200, 1, {.max_duration = 50.0});
  // extinction probability 1/rho = 1/2
  CHECK(s.truncated_count > 60);
  CHECK(s.truncated_count < 140);
  CHECK(s.size() + std::size_t(s.truncated_count) == 200);
  for (double d : s.durations) CHECK(d <= 50.0);
  // reneging makes rho >= 1 fine
  QueueParams r = mm1(2.0, 1.0);
  r.reneging.kind = RenegingKind::per_customer;
  r.reneging.rate = RateFunction::constant(1.0);
  CHECK(sample_busy_periods(r, 100, 1).size() == 100);
}

TEST_CASE("state dependent rates") {
  // arrivals only while exactly one customer is present: each service sees
  // an arrival with probability 5/6, so the number served is geometric, mean 6
  QueueParams p;
  p.arrival = RateFunction::by_length({0.0, 5.0, 0.0});
  p.service = Exponential{1.0};
  const auto s = sample_busy_periods(p, 40000, 4);
  REQUIRE(s.size() == 40000);
  std::vector<double> served(s.customers_served.begin(), s.customers_served.end());
  CHECK(std::abs(sample_mean(as_array(served)) - 6.0) < 4 * std::sqrt(30.0 / 40000.0));
  const auto ones = std::count(s.customers_served.begin(), s.customers_served.end(), 1);
  CHECK(double(ones) / 40000.0 == doctest::Approx(1.0 / 6.0).epsilon(0.05));
}

TEST_CASE("time dependent rates switch at the break") {
  // arrivals at rate 3 only before t = 0.5:
  // P(one customer) = E[exp(-3 min(Y, 0.5))] = 1/4 + 3/4 e^-2
  QueueParams p;
  p.arrival = RateFunction({0.5}, {{3.0}, {0.0}});
  p.service = Exponential{1.0};
  const auto s = sample_busy_periods(p, 20000, 9);
  REQUIRE(s.size() == 20000);
  const auto single = std::count(s.customers_served.begin(), s.customers_served.end(), 1);
  const double expect = 0.25 + 0.75 * std::exp(-2.0);
  CHECK(std::abs(double(single) / 20000.0 - expect) < 4 * std::sqrt(expect * (1 - expect) / 20000.0));
}

TEST_CASE("rate function text round trip") {
  for (const char* text : {"0.5", "[1|2|0]", "[1|2];3:0.25;7.5:[0|4]"}) {
    const auto r = RateFunction::parse(text);
    CHECK(RateFunction::parse(r.describe()).describe() == r.describe());
  }
  const auto r = RateFunction::parse("[1|2];3:0.25");
  CHECK(r(0.0, 1) == 2.0);
  CHECK(r(0.0, 0) == 1.0);
  CHECK(r(0.0, 9) == 2.0);
  CHECK(r(3.0, 1) == 0.25);
  CHECK(r.next_break_after(1.0) == 3.0);
  CHECK(std::isinf(r.next_break_after(3.0)));
  CHECK_THROWS_AS(RateFunction::parse("1;2"), InvalidInput);
  CHECK_THROWS_AS(RateFunction::parse("[1|x]"), InvalidInput);
  CHECK_THROWS_AS(RateFunction::parse("-1"), InvalidInput);
  CHECK_THROWS_AS(RateFunction::parse("1;0:2"), InvalidInput);
}
