#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cascadeq/distributions.hpp"
#include "cascadeq/queue_analytics.hpp"

using namespace cascadeq;

namespace {

// Busy-period density written as a mixture over the number served n:
//   sum_n lambda^(n-1) mu^n t^(2n-2) exp(-(lambda+mu)t) / (n! (n-1)!),
// each term evaluated in log space.
double density_oracle(double t, double lambda, double mu) {
  long double sum = 0;
  for (int n = 1; n < 5000; ++n) {
    const long double lg = (n - 1) * std::log((long double)lambda) + n * std::log((long double)mu) +
                           (2 * n - 2) * std::log((long double)t) - (lambda + mu) * t -
                           std::lgamma((long double)n + 1) - std::lgamma((long double)n);
    const long double term = std::exp(lg);
    sum += term;
    if (n > 10 && term < 1e-20L * sum) break;
  }
  return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("m/m/1 density matches the mixture series") {
  for (double t : {1e-3, 0.1, 0.5, 1.0, 3.0, 10.0, 40.0, 100.0, 300.0}) {
    INFO("t = " << t);
    const double a = busy_density_mm1(t, 0.5, 1.0);
    const double b = density_oracle(t, 0.5, 1.0);
    CHECK(std::abs(a - b) <= 1e-11 * b + 1e-300);
  }
  CHECK(busy_density_mm1(1.0, 0.2, 3.0) == doctest::Approx(density_oracle(1.0, 0.2, 3.0)).epsilon(1e-12));
}

TEST_CASE("m/m/1 density limits and normalization") {
  // t -> 0 the density tends to mu (a single service)
  CHECK(busy_density_mm1(1e-9, 0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
  boost::math::quadrature::gauss_kronrod<double, 31> gk;
  auto f = [](double t) { return busy_density_mm1(t, 0.5, 1.0); };
  auto tf = [](double t) { return t * busy_density_mm1(t, 0.5, 1.0); };
  const double mass = gk.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 25, 1e-13);
  const double mean = gk.integrate(tf, 0.0, std::numeric_limits<double>::infinity(), 25, 1e-13);
  CHECK(std::abs(mass - 1.0) < 1e-8);
  CHECK(std::abs(mean - 2.0) < 1e-6);
}

TEST_CASE("density domain errors") {
  CHECK_THROWS_AS(busy_density_mm1(1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(busy_density_mm1(1.0, 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(busy_density_mm1(0.0, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(busy_density_mm1(-1.0, 0.5, 1.0), DomainError);
}

TEST_CASE("cdf by quadrature and the sorted variant agree") {
  std::vector<double> ts{0.01, 0.2, 0.2, 1.0, 2.5, 7.0, 30.0, 200.0};
  const auto sorted = busy_cdf_mm1_sorted(ts, 0.5, 1.0);
  REQUIRE(sorted.size() == ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(sorted[i] == doctest::Approx(busy_cdf_mm1(ts[i], 0.5, 1.0)).epsilon(1e-11));
    if (i > 0) CHECK(sorted[i] >= sorted[i - 1]);
  }
  CHECK(busy_cdf_mm1(200.0, 0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(busy_cdf_mm1(0.0, 0.5, 1.0) == 0.0);
}

TEST_CASE("fourth moment formula") {
  CHECK(busy_moment4(0.5, {1, 2, 6, 24}) == doctest::Approx(8448.0).epsilon(1e-14));
  CHECK(busy_moment4(0.5, {1, 1, 1, 1}) == doctest::Approx(832.0).epsilon(1e-14));
  // lambda -> 0: a single service
  CHECK(busy_moment4(1e-12, {1, 2, 6, 24}) == doctest::Approx(24.0).epsilon(1e-9));
  CHECK_THROWS_AS(busy_moment4(1.0, {1, 2, 6, 24}), DomainError);
  CHECK_THROWS_AS(busy_moment4(0.5, {1, 0.5, 6, 24}), InvalidInput);
  CHECK(busy_mean(0.5, 1.0) == 2.0);
}

TEST_CASE("takacs iteration reproduces the closed form") {
  Distribution expo = Exponential{1.0};
  auto y = [&](double s) { return expo.lst(s); };
  for (double s = 0; s <= 10.0; s += 0.25) {
    INFO("s = " << s);
    CHECK(std::abs(takacs_lst(s, 0.5, y) - busy_lst_mm1(s, 0.5, 1.0)) < 1e-12);
  }
  CHECK(takacs_lst(0.0, 0.5, y) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("takacs derivative gives the mean busy period") {
  for (const Distribution& d : {Distribution(Exponential{1.0}), Distribution(Deterministic{1.0})}) {
    auto f = [&](double s) { return takacs_lst(s, 0.5, [&](double u) { return d.lst(u); }); };
    const double slope = central_derivative(f, 0.0, 1, 1e-3);
    CHECK(std::abs(-slope - 2.0) < 1e-6);
  }
}

TEST_CASE("fourth derivative of the closed form") {
  auto f = [](double s) { return busy_lst_mm1(s, 0.5, 1.0); };
  const double d4 = central_derivative(f, 0.0, 4, 2e-3);
  CHECK(std::abs(d4 - 8448.0) / 8448.0 < 1e-4);
  CHECK(central_derivative(f, 0.0, 1, 1e-3) == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(central_derivative([](double x) { return x * x * x * x; }, 0.7, 4, 0.1) ==
        doctest::Approx(24.0).epsilon(1e-9));
  CHECK_THROWS_AS(central_derivative(f, 0.0, 5, 1e-3), InvalidInput);
}

TEST_CASE("takacs reports failure instead of looping") {
  auto bad = [](double) { return std::numeric_limits<double>::quiet_NaN(); };
  CHECK_THROWS_AS(takacs_lst(0.0, 0.5, bad), NumericalError);
  auto slow = [](double u) { return 1.0 / (1.0 + u); };
  CHECK_THROWS_AS(takacs_lst(0.0, 1.0, slow, {1e-14, 50}), NumericalError);
}

TEST_CASE("tail prediction") {
  CHECK(tail_prediction(10.0, 0.5, {3.0, 1.0}) == doctest::Approx(16.0 / 1000.0).epsilon(1e-14));
  CHECK(tail_prediction(2.0, 0.0, {2.0, 3.0}) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK_THROWS_AS(tail_prediction(10.0, 1.0, {3.0, 1.0}), DomainError);
  CHECK_THROWS_AS(tail_prediction(-1.0, 0.5, {3.0, 1.0}), DomainError);
  CHECK_THROWS(tail_prediction(10.0, 0.5, {0.5, 1.0}));
}
