#include <doctest.h>

#include <cmath>

#include "cascadeq/distributions.hpp"
#include "cascadeq/error.hpp"
#include "cascadeq/stats.hpp"

using namespace cascadeq;

TEST_CASE("moments") {
  const Distribution e = Exponential{2.0};
  CHECK(e.moment(0) == 1.0);
  CHECK(e.moment(3) == doctest::Approx(6.0 / 8.0));
  const Distribution p = Pareto{3.0, 1.0};
  CHECK(p.mean() == doctest::Approx(1.5));
  CHECK(p.moment(2) == doctest::Approx(3.0));
  CHECK(std::isinf(p.moment(3)));
  CHECK(Distribution(Deterministic{2.0}).moment(4) == 16.0);
}

TEST_CASE("sampled means") {
  for (const Distribution& d :
       {Distribution(Exponential{2.0}), Distribution(Pareto{4.0, 1.0}), Distribution(Deterministic{3.0})}) {
    Engine rng(42);
    std::vector<double> xs(200000);
    for (auto& x : xs) x = d.sample(rng);
    CHECK(sample_mean(as_array(xs)) == doctest::Approx(d.mean()).epsilon(0.01));
  }
}

TEST_CASE("laplace transforms") {
  const Distribution e = Exponential{1.0};
  CHECK(e.lst(1.0) == 0.5);
  CHECK(std::isinf(e.lst(-1.0)));
  CHECK(Distribution(Deterministic{2.0}).lst(0.5) == doctest::Approx(std::exp(-1.0)));
  // Pareto(3,1): E[exp(-sY)] = 3 int_1^inf e^{-sy} y^-4 dy; compare a crude sum
  const Distribution p = Pareto{3.0, 1.0};
  double acc = 0;
  const double dy = 1e-4;
  for (double y = 1 + dy / 2; y < 400; y += dy) acc += 3 * std::exp(-0.7 * y) * std::pow(y, -4) * dy;
  CHECK(p.lst(0.7) == doctest::Approx(acc).epsilon(1e-6));
  CHECK(p.lst(0.0) == 1.0);
}

TEST_CASE("survival and scaling") {
  const Distribution p = Pareto{3.0, 2.0};
  CHECK(p.survival(4.0) == doctest::Approx(0.125));
  CHECK(p.survival(1.0) == 1.0);
  CHECK(p.scaled(0.5).survival(2.0) == doctest::Approx(0.125));
  CHECK(Distribution(Exponential{2.0}).scaled(2.0).mean() == doctest::Approx(1.0));
}

TEST_CASE("text form round trip") {
  for (const char* t : {"exponential(2)", "deterministic(0.25)", "pareto(3,1.5)"}) {
    CHECK(Distribution::parse(t).describe() == t);
  }
  CHECK(Distribution::parse(" pareto( 3 , 1 ) ").describe() == "pareto(3,1)");
  CHECK_THROWS_AS(Distribution::parse("gamma(2)"), InvalidInput);
  CHECK_THROWS_AS(Distribution::parse("exponential(-1)"), InvalidInput);
  CHECK_THROWS_AS(Distribution::parse("exponential(1,2)"), InvalidInput);
  CHECK_THROWS_AS(Distribution::parse("pareto(3)"), InvalidInput);
}
