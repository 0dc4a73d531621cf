#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>

#include "cascadeq/special_functions.hpp"

using namespace cascadeq;

namespace {

// Straight long double series, no shared code with the library.
long double i1_reference(long double x) {
  long double term = x / 2;
  long double sum = term;
  const long double q = x * x / 4;
  for (int k = 0; k < 2000; ++k) {
    term *= q / ((k + 1.0L) * (k + 2.0L));
    sum += term;
    if (term < 1e-22L * sum) break;
  }
  return sum;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("bessel i1 small arguments") {
  CHECK(bessel_i1(0.0) == 0.0);
  CHECK(rel(bessel_i1(1e-8), 5e-9) < 1e-14);
  CHECK(rel(bessel_i1(1.0), 0.5651591039924851) < 1e-14);
  CHECK(rel(bessel_i1(-2.0), -1.5906368546373291) < 1e-14);
}

TEST_CASE("bessel i1 against independent series and std::cyl_bessel_i") {
  for (double x = 0.01; x < 60.0; x *= 1.13) {
    const double ref = static_cast<double>(i1_reference(x));
    INFO("x = " << x);
    CHECK(rel(bessel_i1(x), ref) < 1e-13);
    CHECK(rel(bessel_i1(x), std::cyl_bessel_i(1.0, x)) < 1e-12);
  }
}

TEST_CASE("scaled i1 is continuous at the crossover") {
  const double c = kBesselI1Crossover;
  const double below = std::exp(-c) * bessel_i1_series(c);
  const double above = bessel_i1_asymptotic_scaled(c);
  CHECK(rel(above, below) < 1e-10);
  CHECK(rel(bessel_i1_scaled(std::nextafter(c, 100.0)), bessel_i1_scaled(c)) < 1e-10);
}

TEST_CASE("scaled i1 stays finite where i1 overflows") {
  const double x = 5000.0;
  const double v = bessel_i1_scaled(x);
  CHECK(std::isfinite(v));
  // leading term 1/sqrt(2 pi x) (1 - 3/(8x))
  CHECK(rel(v, (1.0 - 3.0 / (8.0 * x) - 15.0 / (128.0 * x * x)) /
                   std::sqrt(2.0 * std::numbers::pi * x)) < 1e-9);
  CHECK(bessel_i1_scaled(-x) == -v);
}

TEST_CASE("i1 is odd") {
  for (double x : {0.3, 7.0, 31.0, 200.0}) CHECK(bessel_i1_scaled(-x) == -bessel_i1_scaled(x));
}

TEST_CASE("long double instantiation") {
  const long double v = bessel_i1(3.0L);
  CHECK(std::abs(v - i1_reference(3.0L)) < 1e-17L);
}
