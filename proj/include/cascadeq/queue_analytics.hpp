#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cascadeq/error.hpp"
#include "cascadeq/special_functions.hpp"

namespace cascadeq {

// Raw service-time moments E[Y], E[Y^2], E[Y^3], E[Y^4].
struct ServiceMoments {
  double m1 = 1.0;
  double m2 = 2.0;
  double m3 = 6.0;
  double m4 = 24.0;

  // Throws InvalidInput unless all moments are positive and finite and the
  // Cauchy-Schwarz / Lyapunov chain E[Y^2] >= E[Y]^2, E[Y^4] >= E[Y^2]^2 holds.
  void validate() const;
};

// Regularly varying service tail P(Y > t) = L / t^alpha with L constant.
struct TailSpec {
  double alpha = 3.0;
  double slowly_varying_constant = 1.0;
};

// Busy-period density of the M/M/1 queue,
//   sqrt(mu/lambda) exp(-(lambda+mu) t) I1(2 sqrt(lambda mu) t) / t.
// Evaluated through the exponentially scaled Bessel function so that large t
// neither overflows nor underflows prematurely.
template <std::floating_point Scalar>
Scalar busy_density_mm1(Scalar t, Scalar lambda, Scalar mu) {
  if (!(lambda > 0) || !(mu > 0)) throw DomainError("busy_density_mm1: rates must be positive");
  if (!(lambda < mu)) throw DomainError("busy_density_mm1: requires rho = lambda/mu < 1");
  if (!(t > 0)) throw DomainError("busy_density_mm1: requires t > 0");
  const Scalar x = Scalar(2) * std::sqrt(lambda * mu) * t;
  // exp(-(lambda+mu)t) I1(x) = exp(x - (lambda+mu)t) * [exp(-x) I1(x)]
  const Scalar envelope = std::exp(x - (lambda + mu) * t);
  return std::sqrt(mu / lambda) * envelope * bessel_i1_scaled(x) / t;
}

// P(tau <= t) for the M/M/1 busy period, by adaptive Gauss-Kronrod quadrature
// of busy_density_mm1 over (0, t]. Zero for t <= 0.
double busy_cdf_mm1(double t, double lambda, double mu);

// P(tau <= t_i) for every t_i of a nondecreasing grid, integrating piecewise
// between consecutive points. Much cheaper than repeated busy_cdf_mm1 calls
// on long sorted sample vectors.
std::vector<double> busy_cdf_mm1_sorted(std::span<const double> sorted_t, double lambda,
                                        double mu);

// E[tau^4] for M/G/1 without reneging, rho = lambda E[Y] < 1:
//   E[Y^4]/(1-rho)^5 + 10 lambda E[Y^2] E[Y^3]/(1-rho)^6 + 15 lambda^2 E[Y^2]^3/(1-rho)^7
double busy_moment4(double lambda, const ServiceMoments& moments);

// E[tau] = E[Y] / (1 - rho) for M/G/1 without reneging.
double busy_mean(double lambda, double mean_service);

struct TakacsOptions {
  double tolerance = 1e-14;
  int max_iterations = 1'000'000;
};

// Busy-period Laplace-Stieltjes transform tau*(s) from the Takacs equation
//   tau*(s) = Y*(s + lambda - lambda tau*(s)),
// by fixed-point iteration started at 0. The iterates increase monotonically
// to the smallest root, which is the probabilistic solution when rho < 1.
// Small negative s inside the strip of analyticity is accepted; this is what
// finite-difference moment estimates need.
template <std::floating_point Scalar, class ServiceLst>
  requires std::invocable<ServiceLst&, Scalar>
Scalar takacs_lst(Scalar s, Scalar lambda, ServiceLst&& service_lst,
                  const TakacsOptions& options = {}) {
  if (!(lambda > 0)) throw DomainError("takacs_lst: lambda must be positive");
  Scalar x = 0;
  Scalar last_step = std::numeric_limits<Scalar>::infinity();
  for (int it = 0; it < options.max_iterations; ++it) {
    const Scalar next = static_cast<Scalar>(service_lst(s + lambda - lambda * x));
    if (!std::isfinite(next))
      throw NumericalError("takacs_lst: service transform not finite at s=" +
                           std::to_string(static_cast<double>(s + lambda - lambda * x)) +
                           " (iteration " + std::to_string(it) + ")");
    last_step = std::abs(next - x);
    x = next;
    if (last_step < Scalar(options.tolerance)) return x;
  }
  throw NumericalError("takacs_lst: no convergence after " +
                       std::to_string(options.max_iterations) + " iterations at s=" +
                       std::to_string(static_cast<double>(s)) + ", last |dx|=" +
                       std::to_string(static_cast<double>(last_step)) +
                       ", iterate=" + std::to_string(static_cast<double>(x)));
}

// Closed-form M/M/1 busy-period transform, the root of
//   lambda x^2 - (lambda + mu + s) x + mu = 0 lying in (0, 1].
template <std::floating_point Scalar>
Scalar busy_lst_mm1(Scalar s, Scalar lambda, Scalar mu) {
  const Scalar b = lambda + mu + s;
  const Scalar disc = b * b - Scalar(4) * lambda * mu;
  if (disc < 0) throw DomainError("busy_lst_mm1: s outside the strip of analyticity");
  // Rationalized form avoids cancellation when lambda is small.
  return Scalar(2) * mu / (b + std::sqrt(disc));
}

// Predicted busy-period tail (1-rho)^(-alpha-1) L t^(-alpha) for a
// subexponential service tail L t^(-alpha).
double tail_prediction(double t, double rho, const TailSpec& tail);

// k-th derivative (k = 1..4) at x0 by central finite differences with
// O(h^4) truncation error.
double central_derivative(const std::function<double(double)>& f, double x0, int order,
                          double h);

}  // namespace cascadeq
