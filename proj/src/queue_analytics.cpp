#include "cascadeq/queue_analytics.hpp"

#include <array>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace cascadeq {

void ServiceMoments::validate() const {
  for (double m : {m1, m2, m3, m4})
    if (!(m > 0) || !std::isfinite(m))
      throw InvalidInput("service moments must be positive and finite");
  // Lyapunov-type inequalities that every moment sequence of a positive
  // random variable satisfies; a small relative slack absorbs rounding.
  constexpr double slack = 1e-12;
  if (m2 < m1 * m1 * (1 - slack)) throw InvalidInput("E[Y^2] < E[Y]^2");
  if (m4 < m2 * m2 * (1 - slack)) throw InvalidInput("E[Y^4] < E[Y^2]^2");
  if (m3 * m1 < m2 * m2 * (1 - slack)) throw InvalidInput("E[Y^3] E[Y] < E[Y^2]^2");
  if (m4 * m2 < m3 * m3 * (1 - slack)) throw InvalidInput("E[Y^4] E[Y^2] < E[Y^3]^2");
}

double busy_cdf_mm1(double t, double lambda, double mu) {
  if (std::isnan(t)) throw DomainError("busy_cdf_mm1: t is NaN");
  busy_density_mm1(1.0, lambda, mu);
  if (t <= 0) return 0.0;
  auto density = [lambda, mu](double u) { return busy_density_mm1(u, lambda, mu); };
  double error = 0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(density, 0.0, t, 15,
                                                                       1e-12, &error);
}

std::vector<double> busy_cdf_mm1_sorted(std::span<const double> sorted_t, double lambda,
                                        double mu) {
  // Validate rates once, before the loop.
  busy_density_mm1(1.0, lambda, mu);
  auto density = [lambda, mu](double u) { return busy_density_mm1(u, lambda, mu); };
  std::vector<double> cdf(sorted_t.size());
  double previous = 0.0;
  double last_t = -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (std::size_t i = 0; i < sorted_t.size(); ++i) {
    const double t = sorted_t[i];
    if (std::isnan(t)) throw DomainError("busy_cdf_mm1_sorted: t is NaN");
    if (t < last_t) throw InvalidInput("busy_cdf_mm1_sorted: grid must be nondecreasing");
    last_t = t;
    if (t > previous) {
      // Short pieces (relative to the density's time scale 1/(lambda+mu)) get
      // a fixed Gauss-Legendre rule, exact to roundoff there; adaptive
      // refinement on them only chases roundoff in the error estimate.
      if ((t - previous) * (lambda + mu) <= 0.05) {
        acc += boost::math::quadrature::gauss<double, 7>::integrate(density, previous, t);
      } else {
        acc += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(density, previous,
                                                                            t, 10, 1e-12);
      }
      previous = t;
    }
    cdf[i] = acc;
  }
  return cdf;
}

double busy_moment4(double lambda, const ServiceMoments& moments) {
  moments.validate();
  if (!(lambda >= 0)) throw DomainError("busy_moment4: lambda must be nonnegative");
  const double rho = lambda * moments.m1;
  if (!(rho < 1)) throw DomainError("busy_moment4: requires rho = lambda E[Y] < 1");
  const double q = 1.0 - rho;
  const double m2 = moments.m2;
  return moments.m4 / std::pow(q, 5) + 10.0 * lambda * m2 * moments.m3 / std::pow(q, 6) +
         15.0 * lambda * lambda * m2 * m2 * m2 / std::pow(q, 7);
}

double busy_mean(double lambda, double mean_service) {
  const double rho = lambda * mean_service;
  if (!(rho < 1)) throw DomainError("busy_mean: requires rho < 1");
  return mean_service / (1.0 - rho);
}

double tail_prediction(double t, double rho, const TailSpec& tail) {
  if (!(rho >= 0) || !(rho < 1)) throw DomainError("tail_prediction: requires 0 <= rho < 1");
  if (!(t > 0)) throw DomainError("tail_prediction: requires t > 0");
  if (!(tail.alpha >= 1)) throw DomainError("tail_prediction: requires alpha >= 1");
  if (!(tail.slowly_varying_constant > 0))
    throw DomainError("tail_prediction: slowly varying constant must be positive");
  return std::pow(1.0 - rho, -tail.alpha - 1.0) * tail.slowly_varying_constant *
         std::pow(t, -tail.alpha);
}

double central_derivative(const std::function<double(double)>& f, double x0, int order,
                          double h) {
  if (!(h > 0)) throw InvalidInput("central_derivative: step must be positive");
  auto at = [&](int j) { return f(x0 + j * h); };
  switch (order) {
    case 1:
      return (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h);
    case 2:
      return (-at(2) + 16 * at(1) - 30 * at(0) + 16 * at(-1) - at(-2)) / (12 * h * h);
    case 3:
      return (-at(3) + 8 * at(2) - 13 * at(1) + 13 * at(-1) - 8 * at(-2) + at(-3)) /
             (8 * h * h * h);
    case 4:
      return (-at(3) + 12 * at(2) - 39 * at(1) + 56 * at(0) - 39 * at(-1) + 12 * at(-2) -
              at(-3)) /
             (6 * h * h * h * h);
    default:
      throw InvalidInput("central_derivative: order must be 1..4");
  }
}

}  // namespace cascadeq
