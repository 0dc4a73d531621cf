#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>

namespace cascadeq {

// Crossover between the power series and the large-argument expansion of I1.
inline constexpr double kBesselI1Crossover = 30.0;

// Power series I1(x) = sum_k (x/2)^(2k+1) / (k! (k+1)!). All terms share the
// sign of x, so there is no cancellation; cost grows linearly with |x|.
template <std::floating_point Scalar>
Scalar bessel_i1_series(Scalar x) {
  const Scalar half = x / Scalar(2);
  const Scalar q = half * half;
  Scalar term = half;
  Scalar sum = term;
  for (int k = 0; k < 500; ++k) {
    term *= q / (Scalar(k + 1) * Scalar(k + 2));
    sum += term;
    if (std::abs(term) <= std::numeric_limits<Scalar>::epsilon() * std::abs(sum) / 4) break;
  }
  return sum;
}

// exp(-x) I1(x) from the Hankel expansion
//   I1(x) ~ e^x / sqrt(2 pi x) * sum_k (-1)^k prod_{j<=k}(4 - (2j-1)^2) / (k! (8x)^k),
// truncated at the smallest term. Valid for x > 0; accurate to double
// precision once x exceeds ~20.
template <std::floating_point Scalar>
Scalar bessel_i1_asymptotic_scaled(Scalar x) {
  const Scalar mu = 4;
  Scalar term = 1;
  Scalar sum = 1;
  for (int k = 1; k < 100; ++k) {
    const Scalar odd = Scalar(2 * k - 1);
    const Scalar next = -term * (mu - odd * odd) / (Scalar(k) * Scalar(8) * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) <= std::numeric_limits<Scalar>::epsilon() * std::abs(sum) / 4) break;
  }
  return sum / std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar> * x);
}

// exp(-|x|) I1(x). Finite for all finite x, unlike I1 itself which overflows
// near |x| = 710.
template <std::floating_point Scalar>
Scalar bessel_i1_scaled(Scalar x) {
  const Scalar ax = std::abs(x);
  Scalar value;
  if (ax <= Scalar(kBesselI1Crossover)) {
    value = std::exp(-ax) * bessel_i1_series(ax);
  } else {
    value = bessel_i1_asymptotic_scaled(ax);
  }
  return x < 0 ? -value : value;
}

// Modified Bessel function of the first kind, order one.
template <std::floating_point Scalar>
Scalar bessel_i1(Scalar x) {
  const Scalar ax = std::abs(x);
  if (ax <= Scalar(kBesselI1Crossover)) return bessel_i1_series(x);
  const Scalar value = bessel_i1_asymptotic_scaled(ax) * std::exp(ax);
  return x < 0 ? -value : value;
}

}  // namespace cascadeq
