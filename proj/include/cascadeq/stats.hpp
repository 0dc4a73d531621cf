#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace cascadeq {

using SampleRef = Eigen::Ref<const Eigen::ArrayXd>;

inline Eigen::Map<const Eigen::ArrayXd> as_array(std::span<const double> values) {
  return {values.data(), static_cast<Eigen::Index>(values.size())};
}

// Fourth standardized central moment minus 3 (population form, no bias
// correction). Throws UndefinedStatistic for fewer than 4 samples or zero
// variance.
double excess_kurtosis(const SampleRef& samples);

struct TailEstimate {
  double exponent = 0;
  std::size_t k_used = 0;
  double standard_error = 0;
};

// Hill estimator on |samples| over the k largest order statistics:
//   alpha = k / sum_{i<=k} log(X_(i) / X_(k+1)).
// Requires 10 <= k < n/2. Standard error alpha / sqrt(k).
TailEstimate hill_estimate(const SampleRef& samples, std::size_t k);

// Hill estimates over a grid of k, with a drift diagnostic. A genuine power
// law gives estimates that do not trend with k; light (e.g. exponential)
// tails make the estimate grow as k shrinks. relative_slope is the least-
// squares slope of the estimate against log k, divided by the median
// estimate; drifts_as_k_shrinks is set when it falls below -drift_threshold.
struct HillSweep {
  std::vector<std::size_t> ks;
  std::vector<double> exponents;
  double median_exponent = 0;
  double relative_slope = 0;
  bool drifts_as_k_shrinks = false;
};

inline constexpr double kHillDriftThreshold = 0.1;

HillSweep hill_sweep(const SampleRef& samples, std::span<const std::size_t> ks,
                     double drift_threshold = kHillDriftThreshold);

// `points` log-spaced k values between max(10, n/1000) and n/10.
std::vector<std::size_t> hill_grid(std::size_t n, std::size_t points = 12);

// Biased sample autocorrelation at lags 1..max_lag with the white-noise
// band +-1.96/sqrt(n). Requires max_lag < n/4.
struct Autocorrelation {
  Eigen::ArrayXd values;  // values[k-1] is lag k
  double band = 0;

  double fraction_inside_band() const;
  bool all_above_band() const;
};

Autocorrelation autocorrelation(const SampleRef& samples, std::size_t max_lag);

// sup_x |F_n(x) - F(x)| given ascending samples and the model CDF evaluated
// at each of them.
double ks_distance_one_sample(std::span<const double> sorted_samples,
                              std::span<const double> model_cdf);

// sup_x |F_a(x) - F_b(x)| for two samples (sorted internally). Values closer
// than tie_tolerance * max(1, |x|) are treated as equal, which keeps lattice
// distributions (sums of identical service times) from showing spurious jumps
// caused by rounding.
double ks_distance_two_sample(std::span<const double> a, std::span<const double> b,
                              double tie_tolerance = 0.0);

struct Histogram {
  std::vector<double> edges;         // ascending, size B+1
  std::vector<std::int64_t> counts;  // size B; bin j is [edges[j], edges[j+1])
  std::int64_t underflow = 0;        // < edges.front()
  std::int64_t overflow = 0;         // >= edges.back()

  std::int64_t total() const;
  // underflow, counts..., overflow
  std::vector<std::int64_t> with_outer_bins() const;
};

Histogram histogram(const SampleRef& samples, std::span<const double> edges);

// `bins` equal-width edges on [lo, hi].
std::vector<double> uniform_edges(double lo, double hi, std::size_t bins);

struct ChiSquareResult {
  double statistic = 0;
  int degrees_of_freedom = 0;
  double p_value = 1;
};

// Two-sample chi-square test of homogeneity on binned counts. Adjacent bins
// are merged left to right until every expected cell count is at least
// min_expected.
ChiSquareResult chi_square_homogeneity(std::span<const std::int64_t> counts_a,
                                       std::span<const std::int64_t> counts_b,
                                       double min_expected = 5.0);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
};

LinearFit linear_fit(const SampleRef& x, const SampleRef& y);

double sample_mean(const SampleRef& samples);
double sample_variance(const SampleRef& samples);  // unbiased
double raw_moment(const SampleRef& samples, int k);

}  // namespace cascadeq
