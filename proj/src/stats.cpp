#include "cascadeq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/distributions/chi_squared.hpp>

#include "cascadeq/error.hpp"

namespace cascadeq {

double sample_mean(const SampleRef& samples) {
  if (samples.size() == 0) throw UndefinedStatistic("mean of empty sample");
  return samples.mean();
}

double sample_variance(const SampleRef& samples) {
  if (samples.size() < 2) throw UndefinedStatistic("variance needs at least 2 samples");
  const double m = samples.mean();
  return (samples - m).square().sum() / static_cast<double>(samples.size() - 1);
}

double raw_moment(const SampleRef& samples, int k) {
  if (samples.size() == 0) throw UndefinedStatistic("moment of empty sample");
  return samples.pow(k).mean();
}

double excess_kurtosis(const SampleRef& samples) {
  if (samples.size() < 4) throw UndefinedStatistic("kurtosis needs at least 4 samples");
  const double m = samples.mean();
  const Eigen::ArrayXd centered = samples - m;
  const Eigen::ArrayXd sq = centered.square();
  const double m2 = sq.mean();
  if (!(m2 > 0) || m2 <= 1e-28 * m * m)
    throw UndefinedStatistic("kurtosis undefined for zero variance");
  const double m4 = sq.square().mean();
  return m4 / (m2 * m2) - 3.0;
}

namespace {

// Top k+1 absolute values in descending order.
std::vector<double> top_order_statistics(const SampleRef& samples, std::size_t k) {
  std::vector<double> a(static_cast<std::size_t>(samples.size()));
  for (Eigen::Index i = 0; i < samples.size(); ++i) a[static_cast<std::size_t>(i)] =
      std::abs(samples[i]);
  std::partial_sort(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k + 1), a.end(),
                    std::greater<>());
  a.resize(k + 1);
  return a;
}

}  // namespace

TailEstimate hill_estimate(const SampleRef& samples, std::size_t k) {
  const auto n = static_cast<std::size_t>(samples.size());
  if (k < 10) throw InvalidInput("hill_estimate: k must be at least 10");
  if (2 * k >= n) throw InvalidInput("hill_estimate: need k < n/2 (insufficient samples)");
  const auto top = top_order_statistics(samples, k);
  const double threshold = top[k];
  if (!(threshold > 0)) throw InvalidInput("hill_estimate: order statistic X_(k+1) is zero");
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) acc += std::log(top[i] / threshold);
  if (!(acc > 0)) throw UndefinedStatistic("hill_estimate: top order statistics are tied");
  const double alpha = static_cast<double>(k) / acc;
  return {alpha, k, alpha / std::sqrt(static_cast<double>(k))};
}

std::vector<std::size_t> hill_grid(std::size_t n, std::size_t points) {
  const double lo = std::max(10.0, static_cast<double>(n) / 1000.0);
  const double hi = static_cast<double>(n) / 10.0;
  if (points < 2 || hi <= lo) throw InvalidInput("hill_grid: sample too small for a k sweep");
  std::vector<std::size_t> ks;
  for (std::size_t j = 0; j < points; ++j) {
    const double frac = static_cast<double>(j) / static_cast<double>(points - 1);
    const auto k = static_cast<std::size_t>(std::llround(lo * std::pow(hi / lo, frac)));
    if (ks.empty() || k > ks.back()) ks.push_back(k);
  }
  return ks;
}

HillSweep hill_sweep(const SampleRef& samples, std::span<const std::size_t> ks,
                     double drift_threshold) {
  if (ks.size() < 2) throw InvalidInput("hill_sweep: need at least two k values");
  HillSweep out;
  out.ks.assign(ks.begin(), ks.end());
  for (auto k : ks) out.exponents.push_back(hill_estimate(samples, k).exponent);

  std::vector<double> sorted = out.exponents;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  out.median_exponent = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);

  Eigen::ArrayXd logk(static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j)
    logk[static_cast<Eigen::Index>(j)] = std::log(static_cast<double>(ks[j]));
  const auto fit = linear_fit(logk, as_array(out.exponents));
  out.relative_slope = fit.slope / out.median_exponent;
  out.drifts_as_k_shrinks = out.relative_slope < -drift_threshold;
  return out;
}

double Autocorrelation::fraction_inside_band() const {
  if (values.size() == 0) return 1.0;
  return static_cast<double>((values.abs() < band).count()) /
         static_cast<double>(values.size());
}

bool Autocorrelation::all_above_band() const { return (values > band).all(); }

Autocorrelation autocorrelation(const SampleRef& samples, std::size_t max_lag) {
  const auto n = samples.size();
  if (max_lag < 1 || static_cast<Eigen::Index>(4 * max_lag) >= n)
    throw InvalidInput("autocorrelation: requires 1 <= max_lag < n/4");
  const Eigen::ArrayXd x = samples - samples.mean();
  const double denom = x.square().sum();
  if (!(denom > 0)) throw UndefinedStatistic("autocorrelation of a constant series");
  Autocorrelation out;
  out.values.resize(static_cast<Eigen::Index>(max_lag));
  for (std::size_t k = 1; k <= max_lag; ++k) {
    const auto lag = static_cast<Eigen::Index>(k);
    out.values[lag - 1] = (x.head(n - lag) * x.tail(n - lag)).sum() / denom;
  }
  out.band = 1.96 / std::sqrt(static_cast<double>(n));
  return out;
}

double ks_distance_one_sample(std::span<const double> sorted_samples,
                              std::span<const double> model_cdf) {
  if (sorted_samples.size() != model_cdf.size() || sorted_samples.empty())
    throw InvalidInput("ks_distance_one_sample: size mismatch or empty sample");
  const auto n = static_cast<double>(sorted_samples.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sorted_samples.size()) {
    // Equal sample values form one ECDF jump.
    std::size_t j = i;
    while (j + 1 < sorted_samples.size() && sorted_samples[j + 1] == sorted_samples[i]) ++j;
    const double before = static_cast<double>(i) / n;
    const double after = static_cast<double>(j + 1) / n;
    d = std::max({d, std::abs(after - model_cdf[i]), std::abs(model_cdf[i] - before)});
    i = j + 1;
  }
  return d;
}

double ks_distance_two_sample(std::span<const double> a, std::span<const double> b,
                              double tie_tolerance) {
  if (a.empty() || b.empty()) throw InvalidInput("ks_distance_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto na = static_cast<double>(x.size());
  const auto nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() || j < y.size()) {
    double v;
    if (i == x.size()) v = y[j];
    else if (j == y.size()) v = x[i];
    else v = std::min(x[i], y[j]);
    const double limit = v + tie_tolerance * std::max(1.0, std::abs(v));
    while (i < x.size() && x[i] <= limit) ++i;
    while (j < y.size() && y[j] <= limit) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

std::int64_t Histogram::total() const {
  std::int64_t t = underflow + overflow;
  for (auto c : counts) t += c;
  return t;
}

std::vector<std::int64_t> Histogram::with_outer_bins() const {
  std::vector<std::int64_t> out;
  out.reserve(counts.size() + 2);
  out.push_back(underflow);
  out.insert(out.end(), counts.begin(), counts.end());
  out.push_back(overflow);
  return out;
}

Histogram histogram(const SampleRef& samples, std::span<const double> edges) {
  if (edges.size() < 2) throw InvalidInput("histogram: need at least two bin edges");
  if (!std::is_sorted(edges.begin(), edges.end()) ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw InvalidInput("histogram: bin edges must be strictly increasing");
  Histogram h;
  h.edges.assign(edges.begin(), edges.end());
  h.counts.assign(edges.size() - 1, 0);
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    const double v = samples[i];
    if (v < edges.front()) {
      ++h.underflow;
    } else if (v >= edges.back()) {
      ++h.overflow;
    } else {
      const auto it = std::upper_bound(edges.begin(), edges.end(), v);
      ++h.counts[static_cast<std::size_t>(it - edges.begin() - 1)];
    }
  }
  return h;
}

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  if (bins < 1 || !(hi > lo)) throw InvalidInput("uniform_edges: need bins >= 1 and hi > lo");
  std::vector<double> e(bins + 1);
  for (std::size_t j = 0; j <= bins; ++j)
    e[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(bins);
  return e;
}

ChiSquareResult chi_square_homogeneity(std::span<const std::int64_t> counts_a,
                                       std::span<const std::int64_t> counts_b,
                                       double min_expected) {
  if (counts_a.size() != counts_b.size() || counts_a.empty())
    throw InvalidInput("chi_square_homogeneity: count vectors must match and be nonempty");
  double na = 0, nb = 0;
  for (std::size_t j = 0; j < counts_a.size(); ++j) {
    if (counts_a[j] < 0 || counts_b[j] < 0) throw InvalidInput("negative histogram count");
    na += static_cast<double>(counts_a[j]);
    nb += static_cast<double>(counts_b[j]);
  }
  if (na == 0 || nb == 0) throw UndefinedStatistic("chi_square_homogeneity: empty sample");
  const double n = na + nb;
  const double smaller = std::min(na, nb);

  // Merge adjacent bins until the smaller row's expected count reaches
  // min_expected; a short remainder is folded into the last group.
  std::vector<std::pair<double, double>> groups;
  double ga = 0, gb = 0;
  for (std::size_t j = 0; j < counts_a.size(); ++j) {
    ga += static_cast<double>(counts_a[j]);
    gb += static_cast<double>(counts_b[j]);
    if ((ga + gb) * smaller / n >= min_expected) {
      groups.emplace_back(ga, gb);
      ga = gb = 0;
    }
  }
  if (ga + gb > 0) {
    if (groups.empty()) {
      groups.emplace_back(ga, gb);
    } else {
      groups.back().first += ga;
      groups.back().second += gb;
    }
  }
  if (groups.size() < 2)
    throw UndefinedStatistic("chi_square_homogeneity: fewer than two usable bins");

  double stat = 0;
  for (auto [a, b] : groups) {
    const double col = a + b;
    const double ea = col * na / n;
    const double eb = col * nb / n;
    stat += (a - ea) * (a - ea) / ea + (b - eb) * (b - eb) / eb;
  }
  ChiSquareResult r;
  r.statistic = stat;
  r.degrees_of_freedom = static_cast<int>(groups.size()) - 1;
  boost::math::chi_squared dist(r.degrees_of_freedom);
  r.p_value = boost::math::cdf(boost::math::complement(dist, stat));
  return r;
}

LinearFit linear_fit(const SampleRef& x, const SampleRef& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("linear_fit: need >= 2 points");
  const double mx = x.mean();
  const double my = y.mean();
  const double sxx = (x - mx).square().sum();
  if (!(sxx > 0)) throw UndefinedStatistic("linear_fit: x values are all equal");
  const double sxy = ((x - mx) * (y - my)).sum();
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

}  // namespace cascadeq
