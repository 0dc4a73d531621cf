#include "cascadeq/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <regex>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "cascadeq/error.hpp"
#include "cascadeq/text.hpp"

namespace cascadeq {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void Distribution::validate() const {
  std::visit(
      Overloaded{
          [](const Exponential& d) {
            if (!(d.rate > 0) || !std::isfinite(d.rate))
              throw InvalidInput("exponential rate must be positive and finite");
          },
          [](const Deterministic& d) {
            if (!(d.value > 0) || !std::isfinite(d.value))
              throw InvalidInput("deterministic value must be positive and finite");
          },
          [](const Pareto& d) {
            if (!(d.alpha > 0) || !(d.x_min > 0) || !std::isfinite(d.alpha) ||
                !std::isfinite(d.x_min))
              throw InvalidInput("pareto alpha and x_min must be positive and finite");
          },
          [](const Empirical& d) {
            if (d.values.empty()) throw InvalidInput("empirical distribution needs samples");
            for (double v : d.values)
              if (!(v > 0) || !std::isfinite(v))
                throw InvalidInput("empirical samples must be positive and finite");
          },
      },
      impl_);
}

double Distribution::sample(Engine& rng) const {
  return std::visit(
      Overloaded{
          [&](const Exponential& d) { return -std::log(rng.uniform_open()) / d.rate; },
          [](const Deterministic& d) { return d.value; },
          [&](const Pareto& d) {
            return d.x_min * std::pow(rng.uniform_open(), -1.0 / d.alpha);
          },
          [&](const Empirical& d) {
            const auto n = d.values.size();
            auto i = static_cast<std::size_t>(rng.uniform_open() * static_cast<double>(n));
            return d.values[std::min(i, n - 1)];
          },
      },
      impl_);
}

double Distribution::moment(int k) const {
  if (k < 0) throw InvalidInput("moment order must be nonnegative");
  return std::visit(
      Overloaded{
          [k](const Exponential& d) {
            return boost::math::factorial<double>(static_cast<unsigned>(k)) /
                   std::pow(d.rate, k);
          },
          [k](const Deterministic& d) { return std::pow(d.value, k); },
          [k](const Pareto& d) {
            if (d.alpha <= k) return kInf;
            return d.alpha * std::pow(d.x_min, k) / (d.alpha - k);
          },
          [k](const Empirical& d) {
            double acc = 0.0;
            for (double v : d.values) acc += std::pow(v, k);
            return acc / static_cast<double>(d.values.size());
          },
      },
      impl_);
}

double Distribution::lst(double s) const {
  return std::visit(
      Overloaded{
          [s](const Exponential& d) {
            if (s <= -d.rate) return kInf;
            return d.rate / (d.rate + s);
          },
          [s](const Deterministic& d) { return std::exp(-s * d.value); },
          [s](const Pareto& d) {
            if (s < 0) return kInf;
            if (s == 0) return 1.0;
            // E[exp(-sY)] = alpha * int_1^inf exp(-s x_min u) u^(-alpha-1) du
            boost::math::quadrature::exp_sinh<double> integrator;
            const double a = d.alpha;
            const double c = s * d.x_min;
            auto f = [a, c](double v) {
              const double u = 1.0 + v;
              return std::exp(-c * v) * std::pow(u, -a - 1.0);
            };
            return a * std::exp(-c) * integrator.integrate(f, 1e-14);
          },
          [s](const Empirical& d) {
            double acc = 0.0;
            for (double v : d.values) acc += std::exp(-s * v);
            return acc / static_cast<double>(d.values.size());
          },
      },
      impl_);
}

double Distribution::survival(double t) const {
  return std::visit(
      Overloaded{
          [t](const Exponential& d) { return t <= 0 ? 1.0 : std::exp(-d.rate * t); },
          [t](const Deterministic& d) { return t < d.value ? 1.0 : 0.0; },
          [t](const Pareto& d) { return t <= d.x_min ? 1.0 : std::pow(d.x_min / t, d.alpha); },
          [t](const Empirical& d) {
            const auto above = std::count_if(d.values.begin(), d.values.end(),
                                             [t](double v) { return v > t; });
            return static_cast<double>(above) / static_cast<double>(d.values.size());
          },
      },
      impl_);
}

Distribution Distribution::scaled(double c) const {
  if (!(c > 0) || !std::isfinite(c)) throw InvalidInput("scale factor must be positive");
  return std::visit(
      Overloaded{
          [c](const Exponential& d) { return Distribution(Exponential{d.rate / c}); },
          [c](const Deterministic& d) { return Distribution(Deterministic{d.value * c}); },
          [c](const Pareto& d) { return Distribution(Pareto{d.alpha, d.x_min * c}); },
          [c](const Empirical& d) {
            Empirical out{d.values};
            for (double& v : out.values) v *= c;
            return Distribution(std::move(out));
          },
      },
      impl_);
}

std::string Distribution::describe() const {
  return std::visit(
      Overloaded{
          [](const Exponential& d) { return "exponential(" + format_double(d.rate) + ")"; },
          [](const Deterministic& d) {
            return "deterministic(" + format_double(d.value) + ")";
          },
          [](const Pareto& d) {
            return "pareto(" + format_double(d.alpha) + "," + format_double(d.x_min) + ")";
          },
          [](const Empirical& d) {
            return "empirical(" + std::to_string(d.values.size()) + " samples)";
          },
      },
      impl_);
}

Distribution Distribution::parse(const std::string& text) {
  static const std::regex pattern(
      R"(^\s*([a-z]+)\s*\(\s*([^,\s)]+)\s*(?:,\s*([^,\s)]+)\s*)?\)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern))
    throw InvalidInput("cannot parse distribution '" + text + "'");
  const std::string kind = m[1];
  const double a = parse_double(m[2].str());
  const bool has_b = m[3].matched;
  if (kind == "exponential" && !has_b) return Exponential{a};
  if (kind == "deterministic" && !has_b) return Deterministic{a};
  if (kind == "pareto" && has_b) return Pareto{a, parse_double(m[3].str())};
  throw InvalidInput("unknown distribution '" + text +
                     "' (expected exponential(rate), deterministic(value) or "
                     "pareto(alpha,x_min))");
}

}  // namespace cascadeq
