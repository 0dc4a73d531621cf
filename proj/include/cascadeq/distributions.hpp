#pragma once

#include <string>
#include <variant>
#include <vector>

#include "cascadeq/random.hpp"

namespace cascadeq {

struct Exponential {
  double rate = 1.0;
};

struct Deterministic {
  double value = 1.0;
};

// P(Y > t) = (x_min / t)^alpha for t >= x_min.
struct Pareto {
  double alpha = 3.0;
  double x_min = 1.0;
};

struct Empirical {
  std::vector<double> values;
};

// Positive random variable used both for queue service times and for agent
// trade sizes in cascade fields.
class Distribution {
 public:
  using Variant = std::variant<Exponential, Deterministic, Pareto, Empirical>;

  Distribution() : impl_(Deterministic{}) {}
  Distribution(Exponential d) : impl_(d) { validate(); }
  Distribution(Deterministic d) : impl_(d) { validate(); }
  Distribution(Pareto d) : impl_(d) { validate(); }
  Distribution(Empirical d) : impl_(std::move(d)) { validate(); }

  const Variant& variant() const noexcept { return impl_; }

  double sample(Engine& rng) const;

  // Raw moment E[Y^k]; +inf when it does not exist.
  double moment(int k) const;
  double mean() const { return moment(1); }

  // Laplace-Stieltjes transform E[exp(-s Y)]. Negative s is accepted where
  // the transform is finite (used for numerical differentiation at 0).
  double lst(double s) const;

  // P(Y > t).
  double survival(double t) const;

  // Distribution of c * Y.
  Distribution scaled(double c) const;

  bool is_deterministic() const noexcept {
    return std::holds_alternative<Deterministic>(impl_);
  }

  // Round-trippable text form, e.g. "exponential(2)" or "pareto(3,1)".
  std::string describe() const;

  // Inverse of describe() (empirical distributions are not parseable).
  static Distribution parse(const std::string& text);

 private:
  void validate() const;

  Variant impl_;
};

}  // namespace cascadeq
