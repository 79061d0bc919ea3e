#include "mcl/decision_function.hpp"

namespace mcl {

DecisionFunction make_vantage_pair(const DomainSpec& spec, Point plus, Point minus) {
  if (plus == minus)
    throw Error(Errc::invalid_argument, "vantage pair requires two distinct points");
  return DecisionFunction{spec, VantagePair{std::move(plus), std::move(minus)}};
}

DecisionFunction make_ball(const DomainSpec& spec, Point center, double radius) {
  if (radius < 0.0) throw Error(Errc::invalid_argument, "ball radius must be >= 0");
  return DecisionFunction{spec, BallAround{std::move(center), radius}};
}

DecisionFunction make_pivot(const DomainSpec& spec, Point anchor, double threshold) {
  return DecisionFunction{spec, PivotThreshold{std::move(anchor), threshold}};
}

double evaluate(const DecisionFunction& f, const Point& w) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, VantagePair>) {
          return 0.5 * (distance(f.domain, v.plus, w) - distance(f.domain, v.minus, w));
        } else if constexpr (std::is_same_v<T, BallAround>) {
          return distance(f.domain, v.center, w) - v.radius;
        } else {
          return distance(f.domain, v.anchor, w) - v.threshold;
        }
      },
      f.fn);
}

double check_lipschitz(const DecisionFunction& f, std::uint64_t seed, std::uint64_t trials) {
  return check_lipschitz_fn(
      f.domain, [&](const Point& p) { return evaluate(f, p); }, seed, trials);
}

}  // namespace mcl
