#include "collatz/measure.hpp"

#include <algorithm>
#include <string>

namespace collatz::measure {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

/// Converts an orbit value to a carrier point when it fits, nullopt when the
/// value lies beyond the carrier.
std::optional<Point> as_carrier_point(const BigInt& value,
                                      const topology::Carrier& carrier) {
  if (value < 1 || value > BigInt(carrier.bound())) return std::nullopt;
  return value.convert_to<Point>();
}

}  // namespace

RationalMeasure::RationalMeasure(topology::Carrier carrier,
                                 std::map<Point, Rational> weights)
    : carrier_(carrier) {
  Rational total = 0;
  for (const auto& [x, w] : weights) {
    require(carrier_.contains(x),
            "RationalMeasure: weight assigned outside the carrier");
    require(w >= 0, "RationalMeasure: weights must be nonnegative");
    total += w;
    if (w > 0) weights_.emplace(x, w);
  }
  require(total == 1, "RationalMeasure: weights must sum to exactly 1");
}

Rational RationalMeasure::weight(Point x) const {
  const auto it = weights_.find(x);
  return it == weights_.end() ? Rational(0) : it->second;
}

PointSet RationalMeasure::support() const {
  PointSet points;
  points.reserve(weights_.size());
  for (const auto& [x, w] : weights_) points.push_back(x);
  return points;
}

bool RationalMeasure::operator==(const RationalMeasure& other) const {
  return carrier_.bound() == other.carrier_.bound() &&
         weights_ == other.weights_;
}

RationalMeasure point_mass(const topology::Carrier& carrier, Point x) {
  return RationalMeasure(carrier, {{x, Rational(1)}});
}

RationalMeasure convex_combination(
    const std::vector<std::pair<Rational, RationalMeasure>>& terms) {
  require(!terms.empty(), "convex_combination: needs at least one term");
  const topology::Carrier& carrier = terms.front().second.carrier();
  Rational total = 0;
  std::map<Point, Rational> combined;
  for (const auto& [coefficient, term] : terms) {
    require(term.carrier().bound() == carrier.bound(),
            "convex_combination: terms must share one carrier");
    require(coefficient >= 0,
            "convex_combination: coefficients must be nonnegative");
    total += coefficient;
    for (const auto& [x, w] : term.weights()) combined[x] += coefficient * w;
  }
  require(total == 1, "convex_combination: coefficients must sum to 1");
  return RationalMeasure(carrier, std::move(combined));
}

OrbitMeasure orbit_measure(const dynamics::Cycle& cycle,
                           const topology::Carrier& carrier) {
  std::map<Point, Rational> weights;
  const Rational share(1, cycle.length());
  for (const BigInt& element : cycle.elements()) {
    const auto point = as_carrier_point(element, carrier);
    require(point.has_value(), "orbit_measure: cycle exceeds the carrier");
    weights.emplace(*point, share);
  }
  return OrbitMeasure{cycle, RationalMeasure(carrier, std::move(weights))};
}

InvarianceResult is_invariant(const RationalMeasure& measure,
                              const dynamics::CollatzMap& map) {
  // Push the measure forward through the map, then compare pointwise: the
  // push-forward weight of y is exactly the weight-sum of its preimages.
  std::map<Point, Rational> forward;
  for (const auto& [x, w] : measure.weights()) {
    const BigInt image = dynamics::step(map, BigInt(x));
    const auto point = as_carrier_point(image, measure.carrier());
    require(point.has_value(),
            "is_invariant: support escapes the carrier under the map");
    forward[*point] += w;
  }

  // Walk both sorted weight maps together; the witness is the smallest
  // point where the push-forward disagrees with the measure.
  auto lhs = measure.weights().begin();
  const auto lhs_end = measure.weights().end();
  auto rhs = forward.begin();
  const auto rhs_end = forward.end();
  while (lhs != lhs_end || rhs != rhs_end) {
    if (rhs == rhs_end || (lhs != lhs_end && lhs->first < rhs->first)) {
      return InvarianceResult{false, lhs->first};
    }
    if (lhs == lhs_end || rhs->first < lhs->first) {
      return InvarianceResult{false, rhs->first};
    }
    if (lhs->second != rhs->second) {
      return InvarianceResult{false, lhs->first};
    }
    ++lhs;
    ++rhs;
  }
  return InvarianceResult{true, std::nullopt};
}

RecurrenceReport recurrence_scan(const dynamics::CollatzMap& map,
                                 const topology::Topology& topology,
                                 Point scan_bound,
                                 const dynamics::OrbitLimits& limits) {
  require(scan_bound >= 1, "recurrence_scan: scan bound must be positive");
  require(topology.carrier().bound() / 2 >= scan_bound,
          "recurrence_scan: carrier must cover twice the scan bound");

  RecurrenceReport report;
  for (Point x = 1; x <= scan_bound; ++x) {
    const dynamics::OrbitResult result =
        dynamics::orbit(map, BigInt(x), limits);
    if (!result.cyclic()) {
      report.skipped.push_back(x);
      continue;
    }
    if (result.tail.empty()) report.periodic.push_back(x);

    // Forward iterates with k >= 1: the tail past the seed, then the whole
    // cycle (entered after the tail and visited in full from then on).
    const PointSet& nbhd = topology.min_nbhd(x);
    const auto returns = [&](const BigInt& value) {
      const auto point = as_carrier_point(value, topology.carrier());
      return point.has_value() && set_contains(nbhd, *point);
    };
    bool recurrent = false;
    for (std::size_t k = 1; k < result.tail.size() && !recurrent; ++k) {
      recurrent = returns(result.tail[k]);
    }
    if (!recurrent) {
      for (const BigInt& value : result.cycle->elements()) {
        if (returns(value)) {
          recurrent = true;
          break;
        }
      }
    }
    if (recurrent) report.recurrent.push_back(x);
  }
  return report;
}

std::vector<ErgodicComponent> ergodic_decomposition(
    const RationalMeasure& measure, const dynamics::CycleRegistry& registry) {
  // Support containment comes first: a support point on no registry cycle
  // already refutes the decomposition regardless of invariance.
  for (const auto& [x, w] : measure.weights()) {
    if (registry.cycle_through(BigInt(x)) == nullptr) {
      throw InvariantMeasureOffCycles(
          "ergodic_decomposition: support point " + std::to_string(x) +
          " lies on no registry cycle");
    }
  }
  const InvarianceResult invariance = is_invariant(measure, registry.map());
  require(invariance.invariant,
          "ergodic_decomposition: measure is not invariant");

  std::vector<ErgodicComponent> components;
  for (const dynamics::Cycle& cycle : registry.cycles()) {
    Rational mass = 0;
    for (const BigInt& element : cycle.elements()) {
      const auto point = as_carrier_point(element, measure.carrier());
      if (point.has_value()) mass += measure.weight(*point);
    }
    if (mass > 0) components.push_back(ErgodicComponent{cycle, mass});
  }
  return components;
}

Rational integrate(const PartialPotential& potential,
                   const RationalMeasure& measure) {
  Rational total = 0;
  for (const auto& [x, w] : measure.weights()) {
    const std::optional<Rational> value = potential(x);
    require(value.has_value(),
            "integrate: potential undefined at support point " +
                std::to_string(x));
    total += w * (*value);
  }
  return total;
}

}  // namespace collatz::measure
