#pragma once

/// Exact finitely-supported probability measures on a finite carrier.
///
/// The invariant probabilities of a Collatz-style map live on its periodic
/// cycles: each cycle carries a uniform orbit measure, and every invariant
/// probability supported on registry cycles is a convex combination of
/// those. This module provides the measure type, the pointwise invariance
/// criterion, a recurrence scan (every recurrent point is periodic), the
/// ergodic decomposition against a cycle registry, and exact integration.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "collatz/dynamics.hpp"
#include "collatz/numeric.hpp"
#include "collatz/sets.hpp"
#include "collatz/topology.hpp"

namespace collatz::measure {

/// A probability measure with finite support inside a carrier and exact
/// rational weights. Only strictly positive weights are stored; weights must
/// be nonnegative and sum to exactly 1.
class RationalMeasure {
 public:
  RationalMeasure(topology::Carrier carrier,
                  std::map<Point, Rational> weights);

  const topology::Carrier& carrier() const { return carrier_; }
  /// Positive entries only, keyed by carrier point.
  const std::map<Point, Rational>& weights() const { return weights_; }
  /// Weight of a single point; zero when outside the support.
  Rational weight(Point x) const;
  /// Points of strictly positive weight, ascending.
  PointSet support() const;

  bool operator==(const RationalMeasure& other) const;

 private:
  topology::Carrier carrier_;
  std::map<Point, Rational> weights_;
};

/// The point mass at x.
RationalMeasure point_mass(const topology::Carrier& carrier, Point x);

/// Exact convex combination: coefficients must be nonnegative and sum to 1,
/// and every term must share one carrier.
RationalMeasure convex_combination(
    const std::vector<std::pair<Rational, RationalMeasure>>& terms);

/// The uniform probability on a periodic cycle.
struct OrbitMeasure {
  dynamics::Cycle cycle;
  RationalMeasure measure;
};

/// Uniform measure (weight 1/length per element) on the cycle; rejects
/// cycles with elements beyond the carrier.
OrbitMeasure orbit_measure(const dynamics::Cycle& cycle,
                           const topology::Carrier& carrier);

/// Outcome of the pointwise invariance criterion. On a finite carrier with
/// the power-set σ-algebra, invariance of μ under f reduces to: for every
/// point y, the weights of f-preimages of y sum to the weight of y. The
/// witness is the smallest failing y.
struct InvarianceResult {
  bool invariant = false;
  std::optional<Point> witness;
};

/// Checks the pointwise criterion; throws if the support leaves the carrier
/// under the map (the push-forward would not be a carrier measure).
InvarianceResult is_invariant(const RationalMeasure& measure,
                              const dynamics::CollatzMap& map);

/// Result of scanning seeds 1..scan_bound for recurrence: a point is
/// recurrent when some forward iterate f^k(x), k >= 1, returns to its
/// minimal neighborhood, and periodic when it lies on a cycle. Seeds whose
/// orbits exceed the limits are skipped, not classified.
struct RecurrenceReport {
  PointSet recurrent;
  PointSet periodic;
  PointSet skipped;

  /// The mechanized lemma: every recurrent point is periodic (and
  /// conversely) on the scanned range.
  bool lemma_holds() const { return recurrent == periodic; }
};

/// Scans seeds 1..scan_bound. The topology must be the one generated from
/// the doubling-pair subbasis of the map's carrier, and the carrier must
/// cover scan_bound doubled so every scanned point keeps its true minimal
/// neighborhood under truncation.
RecurrenceReport recurrence_scan(const dynamics::CollatzMap& map,
                                 const topology::Topology& topology,
                                 Point scan_bound,
                                 const dynamics::OrbitLimits& limits);

/// Raised by ergodic_decomposition when some support point lies on no
/// registry cycle: either the registry is missing a cycle or the input was
/// never invariant to begin with.
class InvariantMeasureOffCycles : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One ergodic component: a registry cycle together with the mass the
/// measure assigns to it.
struct ErgodicComponent {
  dynamics::Cycle cycle;
  Rational weight;
};

/// Decomposes an invariant measure supported on registry cycles into its
/// ergodic components (positive-mass cycles, ascending by minimum element).
/// The reconstruction sum of weight_i * orbit_measure(cycle_i) equals the
/// input exactly. Throws InvariantMeasureOffCycles when support leaves the
/// registry cycles, std::invalid_argument when the measure is not invariant.
std::vector<ErgodicComponent> ergodic_decomposition(
    const RationalMeasure& measure, const dynamics::CycleRegistry& registry);

/// A potential as a partial rational-valued function on carrier points;
/// std::nullopt marks points where the potential is undefined.
using PartialPotential = std::function<std::optional<Rational>(Point)>;

/// Exact integral: the weighted sum of potential values over the support.
/// Throws when the potential is undefined at a support point.
Rational integrate(const PartialPotential& potential,
                   const RationalMeasure& measure);

}  // namespace collatz::measure
