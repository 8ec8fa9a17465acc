#pragma once

/// Thermodynamic formalism at desk scale: potentials on a finite carrier,
/// orbit averages, topological pressure over a cycle registry, equilibrium
/// states, and the finiteness/uniqueness dichotomy report.
///
/// Every invariant probability built from a registry is a convex combination
/// of orbit measures, and those measures have zero entropy, so the pressure
/// of a potential over the registry simplex is the maximum orbit average.
/// Equilibrium states are the convex combinations of the maximizing orbit
/// measures; they are unique exactly when one cycle attains the maximum.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "collatz/dynamics.hpp"
#include "collatz/measure.hpp"
#include "collatz/numeric.hpp"
#include "collatz/sets.hpp"
#include "collatz/topology.hpp"

namespace collatz::thermo {

enum class PotentialKind { Table, KeyPotential, Indicator, Constant };

/// Codomain topology used by the continuity check. GeneratedCodomain gives
/// the value space the doubling-pair subbasis {v, 2v} (nonzero v), so the
/// candidate opens around a value v are {v, 2v} and {v/2, v}; no proper open
/// contains 0, so the value 0 never constrains. DiscreteCodomain makes every
/// value set open, so every level set of the potential must be open.
enum class CodomainMode { GeneratedCodomain, DiscreteCodomain };

/// Outcome of a potential continuity check. On failure the witness is a
/// codomain generator open, a preimage point whose minimal neighborhood
/// leaks, and the leaking neighbor.
struct ContinuityCertificate {
  CodomainMode mode = CodomainMode::GeneratedCodomain;
  bool continuous = false;
  std::vector<Rational> witness_generator;
  std::optional<Point> witness_point;
  std::optional<Point> witness_leak;
  PointSet skipped;
  std::string zone;
};

/// A total rational-valued function on the carrier. The kind records how
/// the potential was built; a continuity certificate can be attached after
/// checking.
class Potential {
 public:
  Potential(topology::Carrier carrier, std::vector<Rational> values,
            PotentialKind kind, std::string label);

  const topology::Carrier& carrier() const { return carrier_; }
  Rational value(Point x) const;
  PotentialKind kind() const { return kind_; }
  const std::string& label() const { return label_; }

  /// Carrier points whose orbit could not be decided within the limits when
  /// the potential was built (meaningful for KeyPotential; the value 0
  /// assigned there is a truncation artifact, not a verdict).
  const PointSet& undecided_points() const { return undecided_; }
  void mark_undecided(PointSet points) { undecided_ = std::move(points); }

  const std::optional<ContinuityCertificate>& certificate() const {
    return certificate_;
  }
  void attach_certificate(ContinuityCertificate certificate) {
    certificate_ = std::move(certificate);
  }

  /// View as a partial potential for measure::integrate (total here).
  measure::PartialPotential as_function() const;

 private:
  topology::Carrier carrier_;
  std::vector<Rational> values_;
  PotentialKind kind_;
  std::string label_;
  PointSet undecided_;
  std::optional<ContinuityCertificate> certificate_;
};

/// Explicit table of values (values[x-1] is the value at x).
Potential table_potential(const topology::Carrier& carrier,
                          std::vector<Rational> values,
                          std::string label = "table");

/// The constant potential c.
Potential constant_potential(const topology::Carrier& carrier,
                             const Rational& c);

/// The characteristic function of a carrier subset (an orbit union in the
/// intended use).
Potential indicator_potential(const topology::Carrier& carrier,
                              const PointSet& set,
                              std::string label = "indicator");

/// The key potential: the element sum of the cycle through n when n is
/// periodic within the limits, and 0 otherwise. Points whose orbits exceed
/// the limits also get 0 but are flagged as undecided. The nonzero values
/// sit exactly on the periodic orbits, which are open, so the potential is
/// continuous toward the doubling-pair codomain; it is constant on every
/// cycle by construction.
Potential key_potential(const dynamics::CollatzMap& map,
                        const topology::Carrier& carrier,
                        const dynamics::OrbitLimits& limits);

/// Checks that potential preimages of codomain generator opens are open in
/// the domain topology, relative to the zone: for safe preimage points the
/// safe part of the minimal neighborhood must stay inside the preimage.
ContinuityCertificate check_potential_continuity(
    const Potential& potential, const topology::Topology& topology,
    CodomainMode mode, const topology::SafeZone& zone);

/// Safe-zone convention: checks on the doubling-safe zone (2x within the
/// carrier), where minimal neighborhoods are truncation-free.
ContinuityCertificate check_potential_continuity(
    const Potential& potential, const topology::Topology& topology,
    CodomainMode mode);

/// Time average over one period: integrate(potential, orbit_measure(cycle)).
/// For the key potential this is exactly the element sum of the cycle.
Rational orbit_average(const Potential& potential,
                       const dynamics::Cycle& cycle);

enum class PressureStatus { Finite, EmptyRegistry };

/// Topological pressure over the registry simplex. The entropy term is
/// identically zero (invariant probabilities here live on finite cycles),
/// so the supremum over convex combinations of orbit measures is the
/// maximum orbit average; argmax lists every cycle attaining it, ascending
/// by minimum element.
struct PressureResult {
  PressureStatus status = PressureStatus::EmptyRegistry;
  std::optional<Rational> value;
  std::vector<dynamics::Cycle> argmax;

  bool finite() const { return status == PressureStatus::Finite; }
};

PressureResult pressure(const Potential& potential,
                        const dynamics::CycleRegistry& registry);

/// The equilibrium states of a potential relative to a registry: all convex
/// combinations of the orbit measures on the argmax cycles. Unique exactly
/// when a single cycle attains the pressure. EmptyRegistry propagates from
/// pressure.
struct EquilibriumStates {
  PressureStatus status = PressureStatus::EmptyRegistry;
  std::optional<Rational> pressure_value;
  std::vector<dynamics::Cycle> argmax;
  std::string simplex;
  bool unique = false;
};

EquilibriumStates equilibrium_states(const Potential& potential,
                                     const dynamics::CycleRegistry& registry);

/// One battery line of the dichotomy report.
struct BatteryEntry {
  std::string potential;
  PressureStatus status = PressureStatus::EmptyRegistry;
  std::optional<Rational> pressure_value;
  std::vector<BigInt> argmax_minima;
  bool exists = false;
  bool unique = false;
};

/// The desk-scale dichotomy: with finitely many discovered cycles every
/// battery potential attains its pressure, and uniqueness across the board
/// holds exactly when the registry has one cycle. All statements are
/// relative to the registry (undiscovered cycles are out of scope).
struct DichotomyReport {
  std::string map_label;
  BigInt scan_bound;
  std::size_t cycle_count = 0;
  bool empty_registry = true;
  std::vector<BatteryEntry> battery;
  std::string verdict;
};

/// Runs the potential battery (key potential, one indicator per cycle, the
/// union indicator, constants 0 and 1, and seeded random bounded tables)
/// and summarizes existence/uniqueness of equilibrium states. The carrier
/// must contain every registry cycle.
DichotomyReport dichotomy_report(const dynamics::CycleRegistry& registry,
                                 const topology::Carrier& carrier,
                                 const dynamics::OrbitLimits& limits,
                                 std::uint64_t seed = 0);

}  // namespace collatz::thermo
