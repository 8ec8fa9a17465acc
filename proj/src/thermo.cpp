#include "collatz/thermo.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>

namespace collatz::thermo {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

Rational cycle_element_sum(const dynamics::Cycle& cycle) {
  BigInt sum = 0;
  for (const BigInt& element : cycle.elements()) sum += element;
  return Rational(sum);
}

bool cycle_within(const dynamics::Cycle& cycle,
                  const topology::Carrier& carrier) {
  const BigInt bound(carrier.bound());
  for (const BigInt& element : cycle.elements()) {
    if (element > bound) return false;
  }
  return true;
}

}  // namespace

Potential::Potential(topology::Carrier carrier, std::vector<Rational> values,
                     PotentialKind kind, std::string label)
    : carrier_(carrier),
      values_(std::move(values)),
      kind_(kind),
      label_(std::move(label)) {
  require(values_.size() == carrier_.bound(),
          "Potential: needs one value per carrier point");
}

Rational Potential::value(Point x) const {
  require(carrier_.contains(x), "Potential: point outside the carrier");
  return values_[x - 1];
}

measure::PartialPotential Potential::as_function() const {
  return [carrier = carrier_,
          values = values_](Point x) -> std::optional<Rational> {
    if (!carrier.contains(x)) return std::nullopt;
    return values[x - 1];
  };
}

Potential table_potential(const topology::Carrier& carrier,
                          std::vector<Rational> values, std::string label) {
  return Potential(carrier, std::move(values), PotentialKind::Table,
                   std::move(label));
}

Potential constant_potential(const topology::Carrier& carrier,
                             const Rational& c) {
  return Potential(carrier, std::vector<Rational>(carrier.bound(), c),
                   PotentialKind::Constant,
                   "constant(" + rational_string(c) + ")");
}

Potential indicator_potential(const topology::Carrier& carrier,
                              const PointSet& set, std::string label) {
  for (Point x : set) {
    require(carrier.contains(x),
            "indicator_potential: set leaves the carrier");
  }
  std::vector<Rational> values(carrier.bound(), Rational(0));
  for (Point x : set) values[x - 1] = Rational(1);
  return Potential(carrier, std::move(values), PotentialKind::Indicator,
                   std::move(label));
}

Potential key_potential(const dynamics::CollatzMap& map,
                        const topology::Carrier& carrier,
                        const dynamics::OrbitLimits& limits) {
  std::vector<Rational> values(carrier.bound(), Rational(0));
  PointSet undecided;
  // Cycle sums keyed by cycle minimum, so each discovered cycle is summed
  // once.
  std::map<BigInt, Rational> sums;
  for (Point x = 1; x <= carrier.bound(); ++x) {
    const dynamics::OrbitResult result =
        dynamics::orbit(map, BigInt(x), limits);
    if (!result.cyclic()) {
      undecided.push_back(x);
      continue;
    }
    if (!result.tail.empty()) continue;  // decided transient: value 0
    const dynamics::Cycle& cycle = *result.cycle;
    auto [it, inserted] = sums.try_emplace(cycle.min_element(), Rational(0));
    if (inserted) it->second = cycle_element_sum(cycle);
    values[x - 1] = it->second;
  }
  Potential potential(carrier, std::move(values), PotentialKind::KeyPotential,
                      "key");
  potential.mark_undecided(std::move(undecided));
  return potential;
}

ContinuityCertificate check_potential_continuity(
    const Potential& potential, const topology::Topology& topology,
    CodomainMode mode, const topology::SafeZone& zone) {
  const topology::Carrier& carrier = topology.carrier();
  require(potential.carrier().bound() == carrier.bound(),
          "check_potential_continuity: potential and topology carriers "
          "differ");
  require(zone.carrier().bound() == carrier.bound(),
          "check_potential_continuity: zone carrier differs");

  // Candidate codomain opens with nonempty preimage. Doubling-pair mode:
  // the subbasis sets meeting the range are {v, 2v} and {v/2, v} for range
  // values v, except that no proper open contains 0. Discrete mode: every
  // level set must be open.
  std::set<std::vector<Rational>> generators;
  for (Point x = 1; x <= carrier.bound(); ++x) {
    const Rational v = potential.value(x);
    if (mode == CodomainMode::DiscreteCodomain) {
      generators.insert({v});
    } else if (v != 0) {
      std::vector<Rational> doubled{v, 2 * v};
      std::vector<Rational> halved{v / 2, v};
      std::sort(doubled.begin(), doubled.end());
      std::sort(halved.begin(), halved.end());
      generators.insert(std::move(doubled));
      generators.insert(std::move(halved));
    }
  }

  ContinuityCertificate certificate;
  certificate.mode = mode;
  certificate.continuous = true;
  certificate.skipped = zone.skipped();
  certificate.zone = zone.description();

  for (const std::vector<Rational>& generator : generators) {
    const auto hits = [&](Point x) {
      return std::binary_search(generator.begin(), generator.end(),
                                potential.value(x));
    };
    for (Point x = 1; x <= carrier.bound(); ++x) {
      if (!zone.safe(x) || !hits(x)) continue;
      for (Point y : topology.min_nbhd(x)) {
        if (!zone.safe(y) || hits(y)) continue;
        certificate.continuous = false;
        certificate.witness_generator = generator;
        certificate.witness_point = x;
        certificate.witness_leak = y;
        return certificate;
      }
    }
  }
  return certificate;
}

ContinuityCertificate check_potential_continuity(
    const Potential& potential, const topology::Topology& topology,
    CodomainMode mode) {
  return check_potential_continuity(potential, topology, mode,
                                    topology::safe_pairs(topology.carrier()));
}

Rational orbit_average(const Potential& potential,
                       const dynamics::Cycle& cycle) {
  const measure::OrbitMeasure delta =
      measure::orbit_measure(cycle, potential.carrier());
  return measure::integrate(potential.as_function(), delta.measure);
}

PressureResult pressure(const Potential& potential,
                        const dynamics::CycleRegistry& registry) {
  if (registry.empty()) return PressureResult{};

  PressureResult result;
  result.status = PressureStatus::Finite;
  std::vector<Rational> averages;
  for (const dynamics::Cycle& cycle : registry.cycles()) {
    averages.push_back(orbit_average(potential, cycle));
    if (!result.value.has_value() || averages.back() > *result.value) {
      result.value = averages.back();
    }
  }
  for (std::size_t i = 0; i < averages.size(); ++i) {
    if (averages[i] == *result.value) {
      result.argmax.push_back(registry.cycles()[i]);
    }
  }
  return result;
}

EquilibriumStates equilibrium_states(const Potential& potential,
                                     const dynamics::CycleRegistry& registry) {
  const PressureResult top = pressure(potential, registry);
  EquilibriumStates states;
  states.status = top.status;
  if (!top.finite()) return states;

  states.pressure_value = top.value;
  states.argmax = top.argmax;
  states.simplex = "all convex combinations of the listed orbit measures";
  states.unique = top.argmax.size() == 1;
  for (const dynamics::Cycle& cycle : states.argmax) {
    // Internal certification: every generator integrates to the pressure.
    if (orbit_average(potential, cycle) != *states.pressure_value) {
      throw std::logic_error(
          "equilibrium_states: generator does not attain the pressure");
    }
  }
  return states;
}

DichotomyReport dichotomy_report(const dynamics::CycleRegistry& registry,
                                 const topology::Carrier& carrier,
                                 const dynamics::OrbitLimits& limits,
                                 std::uint64_t seed) {
  for (const dynamics::Cycle& cycle : registry.cycles()) {
    require(cycle_within(cycle, carrier),
            "dichotomy_report: registry cycle leaves the carrier");
  }

  DichotomyReport report;
  report.map_label = registry.map_label();
  report.scan_bound = registry.scan_bound();
  report.cycle_count = registry.cycles().size();
  report.empty_registry = registry.empty();

  std::vector<Potential> battery;
  battery.push_back(key_potential(registry.map(), carrier, limits));
  PointSet union_set;
  for (const dynamics::Cycle& cycle : registry.cycles()) {
    PointSet orbit_set;
    for (const BigInt& element : cycle.elements()) {
      orbit_set.push_back(element.convert_to<Point>());
    }
    orbit_set = make_point_set(std::move(orbit_set));
    union_set = set_union(union_set, orbit_set);
    battery.push_back(indicator_potential(
        carrier, orbit_set,
        "indicator(cycle min=" + cycle.min_element().str() + ")"));
  }
  battery.push_back(
      indicator_potential(carrier, union_set, "indicator(union)"));
  battery.push_back(constant_potential(carrier, Rational(0)));
  battery.push_back(constant_potential(carrier, Rational(1)));

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> numerator(0, 12);
  std::uniform_int_distribution<int> denominator(1, 3);
  for (int i = 1; i <= 3; ++i) {
    std::vector<Rational> values;
    values.reserve(carrier.bound());
    for (Point x = 1; x <= carrier.bound(); ++x) {
      values.emplace_back(numerator(rng), denominator(rng));
    }
    battery.push_back(table_potential(carrier, std::move(values),
                                      "table(random#" + std::to_string(i) +
                                          ")"));
  }

  bool all_exist = !report.empty_registry;
  bool all_unique = !report.empty_registry;
  for (const Potential& potential : battery) {
    const EquilibriumStates states = equilibrium_states(potential, registry);
    BatteryEntry entry;
    entry.potential = potential.label();
    entry.status = states.status;
    entry.pressure_value = states.pressure_value;
    for (const dynamics::Cycle& cycle : states.argmax) {
      entry.argmax_minima.push_back(cycle.min_element());
    }
    entry.exists = states.status == PressureStatus::Finite &&
                   !states.argmax.empty();
    entry.unique = states.unique;
    all_exist = all_exist && entry.exists;
    all_unique = all_unique && entry.unique;
    report.battery.push_back(std::move(entry));
  }

  if (report.empty_registry) {
    report.verdict =
        "no invariant probabilities discovered relative to the registry "
        "(scan bound " +
        report.scan_bound.str() +
        "): the scan found no periodic orbit, so pressure is undefined";
  } else {
    report.verdict =
        "relative to the registry (" + std::to_string(report.cycle_count) +
        (report.cycle_count == 1 ? " cycle): " : " cycles): ") +
        (all_exist ? "every battery potential attains its pressure"
                   : "some battery potential fails to attain its pressure") +
        "; " +
        (all_unique
             ? "the equilibrium state is unique for every battery potential"
             : "uniqueness fails for some battery potential (several "
               "periodic orbits share a maximal average)");
  }
  return report;
}

}  // namespace collatz::thermo
