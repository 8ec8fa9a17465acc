// Acceptance gate: one line per criterion, exit nonzero on any failure.
// Every check is exact (big-integer / rational equality); timed criteria
// report their elapsed wall time.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "collatz/dynamics.hpp"
#include "collatz/measurable.hpp"
#include "collatz/measure.hpp"
#include "collatz/numeric.hpp"
#include "collatz/sets.hpp"
#include "collatz/thermo.hpp"
#include "collatz/topology.hpp"
#include "oracle.hpp"

namespace {

using namespace collatz;
using oracle::Mask;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string points_text(const PointSet& points) {
  std::string text = "{";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) text += ",";
    text += std::to_string(points[i]);
  }
  return text + "}";
}

/// All open sets of a desk-size topology, as bitmasks.
std::set<Mask> opens_of_topology(const topology::Topology& topo) {
  const Point n = topo.carrier().bound();
  std::set<Mask> opens;
  const Mask full = oracle::full_mask(n);
  for (Mask u = 0;; ++u) {
    bool open = true;
    for (Point x = 1; x <= n && open; ++x) {
      if (!(u & (Mask(1) << (x - 1)))) continue;
      open = (oracle::to_mask(topo.min_nbhd(x)) & ~u) == 0;
    }
    if (open) opens.insert(u);
    if (u == full) break;
  }
  return opens;
}

PointSet cycle_points(const dynamics::Cycle& cycle) {
  PointSet points;
  for (const BigInt& element : cycle.elements()) {
    points.push_back(element.convert_to<Point>());
  }
  return make_point_set(std::move(points));
}

// ---------------------------------------------------------------------------
// 1. recurrence = periodicity at N = 2^17, scan 2^16, under ten seconds

bool criterion_1(std::string& detail) {
  const auto start = Clock::now();
  const topology::Carrier carrier(Point(1) << 17);
  const topology::Topology topo =
      topology::generate(topology::collatz_subbasis(carrier));
  const measure::RecurrenceReport report = measure::recurrence_scan(
      dynamics::CollatzMap::standard(), topo, Point(1) << 16,
      dynamics::OrbitLimits{});
  const double elapsed = seconds_since(start);

  const PointSet expected = {1, 2, 4};
  const bool values_ok = report.recurrent == expected &&
                         report.periodic == expected &&
                         report.skipped.empty() && report.lemma_holds();
  const bool fast_enough = elapsed < 10.0;

  std::ostringstream note;
  note << "recurrent = periodic = " << points_text(report.recurrent) << ", "
       << report.skipped.size() << " skipped, " << elapsed << "s";
  detail = note.str();
  return values_ok && fast_enough;
}

// ---------------------------------------------------------------------------
// 2. generated topology strictly coarser than discrete, odd witness;
//    witness topology valid with all-singleton Borel atoms

bool criterion_2(std::string& detail) {
  std::ostringstream note;
  bool ok = true;
  for (Point n : {Point(16), Point(64), Point(256)}) {
    const topology::Carrier carrier(n);
    const topology::Topology generated =
        topology::generate(topology::collatz_subbasis(carrier));
    const topology::Topology discrete = topology::discrete_topology(carrier);

    const topology::CoarsenessResult coarseness =
        topology::is_coarser(generated, discrete);
    const bool strictly =
        coarseness.relation == topology::Coarseness::StrictlyCoarser;
    const bool odd_witness = coarseness.open_only_in_right.has_value() &&
                             coarseness.open_only_in_right->size() == 1 &&
                             coarseness.open_only_in_right->front() % 2 == 1;

    bool witness_ok = true;
    try {
      // The constructor enforces every Topology invariant.
      const topology::Topology witness = topology::witness_topology(carrier);
      const topology::CoarsenessResult witness_coarseness =
          topology::is_coarser(witness, discrete);
      if (witness_coarseness.relation !=
          topology::Coarseness::StrictlyCoarser) {
        witness_ok = false;
      }
      const measurable::AtomPartition witness_borel =
          measurable::borel(witness);
      for (const PointSet& atom : witness_borel.atoms()) {
        if (atom.size() != 1) witness_ok = false;
      }
    } catch (const std::exception&) {
      witness_ok = false;
    }

    if (!(strictly && odd_witness && witness_ok)) ok = false;
    note << "N=" << n << " witness "
         << (coarseness.open_only_in_right
                 ? points_text(*coarseness.open_only_in_right)
                 : std::string("(none)"))
         << "; ";
  }
  detail = note.str();
  return ok;
}

// ---------------------------------------------------------------------------
// 3. singleton derivations succeed for all safe points and replay the two
//    intersection patterns exactly

bool criterion_3(std::string& detail) {
  const dynamics::CollatzMap map = dynamics::CollatzMap::standard();
  std::ostringstream note;
  bool ok = true;
  for (Point n : {Point(16), Point(64), Point(256)}) {
    const topology::Carrier carrier(n);
    const topology::SubbasisFamily subbasis =
        topology::collatz_subbasis(carrier);
    const topology::DerivationLog log =
        topology::derive_singletons(carrier, subbasis, map);
    const topology::SafeZone zone = topology::safe_derivation(carrier, map);

    bool full_coverage =
        log.success() && log.derived.size() == zone.points().size();
    bool patterns_ok = true;
    for (const topology::Derivation& derivation : log.derived) {
      const Point t = derivation.target;
      const PointSet meet =
          set_intersection(derivation.first_set, derivation.second_set);
      if (meet != PointSet{t}) patterns_ok = false;
      if (t % 2 == 0) {
        // {t} = {t/2, t} ∩ {t, 2t}
        if (derivation.pattern !=
                topology::Derivation::Pattern::EvenHalving ||
            derivation.first_set != PointSet{t / 2, t} ||
            derivation.second_set != PointSet{t, 2 * t}) {
          patterns_ok = false;
        }
      } else {
        // {t} = {t, 2t} ∩ {t, a*t + b}
        const Point image = (BigInt(3) * t + 1).convert_to<Point>();
        if (derivation.pattern !=
                topology::Derivation::Pattern::OddContinuity ||
            derivation.first_set != make_point_set({t, 2 * t}) ||
            derivation.second_set != make_point_set({t, image})) {
          patterns_ok = false;
        }
      }
    }
    if (!(full_coverage && patterns_ok)) ok = false;
    note << "N=" << n << " derived " << log.derived.size() << "/"
         << zone.points().size() << " safe; ";
  }
  detail = note.str();
  return ok;
}

// ---------------------------------------------------------------------------
// 4. openness: {1,2,4}, registry cycles, doubling chains open; safe odd
//    singletons not open; exhaustive family equality for N <= 12

bool criterion_4(std::string& detail) {
  bool ok = true;
  std::ostringstream note;

  {  // the worked example and the chain/singleton claims at N = 64
    const topology::Carrier carrier(64);
    const topology::Topology topo =
        topology::generate(topology::collatz_subbasis(carrier));
    if (!topology::is_open(topo, {1, 2, 4}).open) ok = false;

    const dynamics::CycleRegistry standard = dynamics::find_cycles(
        dynamics::CollatzMap::standard(), 16, dynamics::OrbitLimits{});
    for (const dynamics::Cycle& cycle : standard.cycles()) {
      if (!topology::is_open(topo, cycle_points(cycle)).open) ok = false;
    }

    // every doubling chain {y, 2y, ..., 2^x y} with x >= 1 in the carrier
    std::size_t chains = 0;
    for (Point y = 1; y <= carrier.bound(); ++y) {
      if (y % 2 == 0) continue;
      PointSet chain = {y};
      for (Point top = 2 * y; top <= carrier.bound(); top *= 2) {
        chain.push_back(top);
        ++chains;
        if (!topology::is_open(topo, chain).open) ok = false;
        if (top > carrier.bound() / 2) break;
      }
    }

    const topology::SafeZone zone = topology::safe_pairs(carrier);
    for (Point x : zone.points()) {
      if (x % 2 == 1 && topology::is_open(topo, {x}).open) ok = false;
    }
    note << chains << " chains open at N=64; ";
  }

  {  // (5,1) registry cycles are open in a carrier that contains them
    const topology::Carrier carrier(2048);
    const topology::Topology topo =
        topology::generate(topology::collatz_subbasis(carrier));
    const dynamics::CycleRegistry five = dynamics::find_cycles(
        dynamics::CollatzMap(5, 1, "5n+1"), 30, dynamics::OrbitLimits{});
    if (five.cycles().size() != 3) ok = false;
    for (const dynamics::Cycle& cycle : five.cycles()) {
      if (!topology::is_open(topo, cycle_points(cycle)).open) ok = false;
    }
  }

  std::size_t exhaustive = 0;
  for (Point n = 4; n <= 12; ++n) {  // exhaustive open-family equality
    const topology::Carrier carrier(n);
    const topology::SubbasisFamily subbasis =
        topology::collatz_subbasis(carrier);
    const std::set<Mask> brute = oracle::opens_family(n, subbasis.sets());
    const std::set<Mask> from_library =
        opens_of_topology(topology::generate(subbasis));
    if (brute != from_library) ok = false;
    exhaustive += brute.size();
  }
  note << exhaustive << " opens compared exhaustively for N=4..12";
  detail = note.str();
  return ok;
}

// ---------------------------------------------------------------------------
// 5. key potential: orbit average equals the cycle element sum; continuity
//    certificate passes in GeneratedCodomain mode

bool criterion_5(std::string& detail) {
  bool ok = true;
  std::ostringstream note;

  struct Setup {
    dynamics::CollatzMap map;
    Point carrier_bound;
    std::uint64_t scan;
  };
  const std::vector<Setup> setups = {
      {dynamics::CollatzMap::standard(), 64, 16},
      {dynamics::CollatzMap(5, 1, "5n+1"), 2048, 30},
  };

  for (const Setup& setup : setups) {
    const topology::Carrier carrier(setup.carrier_bound);
    const dynamics::CycleRegistry registry = dynamics::find_cycles(
        setup.map, setup.scan, dynamics::OrbitLimits{});
    const thermo::Potential key = thermo::key_potential(
        setup.map, carrier, dynamics::OrbitLimits{});
    for (const dynamics::Cycle& cycle : registry.cycles()) {
      const Rational average = thermo::orbit_average(key, cycle);
      if (average != Rational(cycle.element_sum())) ok = false;
      note << setup.map.label() << " cycle min "
           << cycle.min_element().str() << " avg "
           << rational_string(average) << "; ";
    }
    const topology::Topology topo =
        topology::generate(topology::collatz_subbasis(carrier));
    const thermo::ContinuityCertificate certificate =
        thermo::check_potential_continuity(
            key, topo, thermo::CodomainMode::GeneratedCodomain);
    if (!certificate.continuous) ok = false;
  }

  detail = note.str();
  return ok;
}

// ---------------------------------------------------------------------------
// 6. one thousand random convex combinations of (5,1) orbit measures
//    decompose to exactly their construction weights

bool criterion_6(std::string& detail) {
  const dynamics::CollatzMap map(5, 1, "5n+1");
  const topology::Carrier carrier(2048);
  const dynamics::CycleRegistry registry =
      dynamics::find_cycles(map, 30, dynamics::OrbitLimits{});
  if (registry.cycles().size() != 3) {
    detail = "expected three (5,1) cycles";
    return false;
  }
  std::vector<measure::RationalMeasure> ergodic;
  for (const dynamics::Cycle& cycle : registry.cycles()) {
    ergodic.push_back(measure::orbit_measure(cycle, carrier).measure);
  }

  std::mt19937_64 rng(20260814);
  std::uniform_int_distribution<int> numerator(1, 20);
  std::uniform_int_distribution<int> denominator(1, 20);
  std::uniform_int_distribution<int> coin(0, 1);

  std::size_t trials = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Rational> raw(ergodic.size(), Rational(0));
    bool any = false;
    for (std::size_t i = 0; i < ergodic.size(); ++i) {
      if (coin(rng) == 1) {
        raw[i] = Rational(numerator(rng), denominator(rng));
        any = true;
      }
    }
    if (!any) raw[trial % ergodic.size()] = Rational(1);
    Rational total(0);
    for (const Rational& w : raw) total += w;

    std::vector<std::pair<Rational, measure::RationalMeasure>> blend;
    std::vector<Rational> weights(ergodic.size());
    for (std::size_t i = 0; i < ergodic.size(); ++i) {
      weights[i] = raw[i] / total;
      if (weights[i] != 0) blend.emplace_back(weights[i], ergodic[i]);
    }
    const measure::RationalMeasure mixed =
        measure::convex_combination(blend);

    const std::vector<measure::ErgodicComponent> components =
        measure::ergodic_decomposition(mixed, registry);

    // Exact weight match, positive components only, registry order.
    std::vector<Rational> recovered(ergodic.size(), Rational(0));
    std::vector<std::pair<Rational, measure::RationalMeasure>> rebuild;
    bool component_ok = true;
    for (const measure::ErgodicComponent& component : components) {
      bool placed = false;
      for (std::size_t i = 0; i < registry.cycles().size(); ++i) {
        if (registry.cycles()[i].min_element() ==
            component.cycle.min_element()) {
          recovered[i] = component.weight;
          rebuild.emplace_back(component.weight, ergodic[i]);
          placed = true;
        }
      }
      if (!placed || component.weight <= 0) component_ok = false;
    }
    if (!component_ok || recovered != weights) return false;
    if (measure::convex_combination(rebuild) != mixed) return false;
    ++trials;
  }

  detail = std::to_string(trials) + " random decompositions exact";
  return trials == 1000;
}

// ---------------------------------------------------------------------------
// 7. pressure dichotomy: unique equilibria for the (3,1) battery at scan
//    10^6; exists-not-unique with pressure exactly 1 for the (5,1) union
//    indicator; synthetic larger cycle strictly raises key pressure

bool criterion_7(std::string& detail) {
  bool ok = true;
  std::ostringstream note;

  const auto start = Clock::now();
  const dynamics::CycleRegistry standard = dynamics::find_cycles(
      dynamics::CollatzMap::standard(), 1000000, dynamics::OrbitLimits{});
  const double scan_seconds = seconds_since(start);
  if (scan_seconds >= 120.0) ok = false;
  if (standard.cycles().size() != 1 || !standard.escaped_seeds().empty()) {
    ok = false;
  }

  const topology::Carrier small_carrier(64);
  const thermo::DichotomyReport report = thermo::dichotomy_report(
      standard, small_carrier, dynamics::OrbitLimits{}, 20260814);
  for (const thermo::BatteryEntry& entry : report.battery) {
    if (!entry.exists || !entry.unique) ok = false;
  }
  if (report.verdict.find("unique for every battery potential") ==
      std::string::npos) {
    ok = false;
  }
  note << "(3,1) scan 10^6 in " << scan_seconds << "s, battery "
       << report.battery.size() << " all unique; ";

  const dynamics::CollatzMap five(5, 1, "5n+1");
  const topology::Carrier carrier(2048);
  const dynamics::CycleRegistry registry =
      dynamics::find_cycles(five, 30, dynamics::OrbitLimits{});
  if (registry.cycles().size() < 2) ok = false;
  PointSet union_set;
  for (const dynamics::Cycle& cycle : registry.cycles()) {
    union_set = set_union(union_set, cycle_points(cycle));
  }
  const thermo::EquilibriumStates chi = thermo::equilibrium_states(
      thermo::indicator_potential(carrier, union_set, "chi"), registry);
  const bool chi_ok = chi.status == thermo::PressureStatus::Finite &&
                      chi.pressure_value == Rational(1) &&
                      chi.argmax.size() == registry.cycles().size() &&
                      !chi.unique;
  if (!chi_ok) ok = false;
  note << "(5,1) chi_union pressure "
       << (chi.pressure_value ? rational_string(*chi.pressure_value)
                              : std::string("(none)"))
       << " on " << chi.argmax.size() << " cycles; ";

  // Synthetic registries: adding a strictly larger real cycle must raise
  // the key-potential pressure.
  const thermo::Potential key =
      thermo::key_potential(five, carrier, dynamics::OrbitLimits{});
  const dynamics::CycleRegistry lone(five, 30, dynamics::OrbitLimits{},
                                     {registry.cycles()[0]}, {});
  const dynamics::CycleRegistry widened(
      five, 30, dynamics::OrbitLimits{},
      {registry.cycles()[0], registry.cycles()[1]}, {});
  const thermo::PressureResult before = thermo::pressure(key, lone);
  const thermo::PressureResult after = thermo::pressure(key, widened);
  const bool monotone = before.finite() && after.finite() &&
                        *before.value == Rational(40) &&
                        *after.value == Rational(1167) &&
                        *before.value < *after.value;
  if (!monotone) ok = false;
  note << "synthetic cycle raises pressure "
       << (before.value ? rational_string(*before.value) : "?") << " -> "
       << (after.value ? rational_string(*after.value) : "?");

  detail = note.str();
  return ok;
}

// ---------------------------------------------------------------------------
// 8. transfer lemma over one thousand random families, against brute force

bool criterion_8(std::string& detail) {
  std::mt19937_64 rng(20260814);
  std::size_t engaged = 0;  // trials where every per-topology check passed

  for (int trial = 0; trial < 1000; ++trial) {
    std::uniform_int_distribution<Point> carrier_size(4, 12);
    const Point n = carrier_size(rng);
    const topology::Carrier carrier(n);
    std::uniform_int_distribution<std::size_t> family_size(1, 4);
    std::uniform_int_distribution<std::size_t> set_count(1, 5);
    std::uniform_int_distribution<Point> point_of(1, n);

    // Random topologies from random subbases.
    std::vector<topology::Topology> family;
    const std::size_t members = family_size(rng);
    for (std::size_t t = 0; t < members; ++t) {
      std::vector<PointSet> sets;
      const std::size_t count = set_count(rng);
      for (std::size_t s = 0; s < count; ++s) {
        PointSet set;
        const std::size_t size = 1 + point_of(rng) % 4;
        for (std::size_t i = 0; i < size; ++i) set.push_back(point_of(rng));
        sets.push_back(make_point_set(std::move(set)));
      }
      family.push_back(
          topology::generate(topology::SubbasisFamily(carrier, sets)));
    }

    // Random total map on the carrier.
    std::vector<Point> images(n);
    for (Point x = 1; x <= n; ++x) images[x - 1] = point_of(rng);
    const topology::PartialPointMap f =
        [&images, n](Point x) -> std::optional<Point> {
      return x >= 1 && x <= n ? std::optional<Point>(images[x - 1])
                              : std::nullopt;
    };

    // Brute-force per-topology sigma-algebras and measurability.
    std::vector<std::vector<Mask>> brute_atoms;
    std::vector<bool> brute_measurable;
    std::vector<std::set<Mask>> measurable_families;
    for (const topology::Topology& topo : family) {
      const std::set<Mask> opens = opens_of_topology(topo);
      const std::vector<Mask> atoms = oracle::atoms_from_family(n, opens);

      // Library Borel atoms must agree with the brute-force ones.
      const measurable::AtomPartition lib_borel = measurable::borel(topo);
      std::set<Mask> lib_atoms;
      for (const PointSet& atom : lib_borel.atoms()) {
        lib_atoms.insert(oracle::to_mask(atom));
      }
      if (lib_atoms != std::set<Mask>(atoms.begin(), atoms.end())) {
        detail = "Borel atoms disagree with brute force";
        return false;
      }

      // All measurable sets (unions of atoms) and map measurability.
      std::set<Mask> sigma;
      bool measurable = true;
      const Mask full = oracle::full_mask(n);
      for (Mask u = 0;; ++u) {
        if (oracle::union_of_atoms(u, atoms)) {
          sigma.insert(u);
          Mask preimage = 0;
          for (Point x = 1; x <= n; ++x) {
            if (u & (Mask(1) << (images[x - 1] - 1))) {
              preimage |= Mask(1) << (x - 1);
            }
          }
          if (!oracle::union_of_atoms(preimage, atoms)) measurable = false;
        }
        if (u == full) break;
      }
      brute_atoms.push_back(atoms);
      brute_measurable.push_back(measurable);
      measurable_families.push_back(std::move(sigma));
    }

    // Brute-force intersection sigma-algebra: sets measurable everywhere.
    std::set<Mask> common = measurable_families.front();
    for (std::size_t i = 1; i < measurable_families.size(); ++i) {
      std::set<Mask> meet;
      for (Mask u : common) {
        if (measurable_families[i].count(u)) meet.insert(u);
      }
      common = std::move(meet);
    }
    const std::vector<Mask> common_atoms =
        oracle::atoms_from_family(n, common);

    // Library intersection structures must validate and agree.
    std::vector<measurable::AtomPartition> borels;
    borels.reserve(family.size());
    for (const topology::Topology& topo : family) {
      borels.push_back(measurable::borel(topo));
    }
    const measurable::AtomPartition meet = measurable::intersect_sigma(borels);
    std::set<Mask> lib_common_atoms;
    for (const PointSet& atom : meet.atoms()) {
      lib_common_atoms.insert(oracle::to_mask(atom));
    }
    if (lib_common_atoms !=
        std::set<Mask>(common_atoms.begin(), common_atoms.end())) {
      detail = "intersection atoms disagree with brute force";
      return false;
    }
    (void)topology::intersect_topologies(family);  // constructor-validated

    // The transfer lemma, library side, against the brute-force verdicts.
    const measurable::TransferCheck transfer =
        measurable::measurability_transfer_check(
            f, family, topology::SafeZone::whole(carrier));
    if (!transfer.transfer_holds) {
      detail = "transfer lemma failed on trial " + std::to_string(trial);
      return false;
    }
    if (transfer.per_topology.size() != family.size()) {
      detail = "per-topology verdict count mismatch";
      return false;
    }
    bool brute_all = true;
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (transfer.per_topology[i].measurable != brute_measurable[i]) {
        detail = "per-topology verdict disagrees with brute force";
        return false;
      }
      brute_all = brute_all && brute_measurable[i];
    }
    if (brute_all) {
      ++engaged;
      bool brute_meet_measurable = true;
      for (Mask u : common) {
        Mask preimage = 0;
        for (Point x = 1; x <= n; ++x) {
          if (u & (Mask(1) << (images[x - 1] - 1))) {
            preimage |= Mask(1) << (x - 1);
          }
        }
        if (!common.count(preimage)) brute_meet_measurable = false;
      }
      if (!brute_meet_measurable) {
        detail = "brute force refutes the lemma on trial " +
                 std::to_string(trial);
        return false;
      }
      if (!transfer.intersection || !transfer.intersection->measurable) {
        detail = "library misses intersection measurability";
        return false;
      }
    }
  }

  detail = "1000 trials, " + std::to_string(engaged) +
           " with all per-topology checks passing";
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "recurrence equals periodicity at N=2^17, scan 2^16", criterion_1},
      {2, "generated topology strictly coarser than discrete", criterion_2},
      {3, "singleton derivations cover every safe point", criterion_3},
      {4, "openness of cycles and doubling chains, exhaustive N<=12",
       criterion_4},
      {5, "key potential orbit averages equal cycle sums", criterion_5},
      {6, "ergodic decomposition round trip, 1000 random mixtures",
       criterion_6},
      {7, "pressure dichotomy: unique vs shared equilibria", criterion_7},
      {8, "transfer lemma on 1000 random families vs brute force",
       criterion_8},
  };

  bool all_pass = true;
  for (const Criterion& criterion : criteria) {
    std::string detail;
    bool pass = false;
    try {
      pass = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %d. %s%s%s\n", pass ? "PASS" : "FAIL", criterion.id,
                criterion.title, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
    if (!pass) all_pass = false;
  }
  return all_pass ? 0 : 1;
}
