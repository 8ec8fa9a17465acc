#include "collatz/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "collatz/dynamics.hpp"
#include "collatz/io.hpp"
#include "collatz/measurable.hpp"
#include "collatz/measure.hpp"
#include "collatz/numeric.hpp"
#include "collatz/sets.hpp"
#include "collatz/thermo.hpp"
#include "collatz/topology.hpp"

namespace collatz::cli {
namespace {

using io::Json;

int usage_error(std::ostream& err, const std::string& message) {
  err << "error: " << message << "\n";
  return kUsage;
}

std::string join_big(const std::vector<BigInt>& values, char separator) {
  std::string text;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) text += separator;
    text += values[i].str();
  }
  return text;
}

std::string join_points(const PointSet& points, char separator) {
  std::string text;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) text += separator;
    text += std::to_string(points[i]);
  }
  return text;
}

Json big_strings(const std::vector<BigInt>& values) {
  Json array = Json::array();
  for (const BigInt& value : values) array.push_back(value.str());
  return array;
}

Json point_numbers(const PointSet& points) {
  Json array = Json::array();
  for (Point x : points) array.push_back(x);
  return array;
}

std::string digest_text(std::uint64_t digest) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "fnv1a64:%016" PRIx64, digest);
  return buffer;
}

/// The subbasis the audits inspect. Clipping is deliberate sabotage for
/// testing the audit itself: boundary pairs {n,2n} with 2n beyond the
/// carrier are truncated to bare {n} instead of being dropped, which makes
/// boundary odd singletons spuriously open.
topology::SubbasisFamily audit_subbasis(const topology::Carrier& carrier,
                                        bool clip) {
  if (!clip) return topology::collatz_subbasis(carrier);
  std::vector<PointSet> sets;
  sets.reserve(carrier.bound());
  for (Point n = 1; n <= carrier.bound(); ++n) {
    if (n <= carrier.bound() / 2) {
      sets.push_back({n, 2 * n});
    } else {
      sets.push_back({n});
    }
  }
  return topology::SubbasisFamily(carrier, std::move(sets));
}

/// Loads the registry from the cache when the cached scan matches the
/// requested one exactly; otherwise scans and (when a cache path is set)
/// rewrites the cache atomically. A matching cache leaves the file
/// untouched, so repeated runs are byte-identical.
dynamics::CycleRegistry obtain_registry(const RunConfig& config,
                                        std::ostream& err) {
  const BigInt scan(config.scan_bound);
  if (config.cache_path) {
    try {
      dynamics::CycleRegistry cached =
          io::registry_from_json(io::read_json(*config.cache_path));
      if (cached.map() == config.map && cached.scan_bound() == scan &&
          cached.limits().step_limit == config.limits.step_limit &&
          cached.limits().value_limit == config.limits.value_limit) {
        err << "cache hit: " << config.cache_path->string() << "\n";
        return cached;
      }
      err << "cache mismatch: rescanning " << config.cache_path->string()
          << "\n";
    } catch (const io::IoError&) {
      // Missing or damaged cache: fall through to a fresh scan.
    }
  }
  dynamics::CycleRegistry registry =
      dynamics::find_cycles(config.map, scan, config.limits);
  if (config.cache_path) {
    io::write_json_atomic(*config.cache_path, io::registry_to_json(registry));
  }
  return registry;
}

// ---------------------------------------------------------------------------
// orbit

int cmd_orbit(const RunConfig& config, const std::string& seed_text,
              std::ostream& out, std::ostream& err) {
  const std::optional<BigInt> seed = parse_big(seed_text);
  if (!seed || *seed < 1) {
    return usage_error(err, "orbit seed must be a positive integer, got '" +
                                seed_text + "'");
  }

  const dynamics::OrbitResult result =
      dynamics::orbit(config.map, *seed, config.limits);
  const std::string status = result.cyclic() ? "cyclic" : "escaped";
  const std::vector<BigInt> cycle_elements =
      result.cycle ? result.cycle->elements() : std::vector<BigInt>{};

  if (config.format == "json") {
    Json json;
    json["map"] = config.map.label();
    json["seed"] = seed->str();
    json["status"] = status;
    json["steps"] = result.steps_taken;
    json["tail"] = big_strings(result.tail);
    json["cycle"] = big_strings(cycle_elements);
    json["last"] = result.last_value.str();
    out << json.dump(2) << "\n";
  } else if (config.format == "csv") {
    out << "map,seed,status,steps,tail,cycle,last\n";
    out << config.map.label() << "," << seed->str() << "," << status << ","
        << result.steps_taken << "," << join_big(result.tail, ';') << ","
        << join_big(cycle_elements, ';') << "," << result.last_value.str()
        << "\n";
  } else {
    out << "map " << config.map.label() << "\n";
    out << "seed " << seed->str() << "\n";
    out << "status " << status << "\n";
    out << "steps " << result.steps_taken << "\n";
    out << "tail "
        << (result.tail.empty() ? "(empty)" : join_big(result.tail, ','))
        << "\n";
    out << "cycle "
        << (cycle_elements.empty() ? "(none)" : join_big(cycle_elements, ','))
        << "\n";
    out << "last " << result.last_value.str() << "\n";
  }
  return result.cyclic() ? kOk : kEscaped;
}

// ---------------------------------------------------------------------------
// cycles

int cmd_cycles(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const dynamics::CycleRegistry registry = obtain_registry(config, err);

  if (config.format == "json") {
    out << io::registry_to_json(registry).dump(2) << "\n";
  } else if (config.format == "csv") {
    out << "cycle_min,length,sum\n";
    for (const dynamics::Cycle& cycle : registry.cycles()) {
      out << cycle.min_element().str() << "," << cycle.length() << ","
          << cycle.element_sum().str() << "\n";
    }
  } else {
    out << "map " << registry.map_label() << "\n";
    out << "scan " << registry.scan_bound().str() << "\n";
    out << "cycles " << registry.cycles().size() << "\n";
    for (const dynamics::Cycle& cycle : registry.cycles()) {
      out << "cycle min=" << cycle.min_element().str()
          << " length=" << cycle.length()
          << " sum=" << cycle.element_sum().str() << " elements="
          << join_big(cycle.elements(), ',') << "\n";
    }
    out << "escaped seeds "
        << (registry.escaped_seeds().empty()
                ? "(none)"
                : join_big(registry.escaped_seeds(), ','))
        << "\n";
    out << "digest " << digest_text(io::registry_digest(registry)) << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// audits

struct AuditLine {
  explicit AuditLine(std::string name) : check(std::move(name)) {}

  std::string check;
  std::string status = "pass";  // pass | fail | skip
  Json witnesses = Json::array();
  Json skipped = Json::array();
  std::string note;
};

void emit_audit(std::ostream& out, const AuditLine& line, bool& all_pass) {
  Json json;
  json["check"] = line.check;
  json["status"] = line.status;
  json["witnesses"] = line.witnesses;
  json["skipped_boundary"] = line.skipped;
  if (!line.note.empty()) json["note"] = line.note;
  out << json.dump() << "\n";
  if (line.status == "fail") all_pass = false;
}

/// U open iff every member's minimal neighborhood stays inside U; spelled
/// out here (instead of is_open) to keep singleton checks O(|mn|).
bool open_in(const topology::Topology& topology, const PointSet& set) {
  for (Point x : set) {
    if (!is_subset(topology.min_nbhd(x), set)) return false;
  }
  return true;
}

int cmd_topology_audit(const RunConfig& config, std::ostream& out,
                       std::ostream& err) {
  const topology::Carrier carrier(config.carrier_bound);
  const topology::SubbasisFamily subbasis =
      audit_subbasis(carrier, config.clip_subbasis);
  const topology::Topology topo = topology::generate(subbasis);
  const topology::Topology discrete = topology::discrete_topology(carrier);
  const topology::SafeZone zone = topology::safe_pairs(carrier);
  bool all_pass = true;

  {  // Every subbasis set is open in the topology it generates.
    AuditLine line("subbasis-sets-open");
    for (const PointSet& set : subbasis.sets()) {
      if (!open_in(topo, set)) line.witnesses.push_back(point_numbers(set));
    }
    if (!line.witnesses.empty()) line.status = "fail";
    emit_audit(out, line, all_pass);
  }

  {  // Safe even singletons are open; boundary evens are skipped.
    AuditLine line("even-singletons-open");
    for (Point x = 2; x <= carrier.bound(); x += 2) {
      if (!zone.safe(x)) {
        line.skipped.push_back(x);
        continue;
      }
      const PointSet& nbhd = topo.min_nbhd(x);
      if (nbhd.size() != 1 || nbhd.front() != x) line.witnesses.push_back(x);
    }
    if (!line.witnesses.empty()) line.status = "fail";
    emit_audit(out, line, all_pass);
  }

  {  // No odd singleton is open anywhere: safe odds carry {x,2x}, boundary
    // odds carry the whole carrier. A clipped subbasis breaks this.
    AuditLine line("odd-singletons-not-open");
    for (Point x = 1; x <= carrier.bound(); x += 2) {
      const PointSet& nbhd = topo.min_nbhd(x);
      if (nbhd.size() == 1 && nbhd.front() == x) line.witnesses.push_back(x);
    }
    if (!line.witnesses.empty()) line.status = "fail";
    emit_audit(out, line, all_pass);
  }

  {  // The generated topology is strictly coarser than the discrete one.
    AuditLine line("strictly-coarser-than-discrete");
    const topology::CoarsenessResult result =
        topology::is_coarser(topo, discrete);
    if (result.relation == topology::Coarseness::StrictlyCoarser) {
      if (result.open_only_in_right) {
        line.witnesses.push_back(point_numbers(*result.open_only_in_right));
        line.note = "witness set is discrete-open but not generated-open";
      }
    } else {
      line.status = "fail";
      line.note = "expected StrictlyCoarser";
    }
    emit_audit(out, line, all_pass);
  }

  {  // The hand-built witness topology sits strictly between: coarser than
    // discrete, with all-singleton Borel atoms.
    AuditLine line("witness-topology");
    try {
      const topology::Topology witness = topology::witness_topology(carrier);
      const topology::CoarsenessResult result =
          topology::is_coarser(witness, discrete);
      if (result.relation != topology::Coarseness::StrictlyCoarser) {
        line.status = "fail";
        line.note = "witness topology is not strictly coarser than discrete";
      } else {
        const measurable::AtomPartition atoms = measurable::borel(witness);
        for (const PointSet& atom : atoms.atoms()) {
          if (atom.size() != 1) line.witnesses.push_back(point_numbers(atom));
        }
        if (!line.witnesses.empty()) {
          line.status = "fail";
          line.note = "witness Borel atoms are not all singletons";
        }
      }
    } catch (const std::exception& e) {
      line.status = "fail";
      line.note = e.what();
    }
    emit_audit(out, line, all_pass);
  }

  {  // Singleton derivations replay for every safe point.
    AuditLine line("derive-singletons");
    const topology::DerivationLog log =
        topology::derive_singletons(carrier, subbasis, config.map);
    line.witnesses = point_numbers(log.failed);
    line.skipped = point_numbers(log.skipped);
    if (!log.success()) line.status = "fail";
    line.note = std::to_string(log.derived.size()) + " singletons derived";
    emit_audit(out, line, all_pass);
  }

  {  // Registry cycles that fit inside the carrier are open sets.
    AuditLine line("cycles-open");
    const dynamics::CycleRegistry registry = obtain_registry(config, err);
    for (const dynamics::Cycle& cycle : registry.cycles()) {
      PointSet orbit_set;
      bool inside = true;
      for (const BigInt& element : cycle.elements()) {
        if (element > carrier.bound()) {
          inside = false;
          break;
        }
        orbit_set.push_back(element.convert_to<Point>());
      }
      if (!inside) {
        line.skipped.push_back(cycle.min_element().str());
        continue;
      }
      orbit_set = make_point_set(std::move(orbit_set));
      if (!open_in(topo, orbit_set)) {
        line.witnesses.push_back(point_numbers(orbit_set));
      }
    }
    if (!line.witnesses.empty()) line.status = "fail";
    emit_audit(out, line, all_pass);
  }

  {  // Maximal doubling chains {y, 2y, ..., 2^k y} from each safe odd base
    // are open; bases past the midpoint have singleton chains and are
    // skipped (odd singletons are not open).
    AuditLine line("doubling-chains-open");
    for (Point y = 1; y <= carrier.bound(); y += 2) {
      if (!zone.safe(y)) {
        line.skipped.push_back(y);
        continue;
      }
      PointSet chain;
      for (Point v = y; v <= carrier.bound(); v *= 2) {
        chain.push_back(v);
        if (v > carrier.bound() / 2) break;
      }
      if (!open_in(topo, chain)) line.witnesses.push_back(y);
    }
    if (!line.witnesses.empty()) line.status = "fail";
    emit_audit(out, line, all_pass);
  }

  {  // Continuity of the map would force safe singletons open; verify the
    // two verdicts are consistent, whichever way they fall.
    AuditLine line("continuity-discreteness-consistency");
    const topology::ContinuityResult continuity = topology::check_continuity(
        topology::carrier_map(config.map, carrier), topo, topo,
        topology::safe_image(carrier, config.map));
    bool safe_singletons_open = true;
    for (Point x : zone.points()) {
      const PointSet& nbhd = topo.min_nbhd(x);
      if (nbhd.size() != 1 || nbhd.front() != x) {
        safe_singletons_open = false;
        break;
      }
    }
    line.skipped = point_numbers(continuity.skipped);
    if (continuity.continuous) {
      if (safe_singletons_open) {
        line.note = "map continuous and safe singletons open (discrete zone)";
      } else {
        line.status = "fail";
        line.note =
            "map continuous but some safe singleton is not open; "
            "contradicts the continuity-forces-discreteness lemma";
      }
    } else {
      line.note = "map discontinuous as expected (continuity would force "
                  "safe singletons open)";
      if (continuity.witness_point) {
        line.witnesses.push_back(*continuity.witness_point);
      }
    }
    emit_audit(out, line, all_pass);
  }

  return all_pass ? kOk : kCheckFailed;
}

int cmd_sigma_audit(const RunConfig& config, std::ostream& out,
                    std::ostream& /*err*/) {
  const topology::Carrier carrier(config.carrier_bound);
  const topology::SubbasisFamily subbasis =
      audit_subbasis(carrier, config.clip_subbasis);
  const topology::Topology topo = topology::generate(subbasis);
  const topology::Topology discrete = topology::discrete_topology(carrier);
  const topology::Topology witness = topology::witness_topology(carrier);
  const topology::SafeZone zone = topology::safe_pairs(carrier);
  const topology::PartialPointMap f =
      topology::carrier_map(config.map, carrier);
  const measurable::AtomPartition atoms = measurable::borel(topo);
  bool all_pass = true;

  {  // Borel atoms partition the carrier (constructor-validated).
    AuditLine line("borel-atoms");
    line.note = std::to_string(atoms.atoms().size()) + " atoms";
    emit_audit(out, line, all_pass);
  }

  {  // Borel atoms of the witness topology are all singletons.
    AuditLine line("witness-borel-singletons");
    const measurable::AtomPartition witness_atoms = measurable::borel(witness);
    for (const PointSet& atom : witness_atoms.atoms()) {
      if (atom.size() != 1) line.witnesses.push_back(point_numbers(atom));
    }
    if (!line.witnesses.empty()) line.status = "fail";
    emit_audit(out, line, all_pass);
  }

  {  // The Borel sigma-algebra separates safe points: the atom of a safe x
    // meets the safe zone in exactly {x}.
    AuditLine line("safe-atoms-separate");
    const PointSet safe_points = zone.points();
    for (Point x : safe_points) {
      const PointSet meet = set_intersection(atoms.atom_of(x), safe_points);
      if (meet != PointSet{x}) line.witnesses.push_back(x);
    }
    line.skipped = point_numbers(zone.skipped());
    if (!line.witnesses.empty()) line.status = "fail";
    emit_audit(out, line, all_pass);
  }

  {  // The map is Borel-to-Borel measurable on the safe zone.
    AuditLine line("map-measurable-safe-zone");
    const measurable::MeasurabilityResult result =
        measurable::check_measurable(f, atoms, atoms, zone);
    if (!result.measurable) {
      line.status = "fail";
      if (result.witness_block) {
        line.witnesses.push_back(point_numbers(*result.witness_block));
      }
    }
    line.skipped = point_numbers(result.skipped);
    emit_audit(out, line, all_pass);
  }

  {  // Measurable for every family member implies measurable for the
    // intersection sigma-algebra.
    AuditLine line("transfer-lemma");
    const measurable::TransferCheck transfer =
        measurable::measurability_transfer_check(
            f, {topo, discrete, witness}, zone);
    if (!transfer.transfer_holds) line.status = "fail";
    std::string detail = "per-topology:";
    for (const measurable::MeasurabilityResult& result :
         transfer.per_topology) {
      detail += result.measurable ? " yes" : " no";
    }
    detail += transfer.intersection
                  ? (transfer.intersection->measurable ? "; intersection: yes"
                                                       : "; intersection: no")
                  : "; intersection: (not reached)";
    line.note = detail;
    emit_audit(out, line, all_pass);
  }

  {  // Meet laws: the intersection with itself and with the discrete Borel
    // sigma-algebra both return the Borel atoms unchanged.
    AuditLine line("intersection-laws");
    const bool idempotent =
        measurable::intersect_sigma({atoms, atoms}) == atoms;
    const bool absorbs_finer =
        measurable::intersect_sigma({measurable::borel(discrete), atoms}) ==
        atoms;
    if (!idempotent || !absorbs_finer) {
      line.status = "fail";
      line.note = idempotent ? "meet with finer sigma-algebra changed atoms"
                             : "self-meet changed atoms";
    }
    emit_audit(out, line, all_pass);
  }

  return all_pass ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// recurrence

int cmd_recurrence(const RunConfig& config, std::ostream& out,
                   std::ostream& /*err*/) {
  const topology::Carrier carrier(config.carrier_bound);
  const topology::Topology topo =
      topology::generate(topology::collatz_subbasis(carrier));
  const measure::RecurrenceReport report = measure::recurrence_scan(
      config.map, topo, static_cast<Point>(config.scan_bound), config.limits);

  if (config.format == "json") {
    Json json;
    json["map"] = config.map.label();
    json["carrier"] = config.carrier_bound;
    json["scan"] = config.scan_bound;
    json["recurrent"] = point_numbers(report.recurrent);
    json["periodic"] = point_numbers(report.periodic);
    json["skipped"] = point_numbers(report.skipped);
    json["lemma_holds"] = report.lemma_holds();
    out << json.dump(2) << "\n";
  } else if (config.format == "csv") {
    out << "point,recurrent,periodic,skipped\n";
    PointSet listed = set_union(report.recurrent, report.periodic);
    listed = set_union(listed, report.skipped);
    for (Point x : listed) {
      out << x << "," << (set_contains(report.recurrent, x) ? "yes" : "no")
          << "," << (set_contains(report.periodic, x) ? "yes" : "no") << ","
          << (set_contains(report.skipped, x) ? "yes" : "no") << "\n";
    }
  } else {
    out << "map " << config.map.label() << "\n";
    out << "scan 1.." << config.scan_bound << " (carrier "
        << config.carrier_bound << ")\n";
    out << "recurrent "
        << (report.recurrent.empty() ? "(none)"
                                     : join_points(report.recurrent, ','))
        << "\n";
    out << "periodic "
        << (report.periodic.empty() ? "(none)"
                                    : join_points(report.periodic, ','))
        << "\n";
    out << "skipped "
        << (report.skipped.empty() ? "(none)"
                                   : join_points(report.skipped, ','))
        << "\n";
    out << "lemma recurrent == periodic: "
        << (report.lemma_holds() ? "holds" : "FAILS") << "\n";
  }
  return report.lemma_holds() ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// pressure and report

void render_report(const thermo::DichotomyReport& report, std::uint64_t digest,
                   const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << io::report_to_json(report, digest).dump(2) << "\n";
  } else if (format == "csv") {
    out << "potential,pressure,argmax,unique\n";
    for (const thermo::BatteryEntry& entry : report.battery) {
      out << entry.potential << ","
          << (entry.pressure_value ? rational_string(*entry.pressure_value)
                                   : "")
          << "," << join_big(entry.argmax_minima, ';') << ","
          << (entry.unique ? "yes" : "no") << "\n";
    }
    out << "# verdict: " << report.verdict << "\n";
  } else {
    out << "map " << report.map_label << "\n";
    out << "registry digest " << digest_text(digest) << "\n";
    out << "cycles " << report.cycle_count << "\n";
    for (const thermo::BatteryEntry& entry : report.battery) {
      out << "potential " << entry.potential << ": pressure "
          << (entry.pressure_value ? rational_string(*entry.pressure_value)
                                   : "(undefined)")
          << ", argmax minima "
          << (entry.argmax_minima.empty() ? "(none)"
                                          : join_big(entry.argmax_minima, ','))
          << ", unique " << (entry.unique ? "yes" : "no") << "\n";
    }
    out << "verdict " << report.verdict << "\n";
  }
}

int cmd_pressure(const RunConfig& config, std::ostream& out,
                 std::ostream& err) {
  const dynamics::CycleRegistry registry = obtain_registry(config, err);
  const topology::Carrier carrier(config.carrier_bound);
  const std::uint64_t digest = io::registry_digest(registry);

  thermo::DichotomyReport report;
  report.map_label = registry.map_label();
  report.scan_bound = registry.scan_bound();
  report.cycle_count = registry.cycles().size();
  report.empty_registry = registry.empty();

  if (registry.empty()) {
    report.verdict =
        "no invariant probabilities discovered relative to the registry "
        "(scan bound " +
        registry.scan_bound().str() +
        "): the scan found no periodic orbit, so pressure is undefined";
    render_report(report, digest, config.format, out);
    err << "no invariant probabilities discovered\n";
    return kEmptyRegistry;
  }

  const thermo::Potential key =
      thermo::key_potential(config.map, carrier, config.limits);
  const thermo::EquilibriumStates states =
      thermo::equilibrium_states(key, registry);

  thermo::BatteryEntry entry;
  entry.potential = key.label();
  entry.status = states.status;
  entry.pressure_value = states.pressure_value;
  for (const dynamics::Cycle& cycle : states.argmax) {
    entry.argmax_minima.push_back(cycle.min_element());
  }
  entry.exists = !states.argmax.empty();
  entry.unique = states.unique;
  report.battery.push_back(entry);
  report.verdict =
      "key potential attains pressure " +
      rational_string(*states.pressure_value) + " on " +
      std::to_string(states.argmax.size()) +
      (states.argmax.size() == 1 ? " cycle" : " cycles") +
      "; equilibrium state " +
      (states.unique ? "unique" : "not unique") +
      " relative to the registry";

  render_report(report, digest, config.format, out);
  return kOk;
}

int cmd_report(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const dynamics::CycleRegistry registry = obtain_registry(config, err);
  const topology::Carrier carrier(config.carrier_bound);
  const thermo::DichotomyReport report =
      thermo::dichotomy_report(registry, carrier, config.limits, config.seed);

  render_report(report, io::registry_digest(registry), config.format, out);
  if (report.empty_registry) {
    err << "no invariant probabilities discovered\n";
    return kEmptyRegistry;
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{
      "desk-scale Collatz-style dynamics: exact orbits, cycle registries, "
      "doubling-pair topology and sigma-algebra audits, recurrence, and "
      "pressure reports"};
  app.name("collatz");
  app.fallthrough();  // global flags may follow the subcommand
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "configuration file; keys are the long option names");

  std::vector<std::string> map_parts = {"3,1"};
  std::uint64_t carrier_bound = 128;
  std::uint64_t scan_bound = 64;
  std::uint64_t step_limit = dynamics::OrbitLimits{}.step_limit;
  std::string value_limit = dynamics::OrbitLimits{}.value_limit.str();
  std::string format = "text";
  std::string cache;
  std::uint64_t seed = 0;
  bool clip = false;

  app.add_option("--map", map_parts,
                 "odd-step coefficients a,b of f(n) = a*n + b (a odd >= 1, "
                 "b odd, a + b > 0)")
      ->expected(1, 2)  // config files split the pair at the comma
      ->capture_default_str();
  app.add_option("--carrier", carrier_bound, "carrier bound N (points 1..N)")
      ->capture_default_str();
  app.add_option("--scan", scan_bound, "seed scan bound for cycle discovery")
      ->capture_default_str();
  app.add_option("--steps", step_limit, "orbit step limit")
      ->capture_default_str();
  app.add_option("--values", value_limit, "orbit value limit (decimal)")
      ->capture_default_str();
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  app.add_option("--cache", cache, "cycle registry cache path (.cycles.json)");
  app.add_option("--seed", seed, "seed for the report's random battery tables")
      ->capture_default_str();
  app.add_flag("--clip-subbasis", clip,
               "audit fault injection: truncate boundary pairs {n,2n} to "
               "{n} instead of dropping them");

  CLI::App* orbit_cmd = app.add_subcommand(
      "orbit", "walk one forward orbit and print its tail and cycle");
  std::string seed_text;
  orbit_cmd->add_option("seed", seed_text, "starting point (positive integer)")
      ->required();
  CLI::App* cycles_cmd = app.add_subcommand(
      "cycles", "scan seeds 1..scan for cycles and print the registry");
  CLI::App* topology_cmd = app.add_subcommand(
      "topology-audit",
      "check doubling-pair topology laws; one JSON verdict per line");
  CLI::App* sigma_cmd = app.add_subcommand(
      "sigma-audit",
      "check Borel sigma-algebra laws; one JSON verdict per line");
  CLI::App* recurrence_cmd = app.add_subcommand(
      "recurrence",
      "classify scanned points as recurrent/periodic and test equivalence");
  CLI::App* pressure_cmd = app.add_subcommand(
      "pressure", "pressure and equilibrium states of the key potential");
  CLI::App* report_cmd = app.add_subcommand(
      "report", "full dichotomy report over the potential battery");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  RunConfig config;
  try {
    std::string map_spec = map_parts.front();
    for (std::size_t i = 1; i < map_parts.size(); ++i) {
      map_spec += "," + map_parts[i];
    }
    const std::string::size_type comma = map_spec.find(',');
    if (comma == std::string::npos) {
      return usage_error(err, "--map expects 'a,b', got '" + map_spec + "'");
    }
    const std::optional<BigInt> a = parse_big(map_spec.substr(0, comma));
    const std::optional<BigInt> b = parse_big(map_spec.substr(comma + 1));
    if (!a || !b) {
      return usage_error(err, "--map expects 'a,b', got '" + map_spec + "'");
    }
    if (*a == 3 && *b == 1) {
      config.map = dynamics::CollatzMap::standard();
    } else {
      config.map = dynamics::CollatzMap(
          *a, *b, a->str() + "n" + (*b < 0 ? "" : "+") + b->str());
    }
  } catch (const std::invalid_argument& e) {
    return usage_error(err, std::string("--map: ") + e.what());
  }

  if (carrier_bound < 4) {
    return usage_error(err, "--carrier must be at least 4");
  }
  if (scan_bound < 1) return usage_error(err, "--scan must be positive");
  if (step_limit < 1) return usage_error(err, "--steps must be positive");
  const std::optional<BigInt> values = parse_big(value_limit);
  if (!values || *values < 1) {
    return usage_error(err, "--values must be a positive decimal integer");
  }

  config.carrier_bound = carrier_bound;
  config.scan_bound = scan_bound;
  config.limits.step_limit = step_limit;
  config.limits.value_limit = *values;
  config.format = format;
  if (!cache.empty()) config.cache_path = std::filesystem::path(cache);
  config.seed = seed;
  config.clip_subbasis = clip;

  const bool topology_dependent = topology_cmd->parsed() ||
                                  sigma_cmd->parsed() ||
                                  recurrence_cmd->parsed();
  if (topology_dependent && !(BigInt(config.scan_bound) * 2 <=
                              BigInt(config.carrier_bound))) {
    return usage_error(err,
                       "topology checks need scan*2 <= carrier so scanned "
                       "points keep untruncated neighborhoods (got scan " +
                           std::to_string(config.scan_bound) + ", carrier " +
                           std::to_string(config.carrier_bound) + ")");
  }

  try {
    if (orbit_cmd->parsed()) return cmd_orbit(config, seed_text, out, err);
    if (cycles_cmd->parsed()) return cmd_cycles(config, out, err);
    if (topology_cmd->parsed()) return cmd_topology_audit(config, out, err);
    if (sigma_cmd->parsed()) return cmd_sigma_audit(config, out, err);
    if (recurrence_cmd->parsed()) return cmd_recurrence(config, out, err);
    if (pressure_cmd->parsed()) return cmd_pressure(config, out, err);
    if (report_cmd->parsed()) return cmd_report(config, out, err);
    return usage_error(err, "no subcommand selected");
  } catch (const io::IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    return usage_error(err, e.what());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 70;  // EX_SOFTWARE: not part of the documented contract
  }
}

}  // namespace collatz::cli
