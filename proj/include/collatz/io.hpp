#pragma once

/// JSON serialization and file persistence.
///
/// Every structure serializes with deterministic key order and with big
/// integers and rationals as decimal strings, so round trips are exact and
/// repeated runs produce byte-identical files. Writes are atomic
/// (temp file + rename) so a crashed run never leaves a torn cache.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "collatz/dynamics.hpp"
#include "collatz/measurable.hpp"
#include "collatz/measure.hpp"
#include "collatz/thermo.hpp"
#include "collatz/topology.hpp"

namespace collatz::io {

/// Preserves insertion order, giving deterministic dumps.
using Json = nlohmann::ordered_json;

/// File-system or serialization failure (maps to the IO exit code).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Registry schema: {map: {a, b, label}, scan_bound, step_limit,
/// value_limit, cycles: [[ints...]...], escaped: [ints...]} with every
/// integer as a decimal string. Cycles keep the registry order (ascending
/// minimum element) and each cycle its canonical rotation.
Json registry_to_json(const dynamics::CycleRegistry& registry);
dynamics::CycleRegistry registry_from_json(const Json& json);

/// Topology dump: {carrier: N, min_nbhd: {"x": [ints]}} with keys in
/// ascending point order; whole-carrier neighborhoods are materialized.
Json topology_to_json(const topology::Topology& topology);

/// Partition dump: {carrier: N, atoms: [[ints...]...]} ascending by block
/// minimum.
Json partition_to_json(const measurable::AtomPartition& partition);

/// Measure: {carrier: N, weights: {"x": "p/q"}} ascending by point.
Json measure_to_json(const measure::RationalMeasure& measure);
measure::RationalMeasure measure_from_json(const Json& json);

/// Decomposition output: [{cycle_min, weight}...] in component order.
Json decomposition_to_json(
    const std::vector<measure::ErgodicComponent>& components);

/// FNV-1a 64-bit digest of the canonical registry serialization; used to
/// key the registry cache and stamp reports.
std::uint64_t registry_digest(const dynamics::CycleRegistry& registry);

/// Report schema: {map, registry_digest, cycles: n, battery: [{potential,
/// pressure: "p/q", argmax: [cycle_min...], unique}], verdict}. Pressure is
/// null for an empty registry.
Json report_to_json(const thermo::DichotomyReport& report,
                    std::uint64_t digest);

/// Reads a whole file; throws IoError when unreadable.
std::string read_text(const std::filesystem::path& path);

/// Writes via a sibling temp file and rename; throws IoError when the
/// target is unwritable.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text);

/// JSON conveniences over the text helpers; parse failures throw IoError.
Json read_json(const std::filesystem::path& path);
void write_json_atomic(const std::filesystem::path& path, const Json& json);

}  // namespace collatz::io
