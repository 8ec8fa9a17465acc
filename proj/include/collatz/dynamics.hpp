#pragma once

#include <optional>
#include <string>
#include <vector>

#include "collatz/numeric.hpp"

namespace collatz::dynamics {

/// The map n -> a*n + b on odd n, n -> n/2 on even n, over positive integers.
/// The standard map is (3, 1). The constructor rejects parameter pairs for
/// which a*n + b is not a positive even number for every odd n >= 1; with
/// a > 0 that pins a odd, b odd and a + b > 0.
class CollatzMap {
 public:
  CollatzMap(BigInt odd_multiplier, BigInt odd_offset, std::string label);

  /// The (3n+1, n/2) map with label "collatz".
  static CollatzMap standard();

  const BigInt& odd_multiplier() const { return a_; }
  const BigInt& odd_offset() const { return b_; }
  const std::string& label() const { return label_; }

  bool operator==(const CollatzMap& other) const {
    return a_ == other.a_ && b_ == other.b_;
  }

 private:
  BigInt a_;
  BigInt b_;
  std::string label_;
};

/// One application of the map. Requires n >= 1; exact arithmetic throughout.
BigInt step(const CollatzMap& map, const BigInt& n);

/// A periodic orbit, rotated so the minimum element leads. elements[i] maps
/// to elements[(i+1) % size] and all elements are distinct.
class Cycle {
 public:
  /// Validates map-consistency, distinctness, and rotates canonically.
  Cycle(const CollatzMap& map, std::vector<BigInt> elements);

  const std::vector<BigInt>& elements() const { return elements_; }
  std::size_t length() const { return elements_.size(); }
  const BigInt& min_element() const { return elements_.front(); }
  bool contains(const BigInt& value) const;

  /// Sum of the elements (the quantity the key potential reports).
  BigInt element_sum() const;

  bool operator==(const Cycle& other) const {
    return elements_ == other.elements_;
  }

 private:
  std::vector<BigInt> elements_;
};

enum class OrbitStatus { Cyclic, Escaped };

/// Limits that make every orbit search total: the walk stops after
/// step_limit applications or as soon as a value exceeds value_limit.
struct OrbitLimits {
  std::uint64_t step_limit = 4096;
  BigInt value_limit = BigInt(1) << 64;
};

/// Forward orbit of a seed, split at the first cycle entry.
///
/// status == Cyclic: tail (pre-periodic segment, starts with the seed unless
/// the seed is periodic) followed by cycle is exactly the forward orbit.
/// status == Escaped: a limit fired before any value repeated; tail holds
/// the visited prefix (truncated to the fast-path window when the walk was
/// long), steps_taken and last_value record where the walk stopped.
struct OrbitResult {
  BigInt seed;
  OrbitStatus status = OrbitStatus::Escaped;
  std::vector<BigInt> tail;
  std::optional<Cycle> cycle;
  std::uint64_t steps_taken = 0;
  BigInt last_value;

  bool cyclic() const { return status == OrbitStatus::Cyclic; }
};

/// Iterates the map from seed with Brent cycle detection behind a bounded
/// visited-set fast path. fast_path_window is exposed so tests can force the
/// Brent branch; both branches return identical results.
OrbitResult orbit(const CollatzMap& map, const BigInt& seed,
                  const OrbitLimits& limits,
                  std::uint64_t fast_path_window = 4096);

/// The forward-orbit set {n, f(n), f^2(n), ...} when it is provably finite
/// within the limits; nullopt (Unknown) when the walk escaped.
std::optional<std::vector<BigInt>> orbit_set(const CollatzMap& map,
                                             const BigInt& n,
                                             const OrbitLimits& limits);

/// Periodic iff the orbit closes with an empty tail, i.e. the seed sits on
/// its own cycle. NotPeriodicWithinLimits covers both a nonempty tail and an
/// escaped walk.
struct PeriodicityResult {
  std::optional<Cycle> cycle;  // engaged iff periodic
  bool periodic() const { return cycle.has_value(); }
};
PeriodicityResult is_periodic(const CollatzMap& map, const BigInt& n,
                              const OrbitLimits& limits);

/// Every cycle discovered from seeds 1..scan_bound, plus the seeds whose
/// walks hit a limit. Cycles are pairwise disjoint, canonically rotated, and
/// ordered by minimum element.
class CycleRegistry {
 public:
  CycleRegistry(CollatzMap map, BigInt scan_bound, OrbitLimits limits,
                std::vector<Cycle> cycles, std::vector<BigInt> escaped_seeds);

  const CollatzMap& map() const { return map_; }
  const std::string& map_label() const { return map_.label(); }
  const BigInt& scan_bound() const { return scan_bound_; }
  const OrbitLimits& limits() const { return limits_; }
  const std::vector<Cycle>& cycles() const { return cycles_; }
  const std::vector<BigInt>& escaped_seeds() const { return escaped_seeds_; }

  bool empty() const { return cycles_.empty(); }

  /// The cycle containing value, if any.
  const Cycle* cycle_through(const BigInt& value) const;

  /// Full invariant audit: disjointness, canonical rotation, map
  /// consistency, and (expensive) the accounting of every seed <= scan_bound.
  /// Intended for tests and hand-assembled registries.
  void verify_accounting() const;

  bool operator==(const CycleRegistry& other) const;

 private:
  CollatzMap map_;
  BigInt scan_bound_;
  OrbitLimits limits_;
  std::vector<Cycle> cycles_;       // sorted by min element
  std::vector<BigInt> escaped_seeds_;  // sorted
};

/// Scans every seed <= scan_bound, deduplicating cycles by canonical
/// rotation. A memo table over small values makes the scan near-linear; the
/// memoized scan is exactly equivalent to classifying each seed with a fresh
/// orbit() call under the same limits.
CycleRegistry find_cycles(const CollatzMap& map, const BigInt& scan_bound,
                          const OrbitLimits& limits);

}  // namespace collatz::dynamics
