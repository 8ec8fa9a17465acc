#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "collatz/dynamics.hpp"
#include "collatz/numeric.hpp"
#include "collatz/sets.hpp"

namespace collatz::topology {

/// The finite truncation {1, ..., N} of the naturals. N >= 4 so the cycle
/// {1,2,4} always fits.
class Carrier {
 public:
  explicit Carrier(Point bound);

  Point bound() const { return bound_; }
  bool contains(Point x) const { return 1 <= x && x <= bound_; }
  /// The full point set {1..N}, materialized.
  PointSet all() const;

  bool operator==(const Carrier& other) const {
    return bound_ == other.bound_;
  }

 private:
  Point bound_;
};

/// A family of subsets used to generate a topology.
class SubbasisFamily {
 public:
  SubbasisFamily(Carrier carrier, std::vector<PointSet> sets);

  const Carrier& carrier() const { return carrier_; }
  const std::vector<PointSet>& sets() const { return sets_; }

 private:
  Carrier carrier_;
  std::vector<PointSet> sets_;
};

/// The doubling subbasis { {n, 2n} : 2n <= N }. Pairs that would poke out
/// of the carrier are dropped entirely, never clipped: a clipped pair {n}
/// would make an odd singleton spuriously open.
SubbasisFamily collatz_subbasis(const Carrier& carrier);

/// A finite topology, stored as its minimal-open-neighborhood function.
/// min_nbhd(x) is the smallest open set containing x; a set U is open iff
/// min_nbhd(x) is inside U for every x in U. The constructor validates
/// x in min_nbhd(x) and the preorder law
/// (y in min_nbhd(x) implies min_nbhd(y) subset of min_nbhd(x)).
class Topology {
 public:
  /// min_nbhds[x-1] is the neighborhood of x; an empty entry is shorthand
  /// for the whole carrier (a real neighborhood always holds x itself).
  Topology(Carrier carrier, std::vector<PointSet> min_nbhds);

  const Carrier& carrier() const { return carrier_; }
  const PointSet& min_nbhd(Point x) const;
  /// True when min_nbhd(x) is the whole carrier (the default for points no
  /// subbasis set touches).
  bool whole_nbhd(Point x) const { return nbhds_[x - 1].empty(); }

  bool operator==(const Topology& other) const {
    return carrier_ == other.carrier_ && nbhds_ == other.nbhds_;
  }

 private:
  Carrier carrier_;
  std::vector<PointSet> nbhds_;  // empty entry = whole carrier
  PointSet whole_;               // shared materialization of {1..N}
};

/// Coarsest topology containing every subbasis set: min_nbhd(x) is the
/// intersection of all subbasis sets containing x, defaulting to the whole
/// carrier when none does.
Topology generate(const SubbasisFamily& subbasis);

/// min_nbhd(x) = {x} everywhere.
Topology discrete_topology(const Carrier& carrier);

/// The topology whose opens are exactly the sets not containing 1 plus the
/// sets containing {1,2}: min_nbhd(1) = {1,2}, singletons elsewhere.
Topology witness_topology(const Carrier& carrier);

struct OpennessCheck {
  bool open = false;
  /// On failure: a point of the set whose neighborhood escapes it.
  std::optional<Point> witness;
};

/// U open iff every member's minimal neighborhood stays inside U.
OpennessCheck is_open(const Topology& topology, const PointSet& set);

/// Largest open subset of set: the members whose neighborhood stays inside.
PointSet interior(const Topology& topology, const PointSet& set);

enum class Coarseness { StrictlyCoarser, Equal, StrictlyFiner, Incomparable };

struct CoarsenessResult {
  Coarseness relation = Coarseness::Incomparable;
  /// A set open in left but not right, when left has opens of its own.
  std::optional<PointSet> open_only_in_left;
  /// A set open in right but not left.
  std::optional<PointSet> open_only_in_right;
};

/// Compares open-set families: left is coarser-or-equal than right iff every
/// left-open is right-open, i.e. min_nbhd_right(x) is inside
/// min_nbhd_left(x) for all x. Witness sets are minimal neighborhoods of the
/// finer side, which can never be open in the coarser one.
CoarsenessResult is_coarser(const Topology& left, const Topology& right);

/// The common-open topology of a nonempty family over one carrier:
/// min_nbhd(x) is the smallest set containing x open in every input,
/// computed by closing {x} under all the input neighborhood functions. For
/// N <= 16 the result is additionally certified against brute-force
/// common-open enumeration.
Topology intersect_topologies(const std::vector<Topology>& family);

/// Marks the points for which a lemma's verification makes sense on the
/// truncation; everything outside is reported as skipped, never as failed.
class SafeZone {
 public:
  SafeZone(Carrier carrier, std::vector<bool> safe, std::string description);

  static SafeZone whole(const Carrier& carrier);

  const Carrier& carrier() const { return carrier_; }
  bool safe(Point x) const { return safe_[x - 1]; }
  const std::string& description() const { return description_; }
  PointSet points() const;
  PointSet skipped() const;

 private:
  Carrier carrier_;
  std::vector<bool> safe_;
  std::string description_;
};

/// {x : 2x <= N} — the pair {x,2x} fits.
SafeZone safe_pairs(const Carrier& carrier);
/// {x : 4x <= N} — both {x,2x} and {2x,4x} fit.
SafeZone safe_double_pairs(const Carrier& carrier);
/// Points where the singleton derivation's sets fit: even x needs 2x <= N,
/// odd x needs 2x <= N and a*x+b <= N.
SafeZone safe_derivation(const Carrier& carrier,
                         const dynamics::CollatzMap& map);
/// {x : f(x) <= N} — the image stays in the carrier.
SafeZone safe_image(const Carrier& carrier, const dynamics::CollatzMap& map);

/// A possibly partial self-map of the carrier; nullopt means the image left
/// the truncation (the boundary convention for continuity/measurability).
using PartialPointMap = std::function<std::optional<Point>(Point)>;

/// The Collatz map restricted to the carrier.
PartialPointMap carrier_map(const dynamics::CollatzMap& map,
                            const Carrier& carrier);
PartialPointMap identity_map(const Carrier& carrier);

struct ContinuityResult {
  bool continuous = false;
  /// On failure: the codomain minimal neighborhood whose preimage is not
  /// relatively open, and the safe preimage point whose neighborhood
  /// escapes it.
  std::optional<PointSet> witness_open;
  std::optional<Point> witness_point;
  /// Points excluded from the check (outside the safe zone or mapped out of
  /// the carrier).
  PointSet skipped;
};

/// Preimage-of-open-is-open, checked over the codomain's minimal
/// neighborhoods and read relative to the safe zone: for every safe x in
/// the preimage, min_nbhd(x) restricted to the zone must stay inside.
ContinuityResult check_continuity(const PartialPointMap& map,
                                  const Topology& domain,
                                  const Topology& codomain,
                                  const SafeZone& zone);

/// One replayed singleton derivation. Even targets use two subbasis pairs
/// ({k,2k} and {2k,4k}); odd targets intersect their subbasis pair with the
/// continuity-derived open {n, a*n+b}.
struct Derivation {
  enum class Pattern { EvenHalving, OddContinuity };
  Point target = 0;
  Pattern pattern = Pattern::EvenHalving;
  PointSet first_set;
  PointSet second_set;
};

struct DerivationLog {
  std::vector<Derivation> derived;  // ordered by target
  PointSet failed;   // safe points whose pattern intersection missed
  PointSet skipped;  // boundary points
  bool success() const { return failed.empty(); }
};

/// Replays the two singleton-derivation steps for every safe point and
/// records the exact pair of sets intersected.
DerivationLog derive_singletons(const Carrier& carrier,
                                const SubbasisFamily& subbasis,
                                const dynamics::CollatzMap& map);

/// The chain of subbasis pairs [{y,2y},...,{2^(x-1)y, 2^x y}] whose union
/// is the doubling chain {y,2y,...,2^x y}. x = 0 yields the empty list and
/// no openness claim (a bare singleton need not be open). Throws when the
/// chain pokes out of the carrier.
std::vector<PointSet> orbit_open_witness(Point y, Point x,
                                         const Carrier& carrier);

}  // namespace collatz::topology
