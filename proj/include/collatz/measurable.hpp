#pragma once

#include <optional>
#include <vector>

#include "collatz/topology.hpp"

namespace collatz::measurable {

/// A sigma-algebra on a finite carrier, stored by its atoms: the measurable
/// sets are exactly the unions of blocks.
class AtomPartition {
 public:
  /// Blocks must be nonempty, pairwise disjoint, and cover the carrier.
  /// They are normalized to sorted-by-minimum order.
  AtomPartition(topology::Carrier carrier, std::vector<PointSet> atoms);

  const topology::Carrier& carrier() const { return carrier_; }
  const std::vector<PointSet>& atoms() const { return atoms_; }
  const PointSet& atom_of(Point x) const;

  /// Every block of *this lies inside a block of coarser.
  bool refines(const AtomPartition& coarser) const;
  /// Is the set a union of blocks?
  bool measures(const PointSet& set) const;

  bool operator==(const AtomPartition& other) const {
    return carrier_ == other.carrier_ && atoms_ == other.atoms_;
  }

 private:
  topology::Carrier carrier_;
  std::vector<PointSet> atoms_;
  std::vector<std::size_t> index_;  // point -> position in atoms_
};

/// Atoms of the Borel sigma-algebra of a finite topology: classes of points
/// that share every open set, i.e. classes of identical minimal
/// neighborhoods.
AtomPartition borel(const topology::Topology& t);

/// Atoms of the intersection sigma-algebra: connected components of the
/// union of the inputs' same-block relations.
AtomPartition intersect_sigma(const std::vector<AtomPartition>& parts);

struct MeasurabilityResult {
  bool measurable = false;
  /// On failure: a codomain block whose preimage is not a union of domain
  /// blocks on the active zone.
  std::optional<PointSet> witness_block;
  /// Points excluded from the check (outside the zone or mapped out of the
  /// carrier).
  PointSet skipped;
};

/// Preimage of every codomain block must be a union of domain blocks,
/// read relative to the safe zone and the map's partial domain.
MeasurabilityResult check_measurable(const topology::PartialPointMap& map,
                                     const AtomPartition& domain,
                                     const AtomPartition& codomain,
                                     const topology::SafeZone& zone);
/// Whole-carrier zone.
MeasurabilityResult check_measurable(const topology::PartialPointMap& map,
                                     const AtomPartition& domain,
                                     const AtomPartition& codomain);

struct TransferCheck {
  /// One verdict per input topology, against its own Borel partition.
  std::vector<MeasurabilityResult> per_topology;
  bool all_measurable = false;
  /// Engaged when all individual checks pass: the verdict w.r.t. the
  /// intersection sigma-algebra.
  std::optional<MeasurabilityResult> intersection;
  /// measurable-w.r.t.-all implies measurable-w.r.t.-intersection;
  /// vacuously true when some individual check fails.
  bool transfer_holds = false;
};

/// Mechanizes the transfer lemma: measurability with respect to every
/// member's Borel sigma-algebra must imply measurability with respect to
/// their intersection.
TransferCheck measurability_transfer_check(
    const topology::PartialPointMap& map,
    const std::vector<topology::Topology>& family,
    const topology::SafeZone& zone);

}  // namespace collatz::measurable
