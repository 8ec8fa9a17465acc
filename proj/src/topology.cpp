#include "collatz/topology.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

namespace collatz::topology {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

PointSet range_set(Point from, Point to) {
  PointSet out;
  out.reserve(static_cast<std::size_t>(to - from + 1));
  for (Point x = from; x <= to; ++x) out.push_back(x);
  return out;
}

}  // namespace

Carrier::Carrier(Point bound) : bound_(bound) {
  require(bound >= 4, "Carrier: bound must be >= 4 so {1,2,4} fits");
}

PointSet Carrier::all() const { return range_set(1, bound_); }

SubbasisFamily::SubbasisFamily(Carrier carrier, std::vector<PointSet> sets)
    : carrier_(carrier), sets_(std::move(sets)) {
  for (const PointSet& set : sets_) {
    require(!set.empty(), "SubbasisFamily: empty member");
    require(std::is_sorted(set.begin(), set.end()) &&
                std::adjacent_find(set.begin(), set.end()) == set.end(),
            "SubbasisFamily: members must be sorted and duplicate-free");
    require(set.front() >= 1 && set.back() <= carrier_.bound(),
            "SubbasisFamily: member escapes the carrier");
  }
}

SubbasisFamily collatz_subbasis(const Carrier& carrier) {
  std::vector<PointSet> sets;
  sets.reserve(static_cast<std::size_t>(carrier.bound() / 2));
  for (Point n = 1; 2 * n <= carrier.bound(); ++n) {
    sets.push_back({n, 2 * n});
  }
  return SubbasisFamily(carrier, std::move(sets));
}

Topology::Topology(Carrier carrier, std::vector<PointSet> min_nbhds)
    : carrier_(carrier),
      nbhds_(std::move(min_nbhds)),
      whole_(carrier.all()) {
  const Point n = carrier_.bound();
  require(nbhds_.size() == n, "Topology: one neighborhood per point");
  for (Point x = 1; x <= n; ++x) {
    PointSet& nbhd = nbhds_[x - 1];
    if (nbhd.size() == whole_.size()) {
      require(nbhd == whole_, "Topology: malformed full-size neighborhood");
      nbhd.clear();  // normalize: empty entry = whole carrier
    }
    if (nbhd.empty()) continue;
    require(std::is_sorted(nbhd.begin(), nbhd.end()) &&
                std::adjacent_find(nbhd.begin(), nbhd.end()) == nbhd.end(),
            "Topology: neighborhoods must be sorted and duplicate-free");
    require(nbhd.front() >= 1 && nbhd.back() <= n,
            "Topology: neighborhood escapes the carrier");
    require(set_contains(nbhd, x),
            "Topology: x must belong to min_nbhd(x)");
  }
  // Preorder law: y in min_nbhd(x) forces min_nbhd(y) inside min_nbhd(x).
  for (Point x = 1; x <= n; ++x) {
    const PointSet& nbhd = nbhds_[x - 1];
    if (nbhd.empty()) continue;  // whole carrier absorbs everything
    for (Point y : nbhd) {
      const PointSet& inner = nbhds_[y - 1];
      require(!inner.empty() && is_subset(inner, nbhd),
              "Topology: preorder law violated (min_nbhd(x) not open)");
    }
  }
}

const PointSet& Topology::min_nbhd(Point x) const {
  require(carrier_.contains(x), "Topology: point outside carrier");
  const PointSet& nbhd = nbhds_[x - 1];
  return nbhd.empty() ? whole_ : nbhd;
}

Topology generate(const SubbasisFamily& subbasis) {
  const Carrier& carrier = subbasis.carrier();
  std::vector<PointSet> nbhds(carrier.bound());
  std::vector<bool> touched(carrier.bound(), false);
  for (const PointSet& set : subbasis.sets()) {
    for (Point x : set) {
      PointSet& acc = nbhds[x - 1];
      if (!touched[x - 1]) {
        touched[x - 1] = true;
        acc = set;
      } else {
        acc = set_intersection(acc, set);
      }
    }
  }
  // Untouched points keep the empty entry, i.e. the whole carrier.
  return Topology(carrier, std::move(nbhds));
}

Topology discrete_topology(const Carrier& carrier) {
  std::vector<PointSet> nbhds(carrier.bound());
  for (Point x = 1; x <= carrier.bound(); ++x) nbhds[x - 1] = {x};
  return Topology(carrier, std::move(nbhds));
}

Topology witness_topology(const Carrier& carrier) {
  std::vector<PointSet> nbhds(carrier.bound());
  nbhds[0] = {1, 2};
  for (Point x = 2; x <= carrier.bound(); ++x) nbhds[x - 1] = {x};
  return Topology(carrier, std::move(nbhds));
}

OpennessCheck is_open(const Topology& topology, const PointSet& set) {
  for (Point x : set) {
    require(topology.carrier().contains(x),
            "is_open: set escapes the carrier");
    if (!is_subset(topology.min_nbhd(x), set)) {
      return OpennessCheck{false, x};
    }
  }
  return OpennessCheck{true, std::nullopt};
}

PointSet interior(const Topology& topology, const PointSet& set) {
  PointSet out;
  for (Point x : set) {
    require(topology.carrier().contains(x),
            "interior: set escapes the carrier");
    if (is_subset(topology.min_nbhd(x), set)) out.push_back(x);
  }
  return out;
}

CoarsenessResult is_coarser(const Topology& left, const Topology& right) {
  require(left.carrier() == right.carrier(), "is_coarser: carrier mismatch");
  const Point n = left.carrier().bound();

  // left_in_right: every left-open is right-open, i.e. left is
  // coarser-or-equal; witnessed through minimal neighborhoods.
  bool left_in_right = true;
  bool right_in_left = true;
  std::optional<PointSet> only_left;   // open in left, not in right
  std::optional<PointSet> only_right;  // open in right, not in left
  for (Point x = 1; x <= n; ++x) {
    if (left_in_right && !is_subset(right.min_nbhd(x), left.min_nbhd(x))) {
      left_in_right = false;
      // min_nbhd_left(x) is left-open; were it right-open, the smallest
      // right-open around x would sit inside it.
      only_left = left.min_nbhd(x);
    }
    if (right_in_left && !is_subset(left.min_nbhd(x), right.min_nbhd(x))) {
      right_in_left = false;
      only_right = right.min_nbhd(x);
    }
    if (!left_in_right && !right_in_left) break;
  }

  CoarsenessResult out;
  if (left_in_right && right_in_left) {
    out.relation = Coarseness::Equal;
  } else if (left_in_right) {
    out.relation = Coarseness::StrictlyCoarser;
    out.open_only_in_right = only_right;
  } else if (right_in_left) {
    out.relation = Coarseness::StrictlyFiner;
    out.open_only_in_left = only_left;
  } else {
    out.relation = Coarseness::Incomparable;
    out.open_only_in_left = only_left;
    out.open_only_in_right = only_right;
  }
  return out;
}

namespace {

/// Brute-force certification of intersect_topologies for small carriers:
/// enumerate every subset, keep those open in all inputs, and rebuild
/// minimal neighborhoods as intersections of common opens.
std::vector<PointSet> common_opens_by_enumeration(
    const std::vector<Topology>& family) {
  const Point n = family.front().carrier().bound();
  std::vector<std::uint32_t> masks(family.size() * n, 0);
  for (std::size_t t = 0; t < family.size(); ++t) {
    for (Point x = 1; x <= n; ++x) {
      std::uint32_t m = 0;
      for (Point y : family[t].min_nbhd(x)) m |= 1u << (y - 1);
      masks[t * n + x - 1] = m;
    }
  }
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  std::vector<std::uint32_t> min_masks(n, 0);
  for (Point x = 1; x <= n; ++x) min_masks[x - 1] = full;
  for (std::uint32_t u = 0; u <= full; ++u) {
    bool open_everywhere = true;
    for (std::size_t t = 0; t < family.size() && open_everywhere; ++t) {
      std::uint32_t rest = u;
      while (rest) {
        const int bit = __builtin_ctz(rest);
        rest &= rest - 1;
        if (masks[t * n + static_cast<std::size_t>(bit)] & ~u) {
          open_everywhere = false;
          break;
        }
      }
    }
    if (!open_everywhere) continue;
    for (Point x = 1; x <= n; ++x) {
      if (u & (1u << (x - 1))) min_masks[x - 1] &= u;
    }
    if (u == full) break;
  }
  std::vector<PointSet> nbhds(n);
  for (Point x = 1; x <= n; ++x) {
    for (Point y = 1; y <= n; ++y) {
      if (min_masks[x - 1] & (1u << (y - 1))) nbhds[x - 1].push_back(y);
    }
  }
  return nbhds;
}

}  // namespace

Topology intersect_topologies(const std::vector<Topology>& family) {
  require(!family.empty(), "intersect_topologies: empty family");
  const Carrier& carrier = family.front().carrier();
  for (const Topology& t : family) {
    require(t.carrier() == carrier, "intersect_topologies: carrier mismatch");
  }
  const Point n = carrier.bound();

  // min_nbhd(x) in the common-open family: close {x} under every input's
  // neighborhood function. The closure is open in each input and any common
  // open containing x must contain it.
  std::vector<PointSet> nbhds(n);
  for (Point x = 1; x <= n; ++x) {
    std::set<Point> closure{x};
    bool grew = true;
    while (grew) {
      grew = false;
      for (const Topology& t : family) {
        std::set<Point> additions;
        for (Point y : closure) {
          const PointSet& nbhd = t.min_nbhd(y);
          for (Point z : nbhd) {
            if (!closure.count(z)) additions.insert(z);
          }
        }
        if (!additions.empty()) {
          closure.insert(additions.begin(), additions.end());
          grew = true;
        }
      }
    }
    nbhds[x - 1].assign(closure.begin(), closure.end());
  }

  if (n <= 16) {
    const std::vector<PointSet> certified =
        common_opens_by_enumeration(family);
    for (Point x = 1; x <= n; ++x) {
      if (certified[x - 1] != nbhds[x - 1]) {
        throw std::logic_error(
            "intersect_topologies: reconstruction disagrees with "
            "enumeration");
      }
    }
  }
  return Topology(carrier, std::move(nbhds));
}

SafeZone::SafeZone(Carrier carrier, std::vector<bool> safe,
                   std::string description)
    : carrier_(carrier),
      safe_(std::move(safe)),
      description_(std::move(description)) {
  require(safe_.size() == carrier_.bound(), "SafeZone: one flag per point");
}

SafeZone SafeZone::whole(const Carrier& carrier) {
  return SafeZone(carrier, std::vector<bool>(carrier.bound(), true),
                  "whole carrier");
}

PointSet SafeZone::points() const {
  PointSet out;
  for (Point x = 1; x <= carrier_.bound(); ++x) {
    if (safe_[x - 1]) out.push_back(x);
  }
  return out;
}

PointSet SafeZone::skipped() const {
  PointSet out;
  for (Point x = 1; x <= carrier_.bound(); ++x) {
    if (!safe_[x - 1]) out.push_back(x);
  }
  return out;
}

SafeZone safe_pairs(const Carrier& carrier) {
  std::vector<bool> safe(carrier.bound());
  for (Point x = 1; x <= carrier.bound(); ++x) {
    safe[x - 1] = 2 * x <= carrier.bound();
  }
  return SafeZone(carrier, std::move(safe), "pairs {x,2x} inside carrier");
}

SafeZone safe_double_pairs(const Carrier& carrier) {
  std::vector<bool> safe(carrier.bound());
  for (Point x = 1; x <= carrier.bound(); ++x) {
    safe[x - 1] = 4 * x <= carrier.bound();
  }
  return SafeZone(carrier, std::move(safe),
                  "double pairs {x,2x},{2x,4x} inside carrier");
}

SafeZone safe_derivation(const Carrier& carrier,
                         const dynamics::CollatzMap& map) {
  std::vector<bool> safe(carrier.bound());
  const BigInt n(carrier.bound());
  for (Point x = 1; x <= carrier.bound(); ++x) {
    if (x % 2 == 0) {
      safe[x - 1] = 2 * x <= carrier.bound();
    } else {
      safe[x - 1] = 2 * x <= carrier.bound() &&
                    map.odd_multiplier() * x + map.odd_offset() <= n;
    }
  }
  return SafeZone(carrier, std::move(safe),
                  "singleton-derivation sets inside carrier");
}

SafeZone safe_image(const Carrier& carrier, const dynamics::CollatzMap& map) {
  std::vector<bool> safe(carrier.bound());
  const BigInt n(carrier.bound());
  for (Point x = 1; x <= carrier.bound(); ++x) {
    safe[x - 1] = dynamics::step(map, BigInt(x)) <= n;
  }
  return SafeZone(carrier, std::move(safe), "image inside carrier");
}

PartialPointMap carrier_map(const dynamics::CollatzMap& map,
                            const Carrier& carrier) {
  const BigInt bound(carrier.bound());
  return [map, bound](Point x) -> std::optional<Point> {
    const BigInt image = dynamics::step(map, BigInt(x));
    if (image > bound) return std::nullopt;
    return image.convert_to<Point>();
  };
}

PartialPointMap identity_map(const Carrier& carrier) {
  (void)carrier;
  return [](Point x) -> std::optional<Point> { return x; };
}

ContinuityResult check_continuity(const PartialPointMap& map,
                                  const Topology& domain,
                                  const Topology& codomain,
                                  const SafeZone& zone) {
  require(domain.carrier() == codomain.carrier(),
          "check_continuity: carrier mismatch");
  require(domain.carrier() == zone.carrier(),
          "check_continuity: zone carrier mismatch");
  const Point n = domain.carrier().bound();

  std::vector<std::optional<Point>> image(n);
  std::vector<bool> active(n, false);  // safe and mapped inside the carrier
  ContinuityResult out;
  for (Point x = 1; x <= n; ++x) {
    image[x - 1] = map(x);
    active[x - 1] = zone.safe(x) && image[x - 1].has_value();
    if (!active[x - 1]) out.skipped.push_back(x);
  }

  std::set<PointSet> candidates;
  for (Point y = 1; y <= n; ++y) candidates.insert(codomain.min_nbhd(y));

  for (const PointSet& open : candidates) {
    PointSet preimage;
    for (Point x = 1; x <= n; ++x) {
      if (image[x - 1] && set_contains(open, *image[x - 1])) {
        preimage.push_back(x);
      }
    }
    // Relative openness on the active zone.
    for (Point x : preimage) {
      if (!active[x - 1]) continue;
      for (Point y : domain.min_nbhd(x)) {
        if (active[y - 1] && !set_contains(preimage, y)) {
          out.continuous = false;
          out.witness_open = open;
          out.witness_point = x;
          return out;
        }
      }
    }
  }
  out.continuous = true;
  return out;
}

DerivationLog derive_singletons(const Carrier& carrier,
                                const SubbasisFamily& subbasis,
                                const dynamics::CollatzMap& map) {
  require(subbasis.carrier() == carrier,
          "derive_singletons: carrier mismatch");
  const SafeZone zone = safe_derivation(carrier, map);

  std::set<PointSet> members(subbasis.sets().begin(), subbasis.sets().end());
  const auto in_subbasis = [&](const PointSet& set) {
    return members.count(set) != 0;
  };

  DerivationLog log;
  for (Point x = 1; x <= carrier.bound(); ++x) {
    if (!zone.safe(x)) {
      log.skipped.push_back(x);
      continue;
    }
    if (x % 2 == 0) {
      const Point k = x / 2;
      const PointSet first = {k, x};
      const PointSet second = {x, 2 * x};
      if (in_subbasis(first) && in_subbasis(second) &&
          set_intersection(first, second) == PointSet{x}) {
        log.derived.push_back(
            {x, Derivation::Pattern::EvenHalving, first, second});
      } else {
        log.failed.push_back(x);
      }
    } else {
      const BigInt image = map.odd_multiplier() * x + map.odd_offset();
      const Point fx = image.convert_to<Point>();  // safe: image <= N
      const PointSet first = {x, 2 * x};
      const PointSet second = make_point_set({x, fx});
      if (in_subbasis(first) &&
          set_intersection(first, second) == PointSet{x}) {
        log.derived.push_back(
            {x, Derivation::Pattern::OddContinuity, first, second});
      } else {
        log.failed.push_back(x);
      }
    }
  }
  return log;
}

std::vector<PointSet> orbit_open_witness(Point y, Point x,
                                         const Carrier& carrier) {
  require(y >= 1, "orbit_open_witness: y must be >= 1");
  require(x < 64 && (BigInt(y) << x) <= BigInt(carrier.bound()),
          "orbit_open_witness: chain exceeds carrier");
  std::vector<PointSet> chain;
  Point current = y;
  for (Point i = 0; i < x; ++i) {
    chain.push_back({current, 2 * current});
    current *= 2;
  }
  return chain;
}

}  // namespace collatz::topology
