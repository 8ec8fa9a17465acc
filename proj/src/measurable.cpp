#include "collatz/measurable.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace collatz::measurable {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

AtomPartition::AtomPartition(topology::Carrier carrier,
                             std::vector<PointSet> atoms)
    : carrier_(carrier), atoms_(std::move(atoms)) {
  for (const PointSet& block : atoms_) {
    require(!block.empty(), "AtomPartition: empty block");
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const PointSet& a, const PointSet& b) {
              return a.front() < b.front();
            });
  index_.assign(carrier_.bound(), atoms_.size());
  std::size_t covered = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const PointSet& block = atoms_[i];
    require(!block.empty(), "AtomPartition: empty block");
    require(std::is_sorted(block.begin(), block.end()) &&
                std::adjacent_find(block.begin(), block.end()) == block.end(),
            "AtomPartition: blocks must be sorted and duplicate-free");
    require(block.front() >= 1 && block.back() <= carrier_.bound(),
            "AtomPartition: block escapes the carrier");
    for (Point x : block) {
      require(index_[x - 1] == atoms_.size(),
              "AtomPartition: blocks overlap");
      index_[x - 1] = i;
      ++covered;
    }
  }
  require(covered == carrier_.bound(),
          "AtomPartition: blocks must cover the carrier");
}

const PointSet& AtomPartition::atom_of(Point x) const {
  require(carrier_.contains(x), "AtomPartition: point outside carrier");
  return atoms_[index_[x - 1]];
}

bool AtomPartition::refines(const AtomPartition& coarser) const {
  require(carrier_ == coarser.carrier_, "AtomPartition: carrier mismatch");
  for (const PointSet& block : atoms_) {
    if (!is_subset(block, coarser.atom_of(block.front()))) return false;
  }
  return true;
}

bool AtomPartition::measures(const PointSet& set) const {
  for (Point x : set) {
    require(carrier_.contains(x), "AtomPartition: point outside carrier");
    if (!is_subset(atom_of(x), set)) return false;
  }
  return true;
}

AtomPartition borel(const topology::Topology& t) {
  std::map<PointSet, PointSet> groups;  // min_nbhd -> members
  for (Point x = 1; x <= t.carrier().bound(); ++x) {
    groups[t.min_nbhd(x)].push_back(x);
  }
  std::vector<PointSet> atoms;
  atoms.reserve(groups.size());
  for (auto& [nbhd, members] : groups) atoms.push_back(std::move(members));
  return AtomPartition(t.carrier(), std::move(atoms));
}

AtomPartition intersect_sigma(const std::vector<AtomPartition>& parts) {
  require(!parts.empty(), "intersect_sigma: empty list");
  const topology::Carrier& carrier = parts.front().carrier();
  for (const AtomPartition& p : parts) {
    require(p.carrier() == carrier, "intersect_sigma: carrier mismatch");
  }
  const Point n = carrier.bound();

  // Union-find over the combined same-block relations.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t i) -> std::size_t {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  const auto unite = [&](std::size_t a, std::size_t b) {
    parent[find(a)] = find(b);
  };
  for (const AtomPartition& p : parts) {
    for (const PointSet& block : p.atoms()) {
      for (Point x : block) unite(block.front() - 1, x - 1);
    }
  }

  std::map<std::size_t, PointSet> components;
  for (Point x = 1; x <= n; ++x) components[find(x - 1)].push_back(x);
  std::vector<PointSet> atoms;
  atoms.reserve(components.size());
  for (auto& [root, members] : components) atoms.push_back(std::move(members));
  return AtomPartition(carrier, std::move(atoms));
}

MeasurabilityResult check_measurable(const topology::PartialPointMap& map,
                                     const AtomPartition& domain,
                                     const AtomPartition& codomain,
                                     const topology::SafeZone& zone) {
  require(domain.carrier() == codomain.carrier(),
          "check_measurable: carrier mismatch");
  require(domain.carrier() == zone.carrier(),
          "check_measurable: zone carrier mismatch");
  const Point n = domain.carrier().bound();

  std::vector<std::optional<Point>> image(n);
  std::vector<bool> active(n, false);
  MeasurabilityResult out;
  for (Point x = 1; x <= n; ++x) {
    image[x - 1] = map(x);
    active[x - 1] = zone.safe(x) && image[x - 1].has_value();
    if (!active[x - 1]) out.skipped.push_back(x);
  }

  for (const PointSet& block : codomain.atoms()) {
    PointSet preimage;
    for (Point x = 1; x <= n; ++x) {
      if (image[x - 1] && set_contains(block, *image[x - 1])) {
        preimage.push_back(x);
      }
    }
    for (Point x : preimage) {
      if (!active[x - 1]) continue;
      for (Point y : domain.atom_of(x)) {
        if (active[y - 1] && !set_contains(preimage, y)) {
          out.measurable = false;
          out.witness_block = block;
          return out;
        }
      }
    }
  }
  out.measurable = true;
  return out;
}

MeasurabilityResult check_measurable(const topology::PartialPointMap& map,
                                     const AtomPartition& domain,
                                     const AtomPartition& codomain) {
  return check_measurable(map, domain, codomain,
                          topology::SafeZone::whole(domain.carrier()));
}

TransferCheck measurability_transfer_check(
    const topology::PartialPointMap& map,
    const std::vector<topology::Topology>& family,
    const topology::SafeZone& zone) {
  require(!family.empty(), "measurability_transfer_check: empty family");
  const topology::Carrier& carrier = family.front().carrier();
  for (const topology::Topology& t : family) {
    require(t.carrier() == carrier,
            "measurability_transfer_check: carrier mismatch");
  }

  std::vector<AtomPartition> borels;
  borels.reserve(family.size());
  for (const topology::Topology& t : family) borels.push_back(borel(t));

  TransferCheck out;
  out.all_measurable = true;
  for (const AtomPartition& p : borels) {
    out.per_topology.push_back(check_measurable(map, p, p, zone));
    out.all_measurable =
        out.all_measurable && out.per_topology.back().measurable;
  }
  if (!out.all_measurable) {
    out.transfer_holds = true;  // nothing to transfer
    return out;
  }
  AtomPartition meet = intersect_sigma(borels);
  out.intersection = check_measurable(map, meet, meet, zone);
  out.transfer_holds = out.intersection->measurable;
  return out;
}

}  // namespace collatz::measurable
