#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "collatz/measurable.hpp"
#include "oracle.hpp"

using namespace collatz;
using namespace collatz::measurable;
using collatz::topology::Carrier;
using collatz::topology::SafeZone;
using collatz::topology::Topology;

namespace {

const dynamics::CollatzMap kStandard = dynamics::CollatzMap::standard();

topology::SubbasisFamily random_subbasis(std::mt19937_64& rng, Point n) {
  std::uniform_int_distribution<int> count_dist(0, 5);
  std::uniform_int_distribution<int> size_dist(1, 4);
  std::uniform_int_distribution<Point> point_dist(1, n);
  std::vector<PointSet> sets;
  const int count = count_dist(rng);
  for (int i = 0; i < count; ++i) {
    PointSet raw;
    const int size = size_dist(rng);
    for (int j = 0; j < size; ++j) raw.push_back(point_dist(rng));
    sets.push_back(make_point_set(std::move(raw)));
  }
  return topology::SubbasisFamily(Carrier(n), std::move(sets));
}

AtomPartition random_partition(std::mt19937_64& rng, Point n, int blocks) {
  std::uniform_int_distribution<int> pick(0, blocks - 1);
  std::vector<PointSet> raw(static_cast<std::size_t>(blocks));
  for (Point x = 1; x <= n; ++x) {
    raw[static_cast<std::size_t>(pick(rng))].push_back(x);
  }
  std::vector<PointSet> atoms;
  for (PointSet& block : raw) {
    if (!block.empty()) atoms.push_back(std::move(block));
  }
  return AtomPartition(Carrier(n), std::move(atoms));
}

std::vector<PointSet> atoms_as_sets(const AtomPartition& p) {
  return p.atoms();
}

}  // namespace

TEST_CASE("partition validation and lookups") {
  Carrier c(4);
  AtomPartition p(c, {{3}, {1, 2}, {4}});
  CHECK(p.atoms() == std::vector<PointSet>{{1, 2}, {3}, {4}});
  CHECK(p.atom_of(2) == PointSet{1, 2});
  CHECK(p.atom_of(4) == PointSet{4});
  CHECK(p.measures({1, 2, 4}));
  CHECK_FALSE(p.measures({1, 4}));
  CHECK(p.measures({}));

  CHECK_THROWS_AS(AtomPartition(c, {{1, 2}, {3}}), std::invalid_argument);
  CHECK_THROWS_AS(AtomPartition(c, {{1, 2}, {2, 3}, {4}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(AtomPartition(c, {{1, 2}, {}, {3, 4}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(AtomPartition(c, {{1, 2}, {3, 4, 5}}),
                  std::invalid_argument);

  AtomPartition fine(c, {{1}, {2}, {3}, {4}});
  AtomPartition coarse(c, {{1, 2}, {3, 4}});
  CHECK(fine.refines(coarse));
  CHECK(fine.refines(fine));
  CHECK_FALSE(coarse.refines(fine));
}

TEST_CASE("borel atoms of the named topologies") {
  for (Point n : {4, 16, 64}) {
    Carrier c(n);
    AtomPartition disc = borel(topology::discrete_topology(c));
    CHECK(disc.atoms().size() == n);
    AtomPartition wit = borel(topology::witness_topology(c));
    CHECK(wit.atoms().size() == n);  // all singletons
    for (const PointSet& a : wit.atoms()) CHECK(a.size() == 1);
  }

  // Generated topology at N=8: 6 separates from 3 only once {6,12} exists,
  // so the truncation lumps {3,6} and the untouched boundary {5,7}.
  AtomPartition gen8 =
      borel(topology::generate(topology::collatz_subbasis(Carrier(8))));
  CHECK(gen8.atoms() == std::vector<PointSet>{{1}, {2}, {3, 6}, {4},
                                              {5, 7}, {8}});
}

TEST_CASE("borel equals the oracle same-membership atoms") {
  std::mt19937_64 rng(1123);
  for (int trial = 0; trial < 50; ++trial) {
    const Point n = 4 + static_cast<Point>(trial % 7);
    auto sub = (trial % 5 == 0) ? topology::collatz_subbasis(Carrier(n))
                                : random_subbasis(rng, n);
    Topology t = topology::generate(sub);
    auto family = oracle::opens_family(n, sub.sets());
    auto expect_masks = oracle::atoms_from_family(n, family);
    std::vector<PointSet> expect;
    for (auto m : expect_masks) expect.push_back(oracle::from_mask(m, n));
    std::sort(expect.begin(), expect.end(),
              [](const PointSet& a, const PointSet& b) {
                return a.front() < b.front();
              });
    CHECK(atoms_as_sets(borel(t)) == expect);
  }
}

TEST_CASE("partitions whose sigma-algebra holds every open refine borel") {
  std::mt19937_64 rng(2251);
  int non_vacuous = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Point n = 4 + static_cast<Point>(trial % 5);
    auto sub = random_subbasis(rng, n);
    Topology t = topology::generate(sub);
    AtomPartition b = borel(t);
    AtomPartition p = (trial % 3 == 0)
                          ? borel(topology::discrete_topology(Carrier(n)))
                          : random_partition(rng, n, 2 + trial % 4);
    bool qualifies = true;
    for (Point x = 1; x <= n && qualifies; ++x) {
      qualifies = p.measures(t.min_nbhd(x));
    }
    // Qualification via min_nbhds equals qualification via all opens: every
    // open is a union of minimal neighborhoods.
    if (qualifies) {
      ++non_vacuous;
      CHECK(p.refines(b));
    }
  }
  CHECK(non_vacuous > 0);
}

TEST_CASE("sigma-algebra intersection") {
  Carrier c(4);
  AtomPartition singles(c, {{1}, {2}, {3}, {4}});
  AtomPartition pair(c, {{1, 2}, {3}, {4}});
  AtomPartition left(c, {{1, 2}, {3, 4}});
  AtomPartition right(c, {{1}, {2, 3}, {4}});

  CHECK(intersect_sigma({pair, pair}) == pair);
  CHECK(intersect_sigma({singles, pair}) == pair);
  CHECK(intersect_sigma({left, right}) ==
        AtomPartition(c, {{1, 2, 3, 4}}));

  // Commutative and associative up to equality.
  CHECK(intersect_sigma({left, right}) == intersect_sigma({right, left}));
  CHECK(intersect_sigma({intersect_sigma({singles, pair}), left}) ==
        intersect_sigma({singles, intersect_sigma({pair, left})}));

  CHECK_THROWS_AS(intersect_sigma({}), std::invalid_argument);
  CHECK_THROWS_AS(
      intersect_sigma({singles, AtomPartition(Carrier(5),
                                              {{1, 2, 3, 4, 5}})}),
      std::invalid_argument);
}

TEST_CASE("intersection atoms match brute-force common measurability") {
  std::mt19937_64 rng(40320);
  for (int trial = 0; trial < 40; ++trial) {
    const Point n = 4 + static_cast<Point>(trial % 6);
    std::vector<AtomPartition> parts;
    const int count = 1 + trial % 3;
    for (int i = 0; i < count; ++i) {
      parts.push_back(random_partition(rng, n, 2 + (trial + i) % 4));
    }
    AtomPartition meet = intersect_sigma(parts);

    std::vector<std::vector<oracle::Mask>> atom_masks;
    for (const AtomPartition& p : parts) {
      std::vector<oracle::Mask> masks;
      for (const PointSet& a : p.atoms()) masks.push_back(oracle::to_mask(a));
      atom_masks.push_back(std::move(masks));
    }
    std::vector<oracle::Mask> meet_masks;
    for (const PointSet& a : meet.atoms())
      meet_masks.push_back(oracle::to_mask(a));

    for (oracle::Mask u = 0;; ++u) {
      bool in_all = true;
      for (const auto& masks : atom_masks) {
        if (!oracle::union_of_atoms(u, masks)) {
          in_all = false;
          break;
        }
      }
      CHECK(oracle::union_of_atoms(u, meet_masks) == in_all);
      if (u == oracle::full_mask(n)) break;
    }
  }
}

TEST_CASE("measurability checks") {
  Carrier c(64);
  Topology gen = topology::generate(topology::collatz_subbasis(c));
  AtomPartition b = borel(gen);
  AtomPartition singles = borel(topology::discrete_topology(c));

  CHECK(check_measurable(topology::identity_map(c), b, b).measurable);
  auto to_one = [](Point) -> std::optional<Point> { return Point(1); };
  CHECK(check_measurable(to_one, singles, singles).measurable);

  // The Collatz map is measurable on the safe zone...
  auto f = topology::carrier_map(kStandard, c);
  auto safe = check_measurable(f, b, b, topology::safe_pairs(c));
  CHECK(safe.measurable);

  // ...but the raw truncation boundary breaks it: {21,42} is one atom whose
  // members map into different atoms.
  auto raw = check_measurable(f, b, b);
  CHECK_FALSE(raw.measurable);
  REQUIRE(raw.witness_block.has_value());
  {
    const PointSet& block = *raw.witness_block;
    PointSet pre;
    for (Point x = 1; x <= 64; ++x) {
      auto fx = f(x);
      if (fx && set_contains(block, *fx)) pre.push_back(x);
    }
    bool union_of_blocks = true;
    for (Point x : pre) {
      auto fx = f(x);
      if (!fx) continue;
      if (!is_subset(b.atom_of(x), pre)) union_of_blocks = false;
    }
    CHECK_FALSE(union_of_blocks);
  }
}

TEST_CASE("safe singletons are measurable for the generated topology") {
  for (Point n : {16, 64, 256}) {
    Carrier c(n);
    AtomPartition b =
        borel(topology::generate(topology::collatz_subbasis(c)));
    topology::SafeZone zone = topology::safe_pairs(c);
    PointSet safe_points = zone.points();
    for (Point x : safe_points) {
      CHECK(set_intersection(b.atom_of(x), safe_points) == PointSet{x});
    }
  }
}

TEST_CASE("measurability composes") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 40; ++trial) {
    const Point n = 4 + static_cast<Point>(trial % 6);
    Carrier c(n);
    AtomPartition p = random_partition(rng, n, 2 + trial % 3);
    // Atom-respecting maps: send each block to a single representative.
    std::uniform_int_distribution<Point> pick(1, n);
    std::vector<Point> f_img(n), g_img(n);
    for (const PointSet& block : p.atoms()) {
      const Point fr = p.atom_of(pick(rng)).front();
      const Point gr = p.atom_of(pick(rng)).front();
      for (Point x : block) {
        f_img[x - 1] = fr;
        g_img[x - 1] = gr;
      }
    }
    auto f = [&](Point x) -> std::optional<Point> { return f_img[x - 1]; };
    auto g = [&](Point x) -> std::optional<Point> { return g_img[x - 1]; };
    REQUIRE(check_measurable(f, p, p).measurable);
    REQUIRE(check_measurable(g, p, p).measurable);
    auto gf = [&](Point x) -> std::optional<Point> {
      return g_img[f_img[x - 1] - 1];
    };
    CHECK(check_measurable(gf, p, p).measurable);
  }
}

TEST_CASE("transfer lemma: deterministic families") {
  Carrier c(32);
  auto f = topology::carrier_map(kStandard, c);
  SafeZone whole = SafeZone::whole(c);

  auto single = measurability_transfer_check(
      f, {topology::discrete_topology(c)}, whole);
  CHECK(single.all_measurable);
  CHECK(single.transfer_holds);

  auto duo = measurability_transfer_check(
      f, {topology::discrete_topology(c), topology::witness_topology(c)},
      whole);
  CHECK(duo.transfer_holds);
}

TEST_CASE("transfer lemma: random families against brute force") {
  std::mt19937_64 rng(987654);
  int non_vacuous = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const Point n = 4 + static_cast<Point>(trial % 9);  // 4..12
    Carrier c(n);
    std::vector<Topology> family;
    const int count = 1 + trial % 4;
    for (int i = 0; i < count; ++i) {
      family.push_back(topology::generate(random_subbasis(rng, n)));
    }

    // Random map flavors: arbitrary, constant, identity, atom-respecting.
    std::uniform_int_distribution<Point> pick(1, n);
    std::vector<Point> img(n);
    switch (trial % 4) {
      case 0:
        for (Point x = 1; x <= n; ++x) img[x - 1] = pick(rng);
        break;
      case 1: {
        const Point k = pick(rng);
        for (Point x = 1; x <= n; ++x) img[x - 1] = k;
        break;
      }
      case 2:
        for (Point x = 1; x <= n; ++x) img[x - 1] = x;
        break;
      default: {
        std::vector<AtomPartition> bs;
        for (const Topology& t : family) bs.push_back(borel(t));
        AtomPartition meet = intersect_sigma(bs);
        for (const PointSet& block : meet.atoms()) {
          const Point to = meet.atom_of(pick(rng)).front();
          for (Point x : block) img[x - 1] = to;
        }
        break;
      }
    }
    auto f = [&](Point x) -> std::optional<Point> { return img[x - 1]; };

    TransferCheck verdict =
        measurability_transfer_check(f, family, SafeZone::whole(c));
    CHECK(verdict.transfer_holds);
    if (verdict.all_measurable) ++non_vacuous;

    // Brute-force cross-check: the preimage of every set measurable in all
    // Borel algebras must itself be measurable in all of them.
    if (verdict.all_measurable) {
      std::vector<std::vector<oracle::Mask>> per_topology_atoms;
      for (const Topology& t : family) {
        std::vector<PointSet> min_nbhds;
        for (Point x = 1; x <= n; ++x) min_nbhds.push_back(t.min_nbhd(x));
        auto fam = oracle::opens_family(n, min_nbhds);
        per_topology_atoms.push_back(oracle::atoms_from_family(n, fam));
      }
      bool oracle_ok = true;
      for (oracle::Mask u = 0;; ++u) {
        bool measurable_in_all = true;
        for (const auto& atoms : per_topology_atoms) {
          if (!oracle::union_of_atoms(u, atoms)) {
            measurable_in_all = false;
            break;
          }
        }
        if (measurable_in_all) {
          oracle::Mask pre = 0;
          for (Point x = 1; x <= n; ++x) {
            if (u & (oracle::Mask(1) << (img[x - 1] - 1))) {
              pre |= oracle::Mask(1) << (x - 1);
            }
          }
          bool pre_in_all = true;
          for (const auto& atoms : per_topology_atoms) {
            if (!oracle::union_of_atoms(pre, atoms)) {
              pre_in_all = false;
              break;
            }
          }
          if (!pre_in_all) oracle_ok = false;
        }
        if (u == oracle::full_mask(n) || !oracle_ok) break;
      }
      CHECK(oracle_ok);
    }
  }
  CHECK(non_vacuous > 0);
}
