#include "collatz/dynamics.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace collatz::dynamics {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

CollatzMap::CollatzMap(BigInt odd_multiplier, BigInt odd_offset,
                       std::string label)
    : a_(std::move(odd_multiplier)),
      b_(std::move(odd_offset)),
      label_(std::move(label)) {
  require(a_ >= 1, "CollatzMap: odd multiplier must be positive");
  // a*n + b even for every odd n forces a and b both odd; positivity on the
  // smallest odd n forces a + b > 0.
  require(a_ % 2 != 0, "CollatzMap: odd multiplier must be odd");
  require(b_ % 2 != 0, "CollatzMap: odd offset must be odd");
  require(a_ + b_ > 0, "CollatzMap: a + b must be positive");
}

CollatzMap CollatzMap::standard() { return CollatzMap(3, 1, "collatz"); }

BigInt step(const CollatzMap& map, const BigInt& n) {
  require(n >= 1, "step: n must be >= 1");
  if (n % 2 == 0) return n / 2;
  return map.odd_multiplier() * n + map.odd_offset();
}

Cycle::Cycle(const CollatzMap& map, std::vector<BigInt> elements)
    : elements_(std::move(elements)) {
  require(!elements_.empty(), "Cycle: empty element list");
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    require(elements_[i] >= 1, "Cycle: elements must be positive");
    const BigInt& next = elements_[(i + 1) % elements_.size()];
    require(step(map, elements_[i]) == next,
            "Cycle: elements are not map-consecutive");
  }
  auto min_it = std::min_element(elements_.begin(), elements_.end());
  std::rotate(elements_.begin(), min_it, elements_.end());
  for (std::size_t i = 1; i < elements_.size(); ++i) {
    require(elements_[i] != elements_[0], "Cycle: duplicate elements");
  }
}

bool Cycle::contains(const BigInt& value) const {
  return std::find(elements_.begin(), elements_.end(), value) !=
         elements_.end();
}

BigInt Cycle::element_sum() const {
  BigInt sum = 0;
  for (const BigInt& e : elements_) sum += e;
  return sum;
}

namespace {

OrbitResult escaped_result(const BigInt& seed, std::vector<BigInt> prefix,
                           std::uint64_t steps, BigInt last) {
  OrbitResult out;
  out.seed = seed;
  out.status = OrbitStatus::Escaped;
  out.tail = std::move(prefix);
  out.steps_taken = steps;
  out.last_value = std::move(last);
  return out;
}

OrbitResult cyclic_result(const CollatzMap& map, const BigInt& seed,
                          const std::vector<BigInt>& seq, std::size_t entry,
                          std::size_t repeat_step) {
  OrbitResult out;
  out.seed = seed;
  out.status = OrbitStatus::Cyclic;
  out.tail.assign(seq.begin(), seq.begin() + static_cast<long>(entry));
  out.cycle = Cycle(map, std::vector<BigInt>(
                             seq.begin() + static_cast<long>(entry),
                             seq.begin() + static_cast<long>(repeat_step)));
  out.steps_taken = repeat_step;
  out.last_value = seq[entry];
  return out;
}

// Brent's algorithm from scratch; used when the visited-set window is
// exhausted. Finds the cycle length, then the entry index, then materializes
// tail and cycle. Escape verdicts are replayed linearly so the reported
// steps/last_value match a plain bounded walk exactly.
OrbitResult orbit_brent(const CollatzMap& map, const BigInt& seed,
                        const OrbitLimits& limits, std::uint64_t window) {
  const std::uint64_t step_limit = limits.step_limit;
  auto replay_escape = [&]() {
    std::vector<BigInt> prefix;
    prefix.reserve(static_cast<std::size_t>(
        std::min<std::uint64_t>(window + 1, step_limit + 1)));
    BigInt x = seed;
    prefix.push_back(x);
    for (std::uint64_t k = 1; k <= step_limit; ++k) {
      x = step(map, x);
      if (x > limits.value_limit) {
        return escaped_result(seed, std::move(prefix), k, x);
      }
      if (prefix.size() < window + 1) prefix.push_back(x);
    }
    return escaped_result(seed, std::move(prefix), step_limit, x);
  };

  // Cycle length search. The hare walks every index, so a value-limit
  // violation in the non-repeating prefix is always seen before any meet.
  const std::uint64_t hare_cap = 4 * step_limit + 4;
  BigInt tortoise = seed;
  BigInt hare = seed;
  std::uint64_t power = 1;
  std::uint64_t lambda = 0;
  std::uint64_t hare_steps = 0;
  bool found = false;
  while (hare_steps < hare_cap) {
    if (lambda == power) {
      tortoise = hare;
      power *= 2;
      lambda = 0;
    }
    hare = step(map, hare);
    ++hare_steps;
    ++lambda;
    if (hare > limits.value_limit) return replay_escape();
    if (hare == tortoise) {
      found = true;
      break;
    }
  }
  if (!found) return replay_escape();

  // Entry index: two pointers lambda apart.
  BigInt front = seed;
  for (std::uint64_t i = 0; i < lambda; ++i) front = step(map, front);
  BigInt back = seed;
  std::uint64_t mu = 0;
  while (back != front) {
    back = step(map, back);
    front = step(map, front);
    ++mu;
  }
  if (mu + lambda > step_limit) return replay_escape();

  std::vector<BigInt> seq;
  seq.reserve(static_cast<std::size_t>(mu + lambda));
  BigInt x = seed;
  for (std::uint64_t i = 0; i < mu + lambda; ++i) {
    seq.push_back(x);
    x = step(map, x);
  }
  return cyclic_result(map, seed, seq, static_cast<std::size_t>(mu),
                       static_cast<std::size_t>(mu + lambda));
}

}  // namespace

OrbitResult orbit(const CollatzMap& map, const BigInt& seed,
                  const OrbitLimits& limits, std::uint64_t fast_path_window) {
  require(seed >= 1, "orbit: seed must be >= 1");
  require(limits.step_limit >= 1, "orbit: step_limit must be >= 1");
  require(limits.value_limit >= 1, "orbit: value_limit must be >= 1");
  if (seed > limits.value_limit) {
    return escaped_result(seed, {seed}, 0, seed);
  }

  const std::uint64_t window =
      std::min<std::uint64_t>(fast_path_window, limits.step_limit);
  std::vector<BigInt> seq{seed};
  std::unordered_map<BigInt, std::uint64_t> first_index{{seed, 0}};
  for (std::uint64_t k = 1; k <= window; ++k) {
    BigInt x = step(map, seq.back());
    if (x > limits.value_limit) {
      return escaped_result(seed, std::move(seq), k, std::move(x));
    }
    auto hit = first_index.find(x);
    if (hit != first_index.end()) {
      return cyclic_result(map, seed, seq,
                           static_cast<std::size_t>(hit->second),
                           static_cast<std::size_t>(k));
    }
    first_index.emplace(x, k);
    seq.push_back(std::move(x));
  }
  if (window == limits.step_limit) {
    // Step budget exhausted with no repeat.
    BigInt last = seq.back();
    if (seq.size() > static_cast<std::size_t>(fast_path_window) + 1) {
      seq.resize(static_cast<std::size_t>(fast_path_window) + 1);
    }
    return escaped_result(seed, std::move(seq), limits.step_limit,
                          std::move(last));
  }
  return orbit_brent(map, seed, limits, fast_path_window);
}

std::optional<std::vector<BigInt>> orbit_set(const CollatzMap& map,
                                             const BigInt& n,
                                             const OrbitLimits& limits) {
  OrbitResult result = orbit(map, n, limits);
  if (!result.cyclic()) return std::nullopt;
  std::vector<BigInt> points = result.tail;
  const auto& cyc = result.cycle->elements();
  points.insert(points.end(), cyc.begin(), cyc.end());
  std::sort(points.begin(), points.end());
  return points;
}

PeriodicityResult is_periodic(const CollatzMap& map, const BigInt& n,
                              const OrbitLimits& limits) {
  OrbitResult result = orbit(map, n, limits);
  if (result.cyclic() && result.tail.empty()) {
    return PeriodicityResult{result.cycle};
  }
  return PeriodicityResult{std::nullopt};
}

CycleRegistry::CycleRegistry(CollatzMap map, BigInt scan_bound,
                             OrbitLimits limits, std::vector<Cycle> cycles,
                             std::vector<BigInt> escaped_seeds)
    : map_(std::move(map)),
      scan_bound_(std::move(scan_bound)),
      limits_(std::move(limits)),
      cycles_(std::move(cycles)),
      escaped_seeds_(std::move(escaped_seeds)) {
  require(scan_bound_ >= 1, "CycleRegistry: scan_bound must be >= 1");
  std::sort(cycles_.begin(), cycles_.end(),
            [](const Cycle& lhs, const Cycle& rhs) {
              return lhs.min_element() < rhs.min_element();
            });
  for (std::size_t i = 0; i < cycles_.size(); ++i) {
    // Re-validate under this registry's map; Cycle construction may have
    // used another variant.
    require(Cycle(map_, cycles_[i].elements()) == cycles_[i],
            "CycleRegistry: cycle not canonical under this map");
    for (std::size_t j = i + 1; j < cycles_.size(); ++j) {
      for (const BigInt& e : cycles_[j].elements()) {
        require(!cycles_[i].contains(e), "CycleRegistry: cycles overlap");
      }
    }
  }
  std::sort(escaped_seeds_.begin(), escaped_seeds_.end());
  escaped_seeds_.erase(
      std::unique(escaped_seeds_.begin(), escaped_seeds_.end()),
      escaped_seeds_.end());
}

const Cycle* CycleRegistry::cycle_through(const BigInt& value) const {
  for (const Cycle& cycle : cycles_) {
    if (cycle.contains(value)) return &cycle;
  }
  return nullptr;
}

void CycleRegistry::verify_accounting() const {
  for (BigInt seed = 1; seed <= scan_bound_; ++seed) {
    OrbitResult result = orbit(map_, seed, limits_);
    if (result.cyclic()) {
      const Cycle* found = cycle_through(result.cycle->min_element());
      require(found != nullptr && *found == *result.cycle,
              "CycleRegistry: seed reaches a cycle missing from the registry");
    } else {
      require(std::binary_search(escaped_seeds_.begin(), escaped_seeds_.end(),
                                 seed),
              "CycleRegistry: escaped seed missing from escaped list");
    }
  }
}

bool CycleRegistry::operator==(const CycleRegistry& other) const {
  return map_ == other.map_ && scan_bound_ == other.scan_bound_ &&
         limits_.step_limit == other.limits_.step_limit &&
         limits_.value_limit == other.limits_.value_limit &&
         cycles_ == other.cycles_ && escaped_seeds_ == other.escaped_seeds_;
}

CycleRegistry find_cycles(const CollatzMap& map, const BigInt& scan_bound,
                          const OrbitLimits& limits) {
  require(scan_bound >= 1, "find_cycles: scan_bound must be >= 1");
  require(scan_bound <= BigInt(std::uint64_t(1) << 28),
          "find_cycles: scan_bound beyond desk scale");
  const std::uint64_t bound = scan_bound.convert_to<std::uint64_t>();

  // memo maps a value v <= bound to (cycle index, steps from v to the cycle
  // entry). Entries are budget-independent facts; each seed's verdict still
  // applies the step budget exactly as a fresh walk would.
  constexpr std::int32_t kUnknown = -1;
  std::vector<std::int32_t> memo_cycle(bound + 1, kUnknown);
  std::vector<std::uint64_t> memo_mu(bound + 1, 0);

  std::vector<Cycle> cycles;
  std::vector<std::uint64_t> cycle_len;
  std::vector<BigInt> escaped;

  auto register_cycle = [&](Cycle cycle) -> std::int32_t {
    for (std::size_t i = 0; i < cycles.size(); ++i) {
      if (cycles[i].min_element() == cycle.min_element()) {
        return static_cast<std::int32_t>(i);
      }
    }
    cycles.push_back(std::move(cycle));
    cycle_len.push_back(cycles.back().length());
    return static_cast<std::int32_t>(cycles.size() - 1);
  };

  std::vector<BigInt> path;
  std::unordered_map<BigInt, std::uint64_t> first_index;

  for (std::uint64_t seed = 1; seed <= bound; ++seed) {
    if (BigInt(seed) > limits.value_limit) {
      escaped.emplace_back(seed);
      continue;
    }
    if (memo_cycle[seed] != kUnknown) {
      if (memo_mu[seed] + cycle_len[static_cast<std::size_t>(
                              memo_cycle[seed])] > limits.step_limit) {
        escaped.emplace_back(seed);
      }
      continue;
    }

    path.clear();
    first_index.clear();
    path.emplace_back(seed);
    first_index.emplace(path.back(), 0);

    std::int32_t cycle_id = kUnknown;
    std::uint64_t entry_steps = 0;  // mu(seed) once classified
    bool escaped_walk = false;

    for (std::uint64_t k = 1;; ++k) {
      if (k > limits.step_limit) {
        escaped_walk = true;
        break;
      }
      BigInt x = step(map, path.back());
      if (x > limits.value_limit) {
        escaped_walk = true;
        break;
      }
      if (x <= bound) {
        const auto small = x.convert_to<std::uint64_t>();
        if (memo_cycle[small] != kUnknown) {
          cycle_id = memo_cycle[small];
          entry_steps = k + memo_mu[small];
          break;
        }
      }
      auto hit = first_index.find(x);
      if (hit != first_index.end()) {
        const std::uint64_t entry = hit->second;
        cycle_id = register_cycle(Cycle(
            map, std::vector<BigInt>(
                     path.begin() + static_cast<long>(entry), path.end())));
        entry_steps = entry;
        break;
      }
      first_index.emplace(x, k);
      path.push_back(std::move(x));
    }

    if (escaped_walk) {
      escaped.emplace_back(seed);
      continue;
    }

    // Classification facts hold for every value on the walk.
    for (std::size_t j = 0; j < path.size(); ++j) {
      if (path[j] <= bound) {
        const auto small = path[j].convert_to<std::uint64_t>();
        memo_cycle[small] = cycle_id;
        memo_mu[small] =
            entry_steps > j ? entry_steps - static_cast<std::uint64_t>(j) : 0;
      }
    }
    if (entry_steps + cycle_len[static_cast<std::size_t>(cycle_id)] >
        limits.step_limit) {
      escaped.emplace_back(seed);
    }
  }

  return CycleRegistry(map, scan_bound, limits, std::move(cycles),
                       std::move(escaped));
}

}  // namespace collatz::dynamics
