#pragma once

#include <algorithm>

#include "collatz/numeric.hpp"

namespace collatz {

/// PointSets are sorted ascending with no duplicates; these helpers keep
/// that normal form.

inline PointSet make_point_set(PointSet points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

inline bool set_contains(const PointSet& set, Point x) {
  return std::binary_search(set.begin(), set.end(), x);
}

inline bool is_subset(const PointSet& inner, const PointSet& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(),
                       inner.end());
}

inline PointSet set_union(const PointSet& a, const PointSet& b) {
  PointSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

inline PointSet set_intersection(const PointSet& a, const PointSet& b) {
  PointSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

inline PointSet set_difference(const PointSet& a, const PointSet& b) {
  PointSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

}  // namespace collatz
