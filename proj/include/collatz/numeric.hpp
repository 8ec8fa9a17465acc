#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace collatz {

// Orbit values are exact arbitrary-precision integers; measures, potentials
// and pressures are exact rationals. Nothing in the library rounds.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Points of a finite carrier {1, ..., N}. Carriers are desk-scale, so a
// machine word is enough; dynamics stays in BigInt.
using Point = std::uint64_t;
using PointSet = std::vector<Point>;  // sorted ascending, no duplicates

/// Parse a decimal string ("124...", "-3") into a BigInt. Returns nullopt
/// on anything that is not a plain decimal integer.
std::optional<BigInt> parse_big(const std::string& text);

/// Parse "p/q" or "p" into an exact rational. Returns nullopt on garbage
/// or zero denominator.
std::optional<Rational> parse_rational(const std::string& text);

/// Canonical "p/q" rendering (denominator always present, e.g. "1/1").
std::string rational_string(const Rational& value);

}  // namespace collatz
