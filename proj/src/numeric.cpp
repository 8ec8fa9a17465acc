#include "collatz/numeric.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <sstream>

namespace collatz {

namespace {

bool all_digits(const std::string& text, std::size_t from) {
  if (from >= text.size()) return false;
  for (std::size_t i = from; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  return true;
}

}  // namespace

std::optional<BigInt> parse_big(const std::string& text) {
  const std::size_t from = (!text.empty() && text[0] == '-') ? 1 : 0;
  if (!all_digits(text, from)) return std::nullopt;
  return BigInt(text);
}

std::optional<Rational> parse_rational(const std::string& text) {
  const std::size_t slash = text.find('/');
  if (slash == std::string::npos) {
    auto p = parse_big(text);
    if (!p) return std::nullopt;
    return Rational(*p);
  }
  auto p = parse_big(text.substr(0, slash));
  auto q = parse_big(text.substr(slash + 1));
  if (!p || !q || *q == 0) return std::nullopt;
  return Rational(*p) / Rational(*q);
}

std::string rational_string(const Rational& value) {
  std::ostringstream out;
  out << boost::multiprecision::numerator(value) << '/'
      << boost::multiprecision::denominator(value);
  return out.str();
}

}  // namespace collatz
