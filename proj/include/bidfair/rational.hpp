#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace bidfair {

/// Exact rational scalar used for every value, bid, budget and entitlement.
/// Expression templates are off so `auto` locals hold values, not expressions.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Parses "p/q", "p" or "-p/q". Decimal notation is rejected.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return ParseError("malformed rational '" + s + "'"); };
  if (s.empty()) throw bad();
  std::size_t slash = s.find('/');
  auto digits = [](std::string_view part, bool allow_sign) {
    if (allow_sign && !part.empty() && (part[0] == '-' || part[0] == '+')) part.remove_prefix(1);
    if (part.empty()) return false;
    for (char c : part)
      if (c < '0' || c > '9') return false;
    return true;
  };
  std::string_view whole(s);
  if (slash == std::string::npos) {
    if (!digits(whole, true)) throw bad();
    return Rational(boost::multiprecision::mpz_int(s));
  }
  std::string_view num = whole.substr(0, slash);
  std::string_view den = whole.substr(slash + 1);
  if (!digits(num, true) || !digits(den, false)) throw bad();
  boost::multiprecision::mpz_int n{std::string(num)};
  boost::multiprecision::mpz_int d{std::string(den)};
  if (d == 0) throw ParseError("zero denominator in '" + s + "'");
  return Rational(n, d);
}

/// Canonical "p/q" form; integers are written with denominator 1.
inline std::string format_rational(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace bidfair
