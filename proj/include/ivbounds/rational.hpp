#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "ivbounds/errors.hpp"

namespace ivb {

// All probabilities, outcome values and dual coordinates are exact rationals.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

// Parses "0.25", "-3", "1e-2"-free plain decimals, or fraction strings "7/2".
inline Rational parse_rational(std::string_view s) {
  auto fail = [&] { throw ShapeMismatch("cannot parse rational from '" + std::string(s) + "'"); };
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  s = s.substr(b, e - b);
  if (s.empty()) fail();

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string nstr(s.substr(0, slash)), dstr(s.substr(slash + 1));
    if (nstr.empty() || dstr.empty()) fail();
    try {
      BigInt n(nstr), d(dstr);
      if (d == 0) fail();
      return Rational(n, d);
    } catch (const std::exception&) {
      fail();
    }
  }

  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  BigInt intpart = 0, fracpart = 0, scale = 1;
  bool any_digit = false, seen_dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.') {
      if (seen_dot) fail();
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      any_digit = true;
      if (!seen_dot) {
        intpart = intpart * 10 + (c - '0');
      } else {
        fracpart = fracpart * 10 + (c - '0');
        scale *= 10;
      }
    } else {
      fail();
    }
  }
  if (!any_digit) fail();
  Rational r = Rational(intpart) + Rational(fracpart, scale);
  return neg ? Rational(-r) : r;
}

// Exact decimal when the denominator is of the form 2^a*5^b, otherwise "n/d".
inline std::string to_decimal_string(const Rational& r) {
  BigInt n = num(r), d = den(r);
  if (d == 1) return n.str();
  BigInt dd = d;
  unsigned twos = 0, fives = 0;
  while (dd % 2 == 0) { dd /= 2; ++twos; }
  while (dd % 5 == 0) { dd /= 5; ++fives; }
  if (dd != 1) return n.str() + "/" + d.str();
  unsigned digits = twos > fives ? twos : fives;
  BigInt pow10 = 1;
  for (unsigned i = 0; i < digits; ++i) pow10 *= 10;
  BigInt scaled = n * (pow10 / d);
  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string body = scaled.str();
  if (body.size() <= digits) body.insert(0, digits + 1 - body.size(), '0');
  body.insert(body.size() - digits, ".");
  return (neg ? "-" : "") + body;
}

inline std::string to_fraction_string(const Rational& r) {
  BigInt d = den(r);
  return d == 1 ? num(r).str() : num(r).str() + "/" + d.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace ivb
