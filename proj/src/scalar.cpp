// SPDX-License-Identifier: Apache-2.0
#include "ffgsv/scalar.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cstdint>
#include <cstring>
#include <cmath>

namespace ffgsv {

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  if (!is_integer_text(s)) {
    throw Error(Errc::parse, "malformed integer '" + std::string(s) + "'");
  }
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return mpz_class(digits, 10);
}

// [sign] digits [. digits] [e|E [sign] digits]
Rational parse_decimal(std::string_view s) {
  const std::string bad = "malformed number '" + std::string(s) + "'";
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) negative = s[i++] == '-';
  std::string mantissa;
  int frac_digits = 0;
  bool seen_dot = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa.push_back(c);
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (mantissa.empty()) throw Error(Errc::parse, bad);
  long exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw Error(Errc::parse, bad);
    const std::string_view exp_text = s.substr(i + 1);
    if (!is_integer_text(exp_text)) throw Error(Errc::parse, bad);
    exponent = std::strtol(std::string(exp_text).c_str(), nullptr, 10);
  }
  exponent -= frac_digits;
  mpz_class num(mantissa, 10);
  mpz_class den(1);
  mpz_class ten(10);
  mpz_class scale;
  mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(),
             static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) {
    num *= scale;
  } else {
    den = scale;
  }
  if (negative) num = -num;
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) throw Error(Errc::parse, "empty number");
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash));
    mpz_class den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw Error(Errc::parse, "zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  return parse_decimal(text);
}

double parse_real(std::string_view text) {
  if (text.find('/') != std::string_view::npos) {
    return to_double(parse_rational(text));
  }
  std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) {
    throw Error(Errc::parse, "malformed number '" + s + "'");
  }
  while (*end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (*end != '\0') throw Error(Errc::parse, "malformed number '" + s + "'");
  return v;
}

double to_double(const Rational& q) {
  const double t = q.get_d();  // truncated toward zero
  if (!std::isfinite(t) || Rational(t) == q) return t;
  const double away = std::nextafter(t, sgn(q) > 0 ? HUGE_VAL : -HUGE_VAL);
  if (!std::isfinite(away)) return t;
  const Rational dt = abs(q - Rational(t)), da = abs(Rational(away) - q);
  if (dt < da) return t;
  if (da < dt) return away;
  std::uint64_t bits = 0;
  std::memcpy(&bits, &t, sizeof bits);
  return (bits & 1u) ? away : t;
}

std::string format_rational(const Rational& q) { return q.get_str(10); }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace ffgsv
