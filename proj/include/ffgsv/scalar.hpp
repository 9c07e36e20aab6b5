// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace ffgsv {

/// Exact arbitrary-precision rational. gmpxx keeps results canonical
/// (lowest terms, positive denominator) after every arithmetic operation.
using Rational = mpq_class;
using Complex = std::complex<double>;

enum class Errc {
  invalid_argument = 1,
  parse,
  degree,
  shape,
  mode,
  degenerate,
  io,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

template <class T>
inline constexpr bool is_complex_v = std::is_same_v<T, Complex>;

/// Nearest double (ties to even); mpq_get_d alone truncates.
double to_double(const Rational& q);
inline double to_double(double v) { return v; }

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses `p/q`, an integer, or a plain decimal (`-0.125`, `1e-8`) into an
/// exact rational. Decimals are converted digit by digit, so `0.1` is 1/10.
Rational parse_rational(std::string_view text);

/// Parses a real number in either rational or decimal form into a double.
double parse_real(std::string_view text);

std::string format_rational(const Rational& q);

/// 17 significant digits; round-trips through strtod.
std::string format_double(double v);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(double v) { return v == 0.0; }
inline bool is_zero(const Complex& v) { return v == Complex{}; }

inline double magnitude(const Rational& q) { return std::abs(to_double(q)); }
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Complex& v) { return std::abs(v); }

inline double conj(double v) { return v; }
inline Rational conj(const Rational& q) { return q; }
inline Complex conj(const Complex& v) { return std::conj(v); }

}  // namespace ffgsv
