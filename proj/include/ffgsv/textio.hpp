// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ffgsv/matrix.hpp"
#include "ffgsv/poly.hpp"

namespace ffgsv {

// Matrix text: "rows cols" followed by rows * cols entries, whitespace
// separated (one row per line by convention). Entries are integers,
// decimals or p/q; complex entries are written re+imi, re-imi or imi.
// '#' starts a comment.

/// Whitespace tokens with comments removed.
std::vector<std::string> tokenize(std::string_view text);

bool tokens_are_complex(std::span<const std::string> tokens);

/// Parses a matrix from the front of `tokens` and reports how many were
/// used. Rejects complex entries.
Matrix<Rational> parse_matrix_tokens(std::span<const std::string> tokens,
                                     std::size_t* used = nullptr);
Matrix<Complex> parse_complex_matrix_tokens(std::span<const std::string> tokens,
                                            std::size_t* used = nullptr);

/// Whole-text forms; trailing tokens are an error.
Matrix<Rational> parse_matrix(std::string_view text);
Matrix<Complex> parse_complex_matrix(std::string_view text);
bool matrix_text_is_complex(std::string_view text);

Complex parse_complex(std::string_view token);

std::string format_matrix(const Matrix<Rational>& m);
std::string format_matrix(const Matrix<double>& m);
std::string format_matrix(const Matrix<Complex>& m);

// Polynomial text: one monomial per line, "coeff e1 [e2 [e3]]", with the
// exponent tuple length fixing the arity. Repeated monomials add up. An
// empty text is the zero polynomial of any arity.

struct PolyText {
  int arity = 0;  // 0 only for the empty text
  std::vector<std::pair<std::array<int, 3>, Rational>> terms;
};

PolyText parse_poly_text(std::string_view text);

template <std::size_t N>
Poly<Rational, N> to_poly(const PolyText& pt) {
  if (pt.arity != 0 && pt.arity != static_cast<int>(N)) {
    throw Error(Errc::parse, "polynomial has " + std::to_string(pt.arity) +
                                 " variables, expected " + std::to_string(N));
  }
  Poly<Rational, N> p;
  for (const auto& [e, c] : pt.terms) {
    typename Poly<Rational, N>::Exponents ex{};
    for (std::size_t v = 0; v < N; ++v) ex[v] = e[v];
    p += Poly<Rational, N>::monomial(ex, c);
  }
  return p.trimmed();
}

template <class T, std::size_t N>
std::string format_poly_text(const Poly<T, N>& p) {
  std::string out;
  p.for_each_nonzero([&](const auto& e, const T& c) {
    if constexpr (is_exact_v<T>) {
      out += format_rational(c);
    } else {
      out += format_double(c);
    }
    for (std::size_t v = 0; v < N; ++v) out += ' ' + std::to_string(e[v]);
    out += '\n';
  });
  return out;
}

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace ffgsv
