// SPDX-License-Identifier: Apache-2.0
#include "ffgsv/poly.hpp"

#include <sstream>

namespace ffgsv {

namespace {

constexpr const char* kVarNames[] = {"x", "y", "z"};

std::string magnitude_text(const Rational& q) { return format_rational(abs(q)); }
std::string magnitude_text(double v) { return format_double(std::abs(v)); }
bool negative(const Rational& q) { return sgn(q) < 0; }
bool negative(double v) { return v < 0; }
bool is_one(const Rational& q) { return abs(q) == 1; }
bool is_one(double v) { return std::abs(v) == 1.0; }

}  // namespace

template <class T, std::size_t N>
std::string to_string(const Poly<T, N>& p) {
  // Highest total degree first, then lexicographic.
  std::vector<std::pair<typename Poly<T, N>::Exponents, T>> terms;
  p.for_each_nonzero([&](const auto& e, const T& c) { terms.emplace_back(e, c); });
  if (terms.empty()) return "0";
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (std::size_t v = 0; v < N; ++v) {
      da += a.first[v];
      db += b.first[v];
    }
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms) {
    const bool neg = negative(c);
    if (first) {
      if (neg) out << "-";
    } else {
      out << (neg ? " - " : " + ");
    }
    first = false;
    std::string mono;
    for (std::size_t v = 0; v < N; ++v) {
      if (e[v] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += kVarNames[v];
      if (e[v] > 1) mono += "^" + std::to_string(e[v]);
    }
    if (mono.empty()) {
      out << magnitude_text(c);
    } else if (is_one(c)) {
      out << mono;
    } else {
      out << magnitude_text(c) << "*" << mono;
    }
  }
  return out.str();
}

template std::string to_string(const Poly<Rational, 1>&);
template std::string to_string(const Poly<Rational, 2>&);
template std::string to_string(const Poly<Rational, 3>&);
template std::string to_string(const Poly<double, 1>&);
template std::string to_string(const Poly<double, 2>&);
template std::string to_string(const Poly<double, 3>&);

}  // namespace ffgsv
