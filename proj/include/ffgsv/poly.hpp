// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "ffgsv/scalar.hpp"

namespace ffgsv {

/// Dense polynomial in N variables with a per-variable degree bound.
///
/// Coefficients live in a row-major grid of shape (bound[0]+1) x ... x
/// (bound[N-1]+1); the last variable varies fastest. A polynomial is either
/// entirely exact (T = Rational) or entirely floating point (T = double);
/// the only bridge between the two is to_float().
///
/// Variables are addressed by index: 0 = x, 1 = y, 2 = z.
template <class T, std::size_t N>
class Poly {
  static_assert(N >= 1 && N <= 3);

 public:
  using Scalar = T;
  using Exponents = std::array<int, N>;
  static constexpr std::size_t arity = N;

  Poly() : coeffs_(1, T(0)) { bounds_.fill(0); }

  explicit Poly(const Exponents& bounds) : bounds_(bounds) {
    for (int b : bounds_) {
      if (b < 0) throw Error(Errc::degree, "negative degree bound");
    }
    coeffs_.resize(grid_size(bounds_));  // value-initialized: zero, no copies
  }

  static Poly constant(const T& c) {
    Poly p;
    p.coeffs_[0] = c;
    return p;
  }

  static Poly monomial(const Exponents& e, const T& c = T(1)) {
    Poly p(e);
    p.at(e) = c;
    return p;
  }

  /// Builds from (exponents, coefficient) terms; bounds are the tightest
  /// that hold every term. Repeated exponents accumulate.
  static Poly from_terms(
      std::initializer_list<std::pair<Exponents, T>> terms) {
    Exponents b{};
    for (const auto& [e, c] : terms) {
      for (std::size_t v = 0; v < N; ++v) b[v] = std::max(b[v], e[v]);
    }
    Poly p(b);
    for (const auto& [e, c] : terms) p.at(e) += c;
    return p;
  }

  const Exponents& bounds() const noexcept { return bounds_; }
  int bound(std::size_t var) const { return bounds_.at(var); }
  std::span<const T> coeffs() const noexcept { return coeffs_; }

  bool in_bounds(const Exponents& e) const noexcept {
    for (std::size_t v = 0; v < N; ++v) {
      if (e[v] < 0 || e[v] > bounds_[v]) return false;
    }
    return true;
  }

  std::size_t index(const Exponents& e) const {
    std::size_t idx = 0;
    for (std::size_t v = 0; v < N; ++v) {
      idx = idx * static_cast<std::size_t>(bounds_[v] + 1) +
            static_cast<std::size_t>(e[v]);
    }
    return idx;
  }

  Exponents exponents_of(std::size_t idx) const {
    Exponents e{};
    for (std::size_t v = N; v-- > 0;) {
      const auto extent = static_cast<std::size_t>(bounds_[v] + 1);
      e[v] = static_cast<int>(idx % extent);
      idx /= extent;
    }
    return e;
  }

  /// Zero for exponents outside the grid.
  T coeff(const Exponents& e) const {
    return in_bounds(e) ? coeffs_[index(e)] : T(0);
  }

  T& at(const Exponents& e) {
    if (!in_bounds(e)) throw Error(Errc::degree, "exponent outside bounds");
    return coeffs_[index(e)];
  }
  const T& at(const Exponents& e) const {
    if (!in_bounds(e)) throw Error(Errc::degree, "exponent outside bounds");
    return coeffs_[index(e)];
  }

  template <class F>
  void for_each_nonzero(F&& f) const {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (!ffgsv::is_zero(coeffs_[i])) f(exponents_of(i), coeffs_[i]);
    }
  }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const T& c) { return ffgsv::is_zero(c); });
  }

  /// Actual degree in one variable; -1 for the zero polynomial.
  int degree(std::size_t var) const {
    int d = -1;
    for_each_nonzero([&](const Exponents& e, const T&) {
      d = std::max(d, e[var]);
    });
    return d;
  }

  int total_degree() const {
    int d = -1;
    for_each_nonzero([&](const Exponents& e, const T&) {
      int s = 0;
      for (int x : e) s += x;
      d = std::max(d, s);
    });
    return d;
  }

  /// Same polynomial on a different grid. Throws if a nonzero coefficient
  /// would fall outside the new bounds.
  Poly with_bounds(const Exponents& b) const {
    Poly out(b);
    for_each_nonzero([&](const Exponents& e, const T& c) {
      if (!out.in_bounds(e)) {
        throw Error(Errc::degree, "coefficient does not fit new bounds");
      }
      out.at(e) = c;
    });
    return out;
  }

  /// Smallest grid holding every nonzero coefficient.
  Poly trimmed() const {
    Exponents b{};
    for (std::size_t v = 0; v < N; ++v) b[v] = std::max(degree(v), 0);
    return with_bounds(b);
  }

  Poly& operator+=(const Poly& o) { return accumulate(o, 1); }
  Poly& operator-=(const Poly& o) { return accumulate(o, -1); }

  Poly& operator*=(const T& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
  }
  friend Poly operator*(Poly a, const T& s) { return a *= s; }
  friend Poly operator*(const T& s, Poly a) { return a *= s; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    Exponents rb{};
    for (std::size_t v = 0; v < N; ++v) rb[v] = a.bounds_[v] + b.bounds_[v];
    Poly out(rb);
    a.for_each_nonzero([&](const Exponents& ea, const T& ca) {
      b.for_each_nonzero([&](const Exponents& eb, const T& cb) {
        Exponents e{};
        for (std::size_t v = 0; v < N; ++v) e[v] = ea[v] + eb[v];
        out.coeffs_[out.index(e)] += ca * cb;
      });
    });
    return out;
  }

  /// Equality as polynomials; differing grids compare equal when every
  /// coefficient matches.
  friend bool operator==(const Poly& a, const Poly& b) {
    bool same = true;
    a.for_each_nonzero([&](const Exponents& e, const T& c) {
      same = same && b.in_bounds(e) && b.coeffs_[b.index(e)] == c;
    });
    if (!same) return false;
    // Whatever b has beyond that must be zero in a too.
    b.for_each_nonzero([&](const Exponents& e, const T&) {
      same = same && a.in_bounds(e) && !ffgsv::is_zero(a.coeffs_[a.index(e)]);
    });
    return same;
  }

 private:
  static std::size_t grid_size(const Exponents& b) {
    std::size_t n = 1;
    for (int x : b) n *= static_cast<std::size_t>(x + 1);
    return n;
  }

  static Exponents unravel(const Exponents& b, std::size_t idx) {
    Exponents e{};
    for (std::size_t v = N; v-- > 0;) {
      const auto extent = static_cast<std::size_t>(b[v] + 1);
      e[v] = static_cast<int>(idx % extent);
      idx /= extent;
    }
    return e;
  }

  Poly& accumulate(const Poly& o, int sign) {
    bool fits = true;
    for (std::size_t v = 0; v < N; ++v) fits &= o.bounds_[v] <= bounds_[v];
    if (!fits) {
      Exponents b = bounds_;
      for (std::size_t v = 0; v < N; ++v) {
        b[v] = std::max(b[v], o.bounds_[v]);
      }
      *this = with_bounds(b);
    }
    o.for_each_nonzero([&](const Exponents& e, const T& c) {
      if (sign > 0) {
        coeffs_[index(e)] += c;
      } else {
        coeffs_[index(e)] -= c;
      }
    });
    return *this;
  }

  Exponents bounds_;
  std::vector<T> coeffs_;
};

template <class T>
using UniPoly = Poly<T, 1>;
template <class T>
using BiPoly = Poly<T, 2>;
template <class T>
using TriPoly = Poly<T, 3>;

inline constexpr std::size_t var_x = 0;
inline constexpr std::size_t var_y = 1;
inline constexpr std::size_t var_z = 2;

/// Column count k and the row counts s, t of the two blocks of a pair.
struct ShapeParams {
  int k = 1;
  int s = 1;
  int t = 1;

  void validate() const {
    if (k < 1 || s < 1 || t < 1) {
      throw Error(Errc::shape, "shape parameters k, s, t must be >= 1");
    }
  }
  ShapeParams swapped() const { return {k, t, s}; }
  friend bool operator==(const ShapeParams&, const ShapeParams&) = default;
};

template <std::size_t N>
Poly<double, N> to_float(const Poly<Rational, N>& p) {
  Poly<double, N> out(p.bounds());
  p.for_each_nonzero([&](const auto& e, const Rational& c) {
    out.at(e) = to_double(c);
  });
  return out;
}

template <std::size_t N>
const Poly<double, N>& to_float(const Poly<double, N>& p) {
  return p;
}

/// n! / (n-r)!, zero when r > n.
template <class T>
T falling_factorial(int n, int r) {
  if (r < 0 || r > n) return T(0);
  T out(1);
  for (int i = 0; i < r; ++i) out *= T(n - i);
  return out;
}

template <class T>
T binomial(int n, int r) {
  if (r < 0 || r > n) return T(0);
  T out(1);
  for (int i = 0; i < r; ++i) {
    out *= T(n - i);
    out /= T(i + 1);
  }
  return out;
}

/// Formal partial derivative of the given order in one variable.
template <class T, std::size_t N>
Poly<T, N> derivative(const Poly<T, N>& p, std::size_t var, int order = 1) {
  if (var >= N) throw Error(Errc::invalid_argument, "unknown variable id");
  if (order < 0) throw Error(Errc::invalid_argument, "negative order");
  if (order == 0) return p;
  auto b = p.bounds();
  b[var] = std::max(b[var] - order, 0);
  Poly<T, N> out(b);
  p.for_each_nonzero([&](auto e, const T& c) {
    if (e[var] < order) return;
    const T f = falling_factorial<T>(e[var], order);
    e[var] -= order;
    out.at(e) += c * f;
  });
  return out;
}

/// One term theta * d/dA d/dB of a second-order operator; A == B gives a
/// pure second derivative.
template <class T>
struct DiffPair {
  std::size_t a;
  std::size_t b;
  T weight;
};

namespace detail {

template <class T, std::size_t N>
Poly<T, N> apply_second_order(const Poly<T, N>& p,
                              std::span<const DiffPair<T>> pairs) {
  Poly<T, N> out(p.bounds());
  for (const auto& pr : pairs) {
    if (is_zero(pr.weight)) continue;
    p.for_each_nonzero([&](auto e, const T& c) {
      T f(1);
      if (pr.a == pr.b) {
        if (e[pr.a] < 2) return;
        f = T(e[pr.a]) * T(e[pr.a] - 1);
        e[pr.a] -= 2;
      } else {
        if (e[pr.a] < 1 || e[pr.b] < 1) return;
        f = T(e[pr.a]) * T(e[pr.b]);
        e[pr.a] -= 1;
        e[pr.b] -= 1;
      }
      out.at(e) += pr.weight * f * c;
    });
  }
  return out;
}

}  // namespace detail

/// exp(sum_i theta_i d_{a_i} d_{b_i}) applied to p. The series is summed
/// until the operator annihilates the working term, which always happens
/// because each application lowers total degree by two.
template <class T, std::size_t N>
Poly<T, N> apply_exp_operator(const Poly<T, N>& p,
                              std::span<const DiffPair<T>> pairs) {
  for (const auto& pr : pairs) {
    if (pr.a >= N || pr.b >= N) {
      throw Error(Errc::invalid_argument, "unknown variable id");
    }
    if constexpr (!is_exact_v<T>) {
      if (!std::isfinite(pr.weight)) {
        throw Error(Errc::invalid_argument, "non-finite operator weight");
      }
    }
  }
  Poly<T, N> result = p;
  Poly<T, N> term = p;
  for (int j = 1; !term.is_zero(); ++j) {
    // Degrees only drop, so trimming keeps the dense grids small.
    term = detail::apply_second_order(term, pairs).trimmed();
    term *= T(1) / T(j);
    result += term;
  }
  return result;
}

template <class T, std::size_t N>
Poly<T, N> apply_exp_operator(const Poly<T, N>& p,
                              std::initializer_list<DiffPair<T>> pairs) {
  return apply_exp_operator(p, std::span<const DiffPair<T>>(pairs.begin(),
                                                           pairs.size()));
}

/// var^bound * p(.., 1/var, ..): the coefficient at power j moves to
/// bound - j. An involution for a fixed bound.
template <class T, std::size_t N>
Poly<T, N> reverse(const Poly<T, N>& p, std::size_t var, int bound) {
  if (var >= N) throw Error(Errc::invalid_argument, "unknown variable id");
  if (p.degree(var) > bound) {
    throw Error(Errc::degree, "degree exceeds reversal bound");
  }
  // Tight grid: sizing by the bound would allocate a full cube of
  // coefficients for a single monomial.
  typename Poly<T, N>::Exponents b{};
  p.for_each_nonzero([&](auto e, const T&) {
    e[var] = bound - e[var];
    for (std::size_t v = 0; v < N; ++v) b[v] = std::max(b[v], e[v]);
  });
  Poly<T, N> out(b);
  p.for_each_nonzero([&](auto e, const T& c) {
    e[var] = bound - e[var];
    out.at(e) = c;
  });
  return out;
}

/// Horner-style evaluation: innermost variable first.
template <class T, std::size_t N>
T eval(const Poly<T, N>& p, std::span<const T> point) {
  if (point.size() != N) throw Error(Errc::invalid_argument, "arity mismatch");
  const auto& b = p.bounds();
  const auto coeffs = p.coeffs();
  // Collapse the last axis repeatedly.
  std::vector<T> work(coeffs.begin(), coeffs.end());
  std::size_t outer = work.size();
  for (std::size_t v = N; v-- > 0;) {
    const auto extent = static_cast<std::size_t>(b[v] + 1);
    outer /= extent;
    std::vector<T> next(outer, T(0));
    for (std::size_t o = 0; o < outer; ++o) {
      T acc(0);
      for (std::size_t j = extent; j-- > 0;) {
        acc = acc * point[v] + work[o * extent + j];
      }
      next[o] = acc;
    }
    work = std::move(next);
  }
  return work[0];
}

template <class T, std::size_t N>
T eval(const Poly<T, N>& p, std::initializer_list<T> point) {
  return eval(p, std::span<const T>(point.begin(), point.size()));
}

/// A target variable written as an affine form c0 + sum_j c_j u_j in M new
/// variables.
template <class T, std::size_t M>
struct AffineForm {
  T constant{0};
  std::array<T, M> linear{};
};

/// Replaces each of the N source variables by an affine form in M new
/// variables, exactly.
template <class T, std::size_t N, std::size_t M>
Poly<T, M> substitute(const Poly<T, N>& p,
                      const std::array<AffineForm<T, M>, N>& map) {
  // Powers of each affine form, up to that variable's bound.
  std::array<std::vector<Poly<T, M>>, N> powers;
  for (std::size_t v = 0; v < N; ++v) {
    typename Poly<T, M>::Exponents ones{};
    ones.fill(1);
    Poly<T, M> form(ones);
    form.at({}) = map[v].constant;
    for (std::size_t j = 0; j < M; ++j) {
      typename Poly<T, M>::Exponents e{};
      e[j] = 1;
      form.at(e) = map[v].linear[j];
    }
    form = form.trimmed();
    powers[v].push_back(Poly<T, M>::constant(T(1)));
    for (int d = 1; d <= p.bound(v); ++d) {
      powers[v].push_back(powers[v].back() * form);
    }
  }
  Poly<T, M> out;
  p.for_each_nonzero([&](const auto& e, const T& c) {
    Poly<T, M> term = Poly<T, M>::constant(c);
    for (std::size_t v = 0; v < N; ++v) {
      if (e[v] > 0) term = term * powers[v][e[v]];
    }
    out += term;
  });
  return out.trimmed();
}

/// h(x, u) = p(x, u - 1, u).
template <class T>
BiPoly<T> substitute_xw(const TriPoly<T>& p) {
  std::array<AffineForm<T, 2>, 3> map{};
  map[0].linear = {T(1), T(0)};
  map[1] = {T(-1), {T(0), T(1)}};
  map[2].linear = {T(0), T(1)};
  return substitute(p, map);
}

/// p(0, w - 1, w): the generalized singular value polynomial in w.
template <class T>
UniPoly<T> substitute_gsvd(const TriPoly<T>& p) {
  std::array<AffineForm<T, 1>, 3> map{};
  map[0] = {T(0), {T(0)}};
  map[1] = {T(-1), {T(1)}};
  map[2] = {T(0), {T(1)}};
  return substitute(p, map);
}

/// p(x, 0, -1): det(xI - B^T B) for a matrix-built p.
template <class T>
UniPoly<T> substitute_singular(const TriPoly<T>& p) {
  std::array<AffineForm<T, 1>, 3> map{};
  map[0] = {T(0), {T(1)}};
  map[1] = {T(0), {T(0)}};
  map[2] = {T(-1), {T(0)}};
  return substitute(p, map);
}

/// p(x, 1): the x-polynomial of a bivariate singular-value polynomial.
template <class T>
UniPoly<T> substitute_unit_y(const BiPoly<T>& p) {
  std::array<AffineForm<T, 1>, 2> map{};
  map[0] = {T(0), {T(1)}};
  map[1] = {T(1), {T(0)}};
  return substitute(p, map);
}

/// Human-readable form, e.g. "x^2*y - 3/2*z + 1".
template <class T, std::size_t N>
std::string to_string(const Poly<T, N>& p);

extern template std::string to_string(const Poly<Rational, 1>&);
extern template std::string to_string(const Poly<Rational, 2>&);
extern template std::string to_string(const Poly<Rational, 3>&);
extern template std::string to_string(const Poly<double, 1>&);
extern template std::string to_string(const Poly<double, 2>&);
extern template std::string to_string(const Poly<double, 3>&);

}  // namespace ffgsv
