// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <type_traits>

#include "ffgsv/poly.hpp"

namespace ffgsv {

/// Coefficients of a power series in one or two differential symbols that
/// reproduces a polynomial when applied to a base monomial:
///   D = 1, univariate:  p = sum_i c_i d^i [x^n]
///   D = 1, rectangular: p = sum_i c_i (dx dy)^i [x^m y^n]
///   D = 2, trivariate:  p = sum_{a,b} c_ab (dx dy)^a (dx dz)^b [x^k y^s z^t]
template <class T, std::size_t D>
struct CoeffSeries {
  Poly<T, D> coeffs;
};

// Univariate over x^n: d^i x^n = n!/(n-i)! x^(n-i).

template <class T>
CoeffSeries<T, 1> to_series(const UniPoly<T>& p, int n) {
  if (p.degree(0) > n) throw Error(Errc::degree, "degree exceeds base n");
  UniPoly<T> c({n});
  p.for_each_nonzero([&](const auto& e, const T& v) {
    const int i = n - e[0];
    c.at({i}) = v / falling_factorial<T>(n, i);
  });
  return {c};
}

template <class T>
UniPoly<T> apply_series(const CoeffSeries<T, 1>& s, int n) {
  UniPoly<T> out({n});
  s.coeffs.for_each_nonzero([&](const auto& e, const T& c) {
    const int i = e[0];
    if (i > n) return;
    out.at({n - i}) += c * falling_factorial<T>(n, i);
  });
  return out;
}

// Rectangular over x^m y^n: (dx dy)^i x^m y^n = m!/(m-i)! n!/(n-i)! x^(m-i) y^(n-i).

template <class T>
CoeffSeries<T, 1> to_series(const BiPoly<T>& p, int m, int n) {
  UniPoly<T> c({std::min(m, n)});
  p.for_each_nonzero([&](const auto& e, const T& v) {
    const int i = m - e[0];
    if (i < 0 || n - e[1] != i || i > std::min(m, n)) {
      throw Error(Errc::degree,
                  "polynomial is not representable over x^m y^n");
    }
    c.at({i}) = v / (falling_factorial<T>(m, i) * falling_factorial<T>(n, i));
  });
  return {c};
}

template <class T>
BiPoly<T> apply_series(const CoeffSeries<T, 1>& s, int m, int n) {
  BiPoly<T> out({m, n});
  s.coeffs.for_each_nonzero([&](const auto& e, const T& c) {
    const int i = e[0];
    if (i > m || i > n) return;
    out.at({m - i, n - i}) +=
        c * falling_factorial<T>(m, i) * falling_factorial<T>(n, i);
  });
  return out;
}

// Trivariate over x^k y^s z^t with symbols (dx dy, dx dz).

template <class T>
CoeffSeries<T, 2> to_series(const TriPoly<T>& p, const ShapeParams& shape) {
  shape.validate();
  BiPoly<T> c({shape.s, shape.t});
  p.for_each_nonzero([&](const auto& e, const T& v) {
    const int a = shape.s - e[1];
    const int b = shape.t - e[2];
    if (a < 0 || b < 0 || e[0] != shape.k - a - b) {
      throw Error(Errc::degree,
                  "polynomial is not representable over x^k y^s z^t");
    }
    c.at({a, b}) = v / (falling_factorial<T>(shape.k, a + b) *
                        falling_factorial<T>(shape.s, a) *
                        falling_factorial<T>(shape.t, b));
  });
  return {c};
}

template <class T>
TriPoly<T> apply_series(const CoeffSeries<T, 2>& s, const ShapeParams& shape) {
  TriPoly<T> out({shape.k, shape.s, shape.t});
  s.coeffs.for_each_nonzero([&](const auto& e, const T& c) {
    const int a = e[0];
    const int b = e[1];
    if (a + b > shape.k || a > shape.s || b > shape.t) return;
    out.at({shape.k - a - b, shape.s - a, shape.t - b}) +=
        c * falling_factorial<T>(shape.k, a + b) *
        falling_factorial<T>(shape.s, a) * falling_factorial<T>(shape.t, b);
  });
  return out;
}

template <class T, std::size_t D>
CoeffSeries<T, D> operator*(const CoeffSeries<T, D>& a,
                            const CoeffSeries<T, D>& b) {
  return {a.coeffs * b.coeffs};
}

/// Finite free additive convolution of degree-n polynomials: the product of
/// the two operator symbols applied to x^n.
template <class T>
UniPoly<T> additive_convolve(const UniPoly<T>& p, const UniPoly<T>& q, int n) {
  return apply_series(to_series(p, n) * to_series(q, n), n);
}

/// Rectangular convolution over x^m y^n.
template <class T>
BiPoly<T> rect_convolve(const BiPoly<T>& p, const BiPoly<T>& q, int m, int n) {
  return apply_series(to_series(p, m, n) * to_series(q, m, n), m, n);
}

/// Trivariate convolution of reversed (q-form) characteristic polynomials
/// over x^k y^s z^t.
template <class T>
TriPoly<T> tri_convolve(const TriPoly<T>& p, const TriPoly<T>& q,
                        const ShapeParams& shape) {
  return apply_series(to_series(p, shape) * to_series(q, shape), shape);
}

/// exp(-theta d^2) p.
template <class T>
UniPoly<T> hermite_evolve(const UniPoly<T>& p,
                          const std::type_identity_t<T>& theta) {
  return apply_exp_operator(p, {DiffPair<T>{0, 0, T(-theta)}});
}

/// exp(-theta dx dy) p.
template <class T>
BiPoly<T> laguerre_evolve(const BiPoly<T>& p,
                          const std::type_identity_t<T>& theta) {
  return apply_exp_operator(p, {DiffPair<T>{0, 1, T(-theta)}});
}

namespace detail {

inline void check_gsvd_shape(int y_degree, int z_degree,
                             const ShapeParams& shape) {
  shape.validate();
  if (y_degree > shape.s || z_degree > shape.t) {
    throw Error(Errc::shape, "polynomial exceeds the (s, t) degree bounds");
  }
}

}  // namespace detail

/// The generalized-singular-value evolution operator, monomial by monomial:
///   x^i y^j z^l -> (1 + theta y dx)^(s-j) (1 + theta z dx)^(t-l) x^i y^j z^l
/// expanded with exact binomial coefficients.
template <class T>
TriPoly<T> gsvd_evolve(const TriPoly<T>& p,
                       const std::type_identity_t<T>& theta,
                       const ShapeParams& shape) {
  detail::check_gsvd_shape(p.degree(var_y), p.degree(var_z), shape);
  const int kx = std::max(p.bound(var_x), 0);
  TriPoly<T> out({kx, shape.s, shape.t});
  // theta^r, reused across monomials.
  std::vector<T> theta_pow(static_cast<std::size_t>(kx) + 1, T(1));
  for (std::size_t r = 1; r < theta_pow.size(); ++r) {
    theta_pow[r] = theta_pow[r - 1] * theta;
  }
  p.for_each_nonzero([&](const auto& e, const T& c) {
    const int i = e[0], j = e[1], l = e[2];
    for (int u = 0; u <= std::min(shape.s - j, i); ++u) {
      const T cu = binomial<T>(shape.s - j, u);
      for (int v = 0; u + v <= i && v <= shape.t - l; ++v) {
        const T term = c * cu * binomial<T>(shape.t - l, v) *
                       falling_factorial<T>(i, u + v) *
                       theta_pow[static_cast<std::size_t>(u + v)];
        out.at({i - u - v, j + u, l + v}) += term;
      }
    }
  });
  return out;
}

/// The same operator computed as reverse o exp(theta dx dy + theta dx dz) o
/// reverse, with reversals in y (bound s) and z (bound t). Kept as an
/// independent route for cross-checking gsvd_evolve.
template <class T>
TriPoly<T> gsvd_evolve_conjugated(const TriPoly<T>& p,
                                  const std::type_identity_t<T>& theta,
                                  const ShapeParams& shape) {
  detail::check_gsvd_shape(p.degree(var_y), p.degree(var_z), shape);
  TriPoly<T> q = reverse(reverse(p, var_y, shape.s), var_z, shape.t);
  q = apply_exp_operator(q, {DiffPair<T>{var_x, var_y, theta},
                             DiffPair<T>{var_x, var_z, theta}});
  return reverse(reverse(q, var_y, shape.s), var_z, shape.t);
}

/// Probabilists' Hermite polynomial exp(-d^2/2) x^n.
UniPoly<Rational> hermite_poly(int n);

/// (1 - d)^s x^k: expected det(xI - X^T X) for an s x k matrix X of unit
/// variance entries. Requires k <= s.
UniPoly<Rational> laguerre_charpoly(int s, int k);

/// (1 + (w-1) dx)^s (1 + w dx)^t x^k at x = 0 divided by k!, which is the
/// Jacobi polynomial P_k^(t-k, s-k)(2w - 1). Its roots are the limiting
/// squared generalized singular values. Requires k <= s + t.
UniPoly<Rational> jacobi_charpoly(int s, int t, int k);

}  // namespace ffgsv
