// Shared helpers for the unit tests.
#pragma once

#include <cmath>
#include <random>

#include "ffgsv/poly.hpp"

namespace ffgsv::testing {

inline Rational Q(long num, long den = 1) { return make_rational(num, den); }

/// Random small rational with numerator in [-9, 9], denominator in [1, 5].
inline Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  return make_rational(num(rng), den(rng));
}

template <std::size_t N>
Poly<Rational, N> random_poly(std::mt19937_64& rng,
                              const std::array<int, N>& bounds,
                              double density = 0.6) {
  Poly<Rational, N> p(bounds);
  std::bernoulli_distribution keep(density);
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    if (keep(rng)) p.at(p.exponents_of(i)) = random_rational(rng);
  }
  return p;
}

}  // namespace ffgsv::testing

#include "ffgsv/matrix.hpp"

namespace ffgsv::testing {

inline Matrix<double> gaussian_matrix(std::mt19937_64& rng, std::size_t rows,
                                      std::size_t cols) {
  std::normal_distribution<double> g;
  Matrix<double> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = g(rng);
  }
  return m;
}

inline Matrix<Rational> rational_matrix(std::mt19937_64& rng, std::size_t rows,
                                        std::size_t cols) {
  Matrix<Rational> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_rational(rng);
  }
  return m;
}

/// Running mean and standard error of a scalar sample.
struct MeanSe {
  double sum = 0.0, sum_sq = 0.0;
  long n = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double se() const {
    const double m = mean();
    const double var = (sum_sq - static_cast<double>(n) * m * m) /
                       static_cast<double>(n - 1);
    return std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  }
  bool within(double expected, double k_se) const {
    return std::abs(mean() - expected) <= k_se * se() + 1e-12;
  }
};

}  // namespace ffgsv::testing

namespace ffgsv::testing {

/// Exact inverse by Gauss-Jordan elimination; throws if singular.
inline Matrix<Rational> exact_inverse(Matrix<Rational> m) {
  const std::size_t n = m.rows();
  Matrix<Rational> inv = Matrix<Rational>::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && sgn(m(piv, c)) == 0) ++piv;
    if (piv == n) throw Error(Errc::degenerate, "singular matrix");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(m(c, j), m(piv, j));
      std::swap(inv(c, j), inv(piv, j));
    }
    const Rational d = m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) /= d;
      inv(c, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(m(r, c)) == 0) continue;
      const Rational f = m(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

/// Random rational orthogonal n x n matrix: Cayley transform
/// (I - S)(I + S)^(-1) of a random skew-symmetric S.
inline Matrix<Rational> rational_orthogonal(std::mt19937_64& rng,
                                            std::size_t n) {
  Matrix<Rational> s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      s(i, j) = random_rational(rng);
      s(j, i) = -s(i, j);
    }
  }
  const auto id = Matrix<Rational>::identity(n);
  return (id + Rational(-1) * s) * exact_inverse(id + s);
}

/// Splits the first k columns of an orthogonal (s + t) x (s + t) matrix
/// into an s x k block over a t x k block: a pair with A^T A + B^T B = I.
template <class T>
std::pair<Matrix<T>, Matrix<T>> split_columns(const Matrix<T>& q,
                                              std::size_t s, std::size_t t,
                                              std::size_t k) {
  Matrix<T> a(s, k), b(t, k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < s; ++i) a(i, j) = q(i, j);
    for (std::size_t i = 0; i < t; ++i) b(i, j) = q(s + i, j);
  }
  return {a, b};
}

}  // namespace ffgsv::testing
