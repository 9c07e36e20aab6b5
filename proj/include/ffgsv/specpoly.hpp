// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ffgsv/matrix.hpp"
#include "ffgsv/point_config.hpp"
#include "ffgsv/poly.hpp"

namespace ffgsv {

/// A (s x k) and B (t x k), sharing the column count k.
template <class T>
struct MatrixPair {
  Matrix<T> a;
  Matrix<T> b;

  ShapeParams shape() const {
    return {static_cast<int>(a.cols()), static_cast<int>(a.rows()),
            static_cast<int>(b.rows())};
  }

  void validate() const {
    if (a.cols() != b.cols()) {
      throw Error(Errc::shape, "pair blocks must have the same column count");
    }
    shape().validate();
  }
};

/// W1 = A^* A and W2 = B^* B.
template <class T>
struct GramPair {
  Matrix<T> w1;
  Matrix<T> w2;
};

template <class T>
GramPair<T> gram(const MatrixPair<T>& pair) {
  pair.validate();
  return {pair.a.adjoint() * pair.a, pair.b.adjoint() * pair.b};
}

MatrixPair<double> to_float(const MatrixPair<Rational>& pair);
GramPair<double> to_float(const GramPair<Rational>& g);

/// Throws unless both Gram matrices are Hermitian with minimum eigenvalue
/// above -1e-10 * ||W||.
void check_psd(const GramPair<double>& g);
void check_psd(const GramPair<Complex>& g);

/// Division-free characteristic polynomial det(lambda I - N) over any
/// commutative ring, ascending coefficients. O(n^4) ring operations.
template <class R>
std::vector<R> berkowitz(const std::vector<std::vector<R>>& n, const R& zero,
                         const R& one) {
  const std::size_t size = n.size();
  if (size == 0) return {one};
  std::vector<R> c = {one, zero - n[0][0]};  // highest power first
  for (std::size_t r = 1; r < size; ++r) {
    // Bordering the leading r x r block with column n[0..r)[r], row
    // n[r][0..r) and corner n[r][r].
    std::vector<R> toeplitz(r + 2, zero);
    toeplitz[0] = one;
    toeplitz[1] = zero - n[r][r];
    std::vector<R> v(r, zero);
    for (std::size_t i = 0; i < r; ++i) v[i] = n[i][r];
    for (std::size_t j = 0; j < r; ++j) {
      R dot = zero;
      for (std::size_t i = 0; i < r; ++i) dot += n[r][i] * v[i];
      toeplitz[j + 2] = zero - dot;
      if (j + 1 < r) {
        std::vector<R> next(r, zero);
        for (std::size_t i = 0; i < r; ++i) {
          for (std::size_t l = 0; l < r; ++l) next[i] += n[i][l] * v[l];
        }
        v = std::move(next);
      }
    }
    std::vector<R> next(r + 2, zero);
    for (std::size_t i = 0; i < r + 2; ++i) {
      for (std::size_t j = 0; j <= std::min(i, r); ++j) {
        next[i] += toeplitz[i - j] * c[j];
      }
    }
    c = std::move(next);
  }
  std::reverse(c.begin(), c.end());
  return c;
}

/// det(xI + y A^T A + z B^T B). Exact via Berkowitz over Q[y, z]; the
/// floating-point overloads evaluate on an integer tensor grid and
/// interpolate, then keep only the k-homogeneous part.
TriPoly<Rational> tri_charpoly(const MatrixPair<Rational>& pair);
TriPoly<Rational> tri_charpoly(const GramPair<Rational>& g,
                               const ShapeParams& shape);
TriPoly<double> tri_charpoly(const MatrixPair<double>& pair);
TriPoly<double> tri_charpoly(const MatrixPair<Complex>& pair);
TriPoly<double> tri_charpoly(const GramPair<double>& g,
                             const ShapeParams& shape);
TriPoly<double> tri_charpoly(const GramPair<Complex>& g,
                             const ShapeParams& shape);

/// det(xI - M) for a square matrix; for Complex input M must be Hermitian
/// and the (real) coefficients are returned.
UniPoly<Rational> charpoly(const Matrix<Rational>& m);
UniPoly<double> charpoly(const Matrix<double>& m);
UniPoly<double> charpoly(const Matrix<Complex>& m);

/// det(xI - M - M^T).
UniPoly<Rational> sym_charpoly(const Matrix<Rational>& m);
UniPoly<double> sym_charpoly(const Matrix<double>& m);

/// y^(n-m) det(xy I - C C^*) for an m x n matrix C with m <= n.
BiPoly<Rational> singular_charpoly(const Matrix<Rational>& c);
BiPoly<double> singular_charpoly(const Matrix<double>& c);
BiPoly<double> singular_charpoly(const Matrix<Complex>& c);

/// det((w - 1) W1 + w W2) as a polynomial in w. The zero polynomial means
/// W1 + W2 is singular.
UniPoly<Rational> gsvd_charpoly(const MatrixPair<Rational>& pair);
UniPoly<Rational> gsvd_charpoly(const GramPair<Rational>& g);
UniPoly<double> gsvd_charpoly(const MatrixPair<double>& pair);
UniPoly<double> gsvd_charpoly(const MatrixPair<Complex>& pair);
UniPoly<double> gsvd_charpoly(const GramPair<double>& g);

enum class GsvRoute {
  cholesky,  // W1 v = lambda (W1 + W2) v, Cholesky-reduced
  pencil,    // real roots of det((w - 1) W1 + w W2)
  reduced,   // rank-deficient W1 + W2: problem restricted to its range
};

struct GsvResult {
  PointConfig values;  // squared generalized singular values in [0, 1]
  int deficiency = 0;  // k - rank(W1 + W2)
  GsvRoute route = GsvRoute::cholesky;
};

/// Squared generalized singular values of the pair, ascending.
GsvResult gsv_squares(const MatrixPair<double>& pair);
GsvResult gsv_squares(const MatrixPair<Complex>& pair);
GsvResult gsv_squares(const GramPair<double>& g);
GsvResult gsv_squares(const GramPair<Complex>& g);

/// Eigenvalues of W = (W1 + W2)^(-1/2) W1 (W1 + W2)^(-1/2) through an
/// explicit inverse square root. Requires W1 + W2 positive definite.
std::vector<double> gsv_squares_by_whitening(const GramPair<double>& g);

}  // namespace ffgsv
