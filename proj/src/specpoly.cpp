// SPDX-License-Identifier: Apache-2.0
#include "ffgsv/specpoly.hpp"

#include <Eigen/Eigenvalues>

#include "ffgsv/roots.hpp"

namespace ffgsv {

namespace {

template <class S>
using EMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <class T>
std::vector<std::vector<T>> rows_of(const Matrix<T>& m) {
  std::vector<std::vector<T>> out(m.rows(), std::vector<T>(m.cols(), T(0)));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  }
  return out;
}

template <class T>
void require_square(const Matrix<T>& m) {
  if (m.rows() != m.cols()) throw Error(Errc::shape, "matrix is not square");
}

double real_part(double v) { return v; }
double real_part(const Complex& v) { return v.real(); }

template <class T>
UniPoly<double> real_coeffs(const std::vector<T>& c) {
  UniPoly<double> out({static_cast<int>(c.size()) - 1});
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.at({static_cast<int>(i)}) = real_part(c[i]);
  }
  return out;
}

// Monomial coefficients of the interpolant through (nodes[i], values[i]).
std::vector<double> interpolate(const std::vector<double>& nodes,
                                std::vector<double> values) {
  const std::size_t n = nodes.size();
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = n - 1; i >= j; --i) {
      values[i] = (values[i] - values[i - 1]) / (nodes[i] - nodes[i - j]);
      if (i == j) break;
    }
  }
  std::vector<double> coeffs(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    // coeffs <- coeffs * (x - nodes[i]) + values[i]
    for (std::size_t d = n - 1; d > 0; --d) {
      coeffs[d] = coeffs[d - 1] - nodes[i] * coeffs[d];
    }
    coeffs[0] = -nodes[i] * coeffs[0] + values[i];
  }
  return coeffs;
}

std::vector<double> centred_nodes(int degree) {
  std::vector<double> out;
  for (int j = 0; j <= degree; ++j) out.push_back(j - degree / 2);
  return out;
}

template <class S>
TriPoly<double> tri_charpoly_grid(const GramPair<S>& g,
                                  const ShapeParams& shape) {
  shape.validate();
  const int k = shape.k;
  if (g.w1.rows() != static_cast<std::size_t>(k) ||
      g.w2.rows() != static_cast<std::size_t>(k)) {
    throw Error(Errc::shape, "Gram matrices must be k x k");
  }
  const int dx = k;
  const int dy = std::min(shape.s, k);
  const int dz = std::min(shape.t, k);
  const auto nx = centred_nodes(dx), ny = centred_nodes(dy),
             nz = centred_nodes(dz);
  const EMat<S> w1 = to_eigen(g.w1);
  const EMat<S> w2 = to_eigen(g.w2);
  const EMat<S> id = EMat<S>::Identity(k, k);

  const auto ex = static_cast<std::size_t>(dx + 1);
  const auto ey = static_cast<std::size_t>(dy + 1);
  const auto ez = static_cast<std::size_t>(dz + 1);
  auto at = [&](std::size_t a, std::size_t b, std::size_t c) {
    return (a * ey + b) * ez + c;
  };
  std::vector<double> grid(ex * ey * ez);
  for (std::size_t a = 0; a < ex; ++a) {
    for (std::size_t b = 0; b < ey; ++b) {
      for (std::size_t c = 0; c < ez; ++c) {
        const EMat<S> m = S(nx[a]) * id + S(ny[b]) * w1 + S(nz[c]) * w2;
        grid[at(a, b, c)] = real_part(m.partialPivLu().determinant());
      }
    }
  }
  // Interpolate one axis at a time; values are replaced by coefficients.
  std::vector<double> line;
  for (std::size_t a = 0; a < ex; ++a) {
    for (std::size_t b = 0; b < ey; ++b) {
      line.assign(ez, 0.0);
      for (std::size_t c = 0; c < ez; ++c) line[c] = grid[at(a, b, c)];
      line = interpolate(nz, line);
      for (std::size_t c = 0; c < ez; ++c) grid[at(a, b, c)] = line[c];
    }
  }
  for (std::size_t a = 0; a < ex; ++a) {
    for (std::size_t c = 0; c < ez; ++c) {
      line.assign(ey, 0.0);
      for (std::size_t b = 0; b < ey; ++b) line[b] = grid[at(a, b, c)];
      line = interpolate(ny, line);
      for (std::size_t b = 0; b < ey; ++b) grid[at(a, b, c)] = line[b];
    }
  }
  for (std::size_t b = 0; b < ey; ++b) {
    for (std::size_t c = 0; c < ez; ++c) {
      line.assign(ex, 0.0);
      for (std::size_t a = 0; a < ex; ++a) line[a] = grid[at(a, b, c)];
      line = interpolate(nx, line);
      for (std::size_t a = 0; a < ex; ++a) grid[at(a, b, c)] = line[a];
    }
  }
  TriPoly<double> out({k, shape.s, shape.t});
  for (int a = 0; a <= dx; ++a) {
    for (int b = 0; b <= dy; ++b) {
      const int c = k - a - b;
      if (c < 0 || c > dz) continue;
      out.at({a, b, c}) = grid[at(static_cast<std::size_t>(a),
                                  static_cast<std::size_t>(b),
                                  static_cast<std::size_t>(c))];
    }
  }
  return out;
}

template <class T>
UniPoly<double> gsvd_charpoly_float(const GramPair<T>& g) {
  using R = UniPoly<T>;
  const std::size_t k = g.w1.rows();
  std::vector<std::vector<R>> n(k, std::vector<R>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      R e({1});
      e.at({0}) = -g.w1(i, j);
      e.at({1}) = g.w1(i, j) + g.w2(i, j);
      n[i][j] = e;
    }
  }
  const auto c = berkowitz(n, R(), R::constant(T(1)));
  UniPoly<double> out({static_cast<int>(k)});
  // det N = (-1)^k c_0
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  c[0].for_each_nonzero([&](const auto& e, const T& v) {
    out.at(e) = sign * real_part(v);
  });
  return out;
}

template <class S>
void check_psd_impl(const GramPair<S>& g) {
  for (const Matrix<S>* w : {&g.w1, &g.w2}) {
    const EMat<S> m = to_eigen(*w);
    if (m.rows() != m.cols()) throw Error(Errc::shape, "Gram not square");
    const double norm = std::max(m.norm(), 1e-300);
    if ((m - m.adjoint()).norm() > 1e-12 * norm) {
      throw Error(Errc::invalid_argument, "Gram matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<EMat<S>> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10 * norm) {
      throw Error(Errc::invalid_argument,
                  "Gram matrix is not positive semidefinite");
    }
  }
}

constexpr double kCholeskyCondition = 1e12;
constexpr double kRankTolerance = 1e-13;
constexpr double kGsvCluster = 1e-9;

template <class S>
GsvResult gsv_impl(const GramPair<S>& g) {
  const EMat<S> w1 = to_eigen(g.w1);
  const EMat<S> w2 = to_eigen(g.w2);
  const EMat<S> sum = w1 + w2;
  const auto k = sum.rows();
  GsvResult result;
  Eigen::SelfAdjointEigenSolver<EMat<S>> es(sum);
  const Eigen::VectorXd evals = es.eigenvalues();
  const double lmax = k > 0 ? evals(k - 1) : 0.0;
  std::vector<double> values;
  auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };

  if (k == 0 || lmax <= 0.0) {
    result.deficiency = static_cast<int>(k);
    result.route = GsvRoute::reduced;
  } else if (evals(0) > lmax / kCholeskyCondition) {
    Eigen::GeneralizedSelfAdjointEigenSolver<EMat<S>> ges(
        w1, sum, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    for (Eigen::Index i = 0; i < k; ++i) {
      values.push_back(clamp01(ges.eigenvalues()(i)));
    }
    result.route = GsvRoute::cholesky;
  } else {
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < k; ++i) rank += evals(i) > kRankTolerance * lmax;
    if (rank == k) {
      const auto cfg = real_roots(gsvd_charpoly_float(g));
      for (double v : cfg.values) values.push_back(clamp01(v));
      result.route = GsvRoute::pencil;
    } else {
      const EMat<S> basis = es.eigenvectors().rightCols(rank);
      Eigen::VectorXd inv_sqrt = evals.tail(rank).cwiseSqrt().cwiseInverse();
      const EMat<S> scaled = basis * inv_sqrt.cast<S>().asDiagonal();
      const EMat<S> reduced = scaled.adjoint() * w1 * scaled;
      Eigen::SelfAdjointEigenSolver<EMat<S>> rs(reduced, Eigen::EigenvaluesOnly);
      for (Eigen::Index i = 0; i < rank; ++i) {
        values.push_back(clamp01(rs.eigenvalues()(i)));
      }
      result.deficiency = static_cast<int>(k - rank);
      result.route = GsvRoute::reduced;
    }
  }
  result.values = PointConfig::from_values(std::move(values), kGsvCluster);
  return result;
}

}  // namespace

MatrixPair<double> to_float(const MatrixPair<Rational>& pair) {
  return {to_float(pair.a), to_float(pair.b)};
}

GramPair<double> to_float(const GramPair<Rational>& g) {
  return {to_float(g.w1), to_float(g.w2)};
}

void check_psd(const GramPair<double>& g) { check_psd_impl(g); }
void check_psd(const GramPair<Complex>& g) { check_psd_impl(g); }

TriPoly<Rational> tri_charpoly(const GramPair<Rational>& g,
                               const ShapeParams& shape) {
  shape.validate();
  const auto k = static_cast<std::size_t>(shape.k);
  if (g.w1.rows() != k || g.w1.cols() != k || g.w2.rows() != k ||
      g.w2.cols() != k) {
    throw Error(Errc::shape, "Gram matrices must be k x k");
  }
  // det(lambda I - N) with N = -(y W1 + z W2), over Q[y, z].
  using R = BiPoly<Rational>;
  std::vector<std::vector<R>> n(k, std::vector<R>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      R e({1, 1});
      e.at({1, 0}) = -g.w1(i, j);
      e.at({0, 1}) = -g.w2(i, j);
      n[i][j] = e.trimmed();
    }
  }
  const auto c = berkowitz(n, R(), R::constant(Rational(1)));
  TriPoly<Rational> out({shape.k, shape.s, shape.t});
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i].for_each_nonzero([&](const auto& e, const Rational& v) {
      if (e[0] > shape.s || e[1] > shape.t) {
        throw Error(Errc::shape, "Gram rank exceeds the block row count");
      }
      out.at({static_cast<int>(i), e[0], e[1]}) = v;
    });
  }
  return out;
}

TriPoly<Rational> tri_charpoly(const MatrixPair<Rational>& pair) {
  return tri_charpoly(gram(pair), pair.shape());
}

TriPoly<double> tri_charpoly(const GramPair<double>& g,
                             const ShapeParams& shape) {
  return tri_charpoly_grid(g, shape);
}

TriPoly<double> tri_charpoly(const GramPair<Complex>& g,
                             const ShapeParams& shape) {
  return tri_charpoly_grid(g, shape);
}

TriPoly<double> tri_charpoly(const MatrixPair<double>& pair) {
  return tri_charpoly_grid(gram(pair), pair.shape());
}

TriPoly<double> tri_charpoly(const MatrixPair<Complex>& pair) {
  return tri_charpoly_grid(gram(pair), pair.shape());
}

UniPoly<Rational> charpoly(const Matrix<Rational>& m) {
  require_square(m);
  const auto c = berkowitz(rows_of(m), Rational(0), Rational(1));
  UniPoly<Rational> out({static_cast<int>(c.size()) - 1});
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.at({static_cast<int>(i)}) = c[i];
  }
  return out;
}

UniPoly<double> charpoly(const Matrix<double>& m) {
  require_square(m);
  return real_coeffs(berkowitz(rows_of(m), 0.0, 1.0));
}

UniPoly<double> charpoly(const Matrix<Complex>& m) {
  require_square(m);
  return real_coeffs(berkowitz(rows_of(m), Complex{}, Complex{1.0}));
}

UniPoly<Rational> sym_charpoly(const Matrix<Rational>& m) {
  require_square(m);
  Matrix<Rational> mt(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) mt(j, i) = m(i, j);
  }
  return charpoly(m + mt);
}

UniPoly<double> sym_charpoly(const Matrix<double>& m) {
  require_square(m);
  return charpoly(m + m.adjoint());
}

namespace {

template <class T, class Out>
BiPoly<Out> singular_from_charpoly(const UniPoly<Out>& cp, std::size_t m,
                                   std::size_t n) {
  const int shift = static_cast<int>(n - m);
  BiPoly<Out> out({static_cast<int>(m), static_cast<int>(n)});
  cp.for_each_nonzero([&](const auto& e, const Out& v) {
    out.at({e[0], e[0] + shift}) = v;
  });
  return out;
}

template <class T>
void require_wide(const Matrix<T>& c) {
  if (c.rows() > c.cols()) {
    throw Error(Errc::shape, "singular_charpoly needs rows <= cols");
  }
  if (c.rows() == 0) throw Error(Errc::shape, "empty matrix");
}

}  // namespace

BiPoly<Rational> singular_charpoly(const Matrix<Rational>& c) {
  require_wide(c);
  return singular_from_charpoly<Rational>(charpoly(c * c.adjoint()), c.rows(),
                                          c.cols());
}

BiPoly<double> singular_charpoly(const Matrix<double>& c) {
  require_wide(c);
  return singular_from_charpoly<double>(charpoly(c * c.adjoint()), c.rows(),
                                        c.cols());
}

BiPoly<double> singular_charpoly(const Matrix<Complex>& c) {
  require_wide(c);
  return singular_from_charpoly<Complex>(charpoly(c * c.adjoint()), c.rows(),
                                         c.cols());
}

UniPoly<Rational> gsvd_charpoly(const GramPair<Rational>& g) {
  using R = UniPoly<Rational>;
  const std::size_t k = g.w1.rows();
  std::vector<std::vector<R>> n(k, std::vector<R>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      R e({1});
      e.at({0}) = -g.w1(i, j);
      e.at({1}) = g.w1(i, j) + g.w2(i, j);
      n[i][j] = e;
    }
  }
  const auto c = berkowitz(n, R(), R::constant(Rational(1)));
  R out = c[0];
  if (k % 2 == 1) out = -out;
  return out.trimmed();
}

UniPoly<Rational> gsvd_charpoly(const MatrixPair<Rational>& pair) {
  return gsvd_charpoly(gram(pair));
}

UniPoly<double> gsvd_charpoly(const GramPair<double>& g) {
  return gsvd_charpoly_float(g);
}

UniPoly<double> gsvd_charpoly(const MatrixPair<double>& pair) {
  return gsvd_charpoly_float(gram(pair));
}

UniPoly<double> gsvd_charpoly(const MatrixPair<Complex>& pair) {
  return gsvd_charpoly_float(gram(pair));
}

GsvResult gsv_squares(const GramPair<double>& g) { return gsv_impl(g); }
GsvResult gsv_squares(const GramPair<Complex>& g) { return gsv_impl(g); }
GsvResult gsv_squares(const MatrixPair<double>& pair) {
  return gsv_impl(gram(pair));
}
GsvResult gsv_squares(const MatrixPair<Complex>& pair) {
  return gsv_impl(gram(pair));
}

std::vector<double> gsv_squares_by_whitening(const GramPair<double>& g) {
  const EMat<double> w1 = to_eigen(g.w1);
  const EMat<double> sum = w1 + to_eigen(g.w2);
  Eigen::SelfAdjointEigenSolver<EMat<double>> es(sum);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw Error(Errc::degenerate, "W1 + W2 is not positive definite");
  }
  const EMat<double> inv_sqrt = es.operatorInverseSqrt();
  const EMat<double> w = inv_sqrt * w1 * inv_sqrt;
  Eigen::SelfAdjointEigenSolver<EMat<double>> ws(w, Eigen::EigenvaluesOnly);
  std::vector<double> out(ws.eigenvalues().data(),
                          ws.eigenvalues().data() + ws.eigenvalues().size());
  return out;
}

}  // namespace ffgsv
