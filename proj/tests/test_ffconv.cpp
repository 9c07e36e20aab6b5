#include <doctest.h>

#include <numbers>

#include "ffgsv/ffconv.hpp"
#include "ffgsv/roots.hpp"
#include "ffgsv/specpoly.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ffgsv;
using ffgsv::testing::Q;

namespace {

using QU = UniPoly<Rational>;
using QB = BiPoly<Rational>;
using QT = TriPoly<Rational>;

QT swap_yz(const QT& p) {
  std::array<AffineForm<Rational, 3>, 3> map{};
  map[0].linear = {Q(1), Q(0), Q(0)};
  map[1].linear = {Q(0), Q(0), Q(1)};
  map[2].linear = {Q(0), Q(1), Q(0)};
  return substitute(p, map);
}

// Random polynomial whose y/z degrees respect a shape.
QT random_shaped(std::mt19937_64& rng, const ShapeParams& sh) {
  return testing::random_poly<3>(rng, {sh.k, sh.s, sh.t}, 0.5);
}

}  // namespace

TEST_CASE("to_series") {
  const auto p = QU::from_terms({{{2}, Q(1)}, {{0}, Q(-1)}});
  const auto s = to_series(p, 2);
  CHECK(s.coeffs.coeff({0}) == 1);
  CHECK(s.coeffs.coeff({1}) == 0);
  CHECK(s.coeffs.coeff({2}) == Q(-1, 2));

  const Rational a2 = Q(9, 4);
  const auto r = to_series(QB::from_terms({{{1, 1}, Q(1)}, {{0, 0}, -a2}}), 1, 1);
  CHECK(r.coeffs.coeff({0}) == 1);
  CHECK(r.coeffs.coeff({1}) == -a2);

  const auto id = to_series(QU::monomial({5}), 5);
  CHECK(id.coeffs == QU::constant(Q(1)));

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = testing::random_poly<1>(rng, {4});
    CHECK(apply_series(to_series(u, 4), 4) == u);
    const ShapeParams sh{3, 2, 2};
    // Only monomials reachable from x^k y^s z^t by dx dy, dx dz round-trip.
    QT tri({3, 2, 2});
    for (int a = 0; a <= 2; ++a) {
      for (int b = 0; a + b <= 3 && b <= 2; ++b) {
        tri.at({3 - a - b, 2 - a, 2 - b}) = testing::random_rational(rng);
      }
    }
    CHECK(apply_series(to_series(tri, sh), sh) == tri);
  }
  CHECK_THROWS_AS(to_series(QU::monomial({3}), 2), Error);
  CHECK_THROWS_AS(to_series(QB::monomial({1, 0}), 1, 1), Error);
}

TEST_CASE("additive_convolve") {
  const auto x2 = QU::monomial({2});
  const auto q = QU::from_terms({{{2}, Q(1)}, {{1}, Q(3)}, {{0}, Q(-7, 2)}});
  CHECK(additive_convolve(x2, x2, 2) == x2);
  CHECK(additive_convolve(x2, q, 2) == q);

  const auto p = QU::from_terms({{{2}, Q(1)}, {{0}, Q(-1)}});
  CHECK(additive_convolve(p, p, 2) ==
        QU::from_terms({{{2}, Q(1)}, {{0}, Q(-2)}}));

  const Rational a = Q(3, 2), b = Q(-5);
  CHECK(additive_convolve(QU::from_terms({{{1}, Q(1)}, {{0}, -a}}),
                          QU::from_terms({{{1}, Q(1)}, {{0}, -b}}), 1) ==
        QU::from_terms({{{1}, Q(1)}, {{0}, -(a + b)}}));

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = testing::random_poly<1>(rng, {3});
    const auto v = testing::random_poly<1>(rng, {3});
    CHECK(additive_convolve(u, v, 3) == additive_convolve(v, u, 3));
  }
  CHECK_THROWS_AS(additive_convolve(QU::monomial({3}), x2, 2), Error);
}

TEST_CASE("additive_convolve against Haar-rotated sums") {
  // A = B = diag(1, -1); E det(xI - A - Q B Q^T) over Haar Q in O(2).
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  testing::MeanSe c1, c0;
  for (int i = 0; i < 100000; ++i) {
    const double phi = angle(rng);
    const double c = std::cos(phi), s = std::sin(phi);
    // Q diag(1,-1) Q^T for the rotation by phi. A reflection gives the
    // same conjugate of this B, so rotations cover Haar O(2).
    const double q00 = c * c - s * s, q01 = 2 * c * s, q11 = s * s - c * c;
    const double m00 = 1 + q00, m01 = q01, m11 = -1 + q11;
    c1.add(-(m00 + m11));
    c0.add(m00 * m11 - m01 * m01);
  }
  const auto p = QU::from_terms({{{2}, Q(1)}, {{0}, Q(-1)}});
  const auto conv = additive_convolve(p, p, 2);
  CHECK(c1.within(conv.coeff({1}).get_d(), 3));
  CHECK(c0.within(conv.coeff({0}).get_d(), 3));
}

TEST_CASE("hermite_evolve") {
  CHECK(hermite_evolve(QU::monomial({2}), Q(1)) ==
        QU::from_terms({{{2}, Q(1)}, {{0}, Q(-2)}}));
  CHECK(hermite_evolve(QU::monomial({3}), Q(1, 2)) ==
        QU::from_terms({{{3}, Q(1)}, {{1}, Q(-3)}}));
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = testing::random_poly<1>(rng, {6});
    const Rational a = testing::random_rational(rng);
    const Rational b = testing::random_rational(rng);
    CHECK(hermite_evolve(p, Q(0)) == p);
    CHECK(hermite_evolve(hermite_evolve(p, a), b) == hermite_evolve(p, a + b));
    CHECK(hermite_evolve(hermite_evolve(p, -a), a) == p);
  }
}

TEST_CASE("rect_convolve and laguerre_evolve") {
  const auto q = QB::from_terms({{{2, 2}, Q(1)}, {{1, 1}, Q(-4)}, {{0, 0}, Q(2)}});
  CHECK(rect_convolve(QB::monomial({2, 2}), q, 2, 2) == q);
  CHECK(rect_convolve(q, QB::monomial({2, 2}), 2, 2) == q);

  const Rational a2 = Q(4), b2 = Q(1, 9);
  CHECK(rect_convolve(QB::from_terms({{{1, 1}, Q(1)}, {{0, 0}, -a2}}),
                      QB::from_terms({{{1, 1}, Q(1)}, {{0, 0}, -b2}}), 1, 1) ==
        QB::from_terms({{{1, 1}, Q(1)}, {{0, 0}, -(a2 + b2)}}));

  CHECK(laguerre_evolve(QB::monomial({1, 1}), Q(1)) ==
        QB::from_terms({{{1, 1}, Q(1)}, {{0, 0}, Q(-1)}}));
  CHECK(laguerre_evolve(QB::monomial({2, 2}), Q(1)) == q);

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = testing::random_poly<2>(rng, {3, 4});
    const Rational a = testing::random_rational(rng);
    const Rational b = testing::random_rational(rng);
    CHECK(laguerre_evolve(p, Q(0)) == p);
    CHECK(laguerre_evolve(laguerre_evolve(p, a), b) ==
          laguerre_evolve(p, a + b));
  }
  // Convolution with a rectangular series, both orders.
  for (int trial = 0; trial < 5; ++trial) {
    QB u({2, 3}), v({2, 3});
    for (int i = 0; i <= 2; ++i) {
      u.at({2 - i, 3 - i}) = testing::random_rational(rng);
      v.at({2 - i, 3 - i}) = testing::random_rational(rng);
    }
    CHECK(rect_convolve(u, v, 2, 3) == rect_convolve(v, u, 2, 3));
  }
}

TEST_CASE("gsvd_evolve examples") {
  const Rational th = Q(5, 3);
  const ShapeParams one{1, 1, 1};
  CHECK(gsvd_evolve(QT::monomial({1, 0, 0}), th, one) ==
        QT::from_terms({{{1, 0, 0}, Q(1)}, {{0, 1, 0}, th}, {{0, 0, 1}, th}}));

  const ShapeParams sh{2, 3, 4};
  const auto top = QT::monomial({2, 3, 4});
  CHECK(gsvd_evolve(top, th, sh) == top);

  const auto lin = substitute_gsvd(gsvd_evolve(QT::monomial({1, 0, 0}), Q(1), one));
  CHECK(lin == QU::from_terms({{{1}, Q(2)}, {{0}, Q(-1)}}));

  CHECK_THROWS_AS(gsvd_evolve(QT::monomial({0, 2, 0}), th, one), Error);
  CHECK_THROWS_AS(gsvd_evolve(QT::monomial({0, 0, 0}), th, ShapeParams{0, 1, 1}),
                  Error);
}

TEST_CASE("gsvd_evolve: direct form equals the conjugated form") {
  for (const Rational th : {Q(1), Q(1, 3), Q(7)}) {
    for (int k = 1; k <= 4; ++k) {
      for (int s = 1; s <= 4; ++s) {
        for (int t = 1; t <= 4; ++t) {
          const ShapeParams sh{k, s, t};
          for (int i = 0; i <= k; ++i) {
            for (int j = 0; j <= s; ++j) {
              for (int l = 0; l <= t; ++l) {
                const auto m = QT::monomial({i, j, l});
                CHECK(gsvd_evolve(m, th, sh) ==
                      gsvd_evolve_conjugated(m, th, sh));
              }
            }
          }
        }
      }
    }
  }
}

TEST_CASE("gsvd_evolve properties") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 15; ++trial) {
    const ShapeParams sh{1 + static_cast<int>(rng() % 4),
                         1 + static_cast<int>(rng() % 4),
                         1 + static_cast<int>(rng() % 4)};
    const auto p = random_shaped(rng, sh);
    const Rational a = testing::random_rational(rng);
    const Rational b = testing::random_rational(rng);
    CHECK(gsvd_evolve(p, Q(0), sh) == p);
    CHECK(gsvd_evolve(gsvd_evolve(p, a, sh), b, sh) ==
          gsvd_evolve(p, a + b, sh));
    CHECK(swap_yz(gsvd_evolve(p, a, sh)) ==
          gsvd_evolve(swap_yz(p), a, sh.swapped()));
  }
}

TEST_CASE("gsvd_evolve keeps matrix polynomials real-rooted") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const int k = 2 + trial % 3;
    const MatrixPair<double> pair{testing::gaussian_matrix(rng, k + 1, k),
                                  testing::gaussian_matrix(rng, k + 2, k)};
    const auto p = tri_charpoly(pair);
    for (double th : {0.0, 0.1, 2.0}) {
      const auto ev = gsvd_evolve(p, th, pair.shape());
      for (const auto& slice : {substitute_gsvd(ev), substitute_singular(ev)}) {
        for (const auto& r : all_roots(slice)) {
          CHECK(std::abs(r.imag()) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("classical polynomials") {
  CHECK(hermite_poly(3) == QU::from_terms({{{3}, Q(1)}, {{1}, Q(-3)}}));
  CHECK(laguerre_charpoly(2, 2) ==
        QU::from_terms({{{2}, Q(1)}, {{1}, Q(-4)}, {{0}, Q(2)}}));
  CHECK(jacobi_charpoly(1, 1, 1) == QU::from_terms({{{1}, Q(2)}, {{0}, Q(-1)}}));

  for (int n = 0; n <= 10; ++n) {
    CHECK(hermite_poly(n) == testing::hermite_recurrence(n));
  }
  for (int s = 1; s <= 6; ++s) {
    for (int k = 1; k <= s; ++k) {
      Rational sign_fact = falling_factorial<Rational>(k, k);
      if (k % 2 == 1) sign_fact = -sign_fact;
      CHECK(laguerre_charpoly(s, k) ==
            testing::laguerre_recurrence(k, s - k) * sign_fact);
      for (int t = k; t <= 6; ++t) {
        if (k > s) continue;
        CHECK(jacobi_charpoly(s, t, k) ==
              testing::compose_2w_minus_1(
                  testing::jacobi_recurrence(k, t - k, s - k)));
      }
    }
  }
  CHECK_THROWS_AS(laguerre_charpoly(2, 3), Error);
  CHECK_THROWS_AS(jacobi_charpoly(1, 1, 3), Error);
  CHECK_THROWS_AS(hermite_poly(-1), Error);
}

TEST_CASE("laguerre_charpoly against Gaussian Wishart samples") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  testing::MeanSe c1, c0;
  for (int i = 0; i < 100000; ++i) {
    const double a = g(rng), b = g(rng), c = g(rng), d = g(rng);
    // X = [[a, b], [c, d]]; det(xI - X^T X) = x^2 - tr x + det(X)^2.
    c1.add(-(a * a + b * b + c * c + d * d));
    const double det = a * d - b * c;
    c0.add(det * det);
  }
  const auto p = laguerre_charpoly(2, 2);
  CHECK(c1.within(p.coeff({1}).get_d(), 3));
  CHECK(c0.within(p.coeff({0}).get_d(), 3));
}

TEST_CASE("long-horizon roots approach the Jacobi roots") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 4; ++trial) {
    const int k = 2 + trial % 2, s = 3 + trial % 2, t = 4;
    const MatrixPair<Rational> pair{testing::rational_matrix(rng, s, k),
                                    testing::rational_matrix(rng, t, k)};
    const auto p = tri_charpoly(pair);
    const auto ev = gsvd_evolve(p, Q(1000000), pair.shape());
    const auto got = real_roots(to_float(substitute_gsvd(ev)));
    const auto want = real_roots(to_float(jacobi_charpoly(s, t, k)));
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(std::abs(got.values[i] - want.values[i]) <=
            1e-2 * std::abs(want.values[i]));
    }
  }
}
