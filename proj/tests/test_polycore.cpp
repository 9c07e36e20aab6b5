#include <doctest.h>

#include <cmath>

#include "ffgsv/poly.hpp"
#include "support.hpp"

using namespace ffgsv;
using ffgsv::testing::Q;

namespace {

using QU = UniPoly<Rational>;
using QB = BiPoly<Rational>;
using QT = TriPoly<Rational>;

}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("3/6") == Q(1, 2));
  CHECK(parse_rational("-0.25") == Q(-1, 4));
  CHECK(parse_rational("1e-8") == Q(1, 100000000));
  CHECK(parse_rational("2.5e1") == Q(25));
  CHECK(format_rational(Q(-6, 4)) == "-3/2");
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  // Stored in lowest terms with positive denominator.
  const Rational r = parse_rational("4/-6");
  CHECK(r.get_num() == -2);
  CHECK(r.get_den() == 3);
}

TEST_CASE("derivative") {
  const auto x3 = QU::monomial({3});
  CHECK(derivative(x3, var_x, 2) == QU::monomial({1}, Q(6)));

  const auto const_in_y = QB::from_terms({{{2, 0}, Q(1)}, {{0, 0}, Q(5)}});
  CHECK(derivative(const_in_y, var_y).is_zero());

  const auto x2y2 = QB::monomial({2, 2});
  CHECK(derivative(derivative(x2y2, var_x), var_y) == QB::monomial({1, 1}, Q(4)));

  CHECK_THROWS_AS(derivative(x3, 1), Error);
}

TEST_CASE("apply_exp_operator") {
  const auto x2 = QU::monomial({2});
  CHECK(apply_exp_operator(x2, {DiffPair<Rational>{0, 0, Q(-1)}}) ==
        QU::from_terms({{{2}, Q(1)}, {{0}, Q(-2)}}));

  const auto xy = QB::monomial({1, 1});
  CHECK(apply_exp_operator(xy, {DiffPair<Rational>{0, 1, Q(-1)}}) ==
        QB::from_terms({{{1, 1}, Q(1)}, {{0, 0}, Q(-1)}}));

  // Each application of dx dy or dx dz consumes the single x.
  const auto xyz = QT::monomial({1, 1, 1});
  const auto got = apply_exp_operator(
      xyz, {DiffPair<Rational>{0, 1, Q(1)}, DiffPair<Rational>{0, 2, Q(1)}});
  CHECK(got == QT::from_terms({{{1, 1, 1}, Q(1)},
                               {{0, 0, 1}, Q(1)},
                               {{0, 1, 0}, Q(1)}}));

  // Oracle: the truncated series summed by hand.
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = testing::random_poly<3>(rng, {3, 2, 2});
    const Rational a = testing::random_rational(rng);
    const Rational b = testing::random_rational(rng);
    QT expected;
    QT term = p;
    for (int j = 1; !term.is_zero(); ++j) {
      expected += term;
      QT next = derivative(derivative(term, 0), 1) * a +
                derivative(derivative(term, 0), 2) * b;
      next *= Q(1, j);
      term = next;
    }
    CHECK(apply_exp_operator(p, {DiffPair<Rational>{0, 1, a},
                                 DiffPair<Rational>{0, 2, b}}) == expected);
  }

  CHECK_THROWS_AS(apply_exp_operator(x2, {DiffPair<Rational>{0, 3, Q(1)}}),
                  Error);
  CHECK_THROWS_AS(
      apply_exp_operator(UniPoly<double>::monomial({2}),
                         {DiffPair<double>{0, 0, std::nan("")}}),
      Error);
}

TEST_CASE("exp operator properties") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::random_poly<2>(rng, {4, 3});
    const Rational a = testing::random_rational(rng);
    const Rational b = testing::random_rational(rng);
    CHECK(apply_exp_operator(p, {DiffPair<Rational>{0, 1, Q(0)}}) == p);
    const auto two = apply_exp_operator(
        apply_exp_operator(p, {DiffPair<Rational>{0, 1, a}}),
        {DiffPair<Rational>{0, 1, b}});
    CHECK(two == apply_exp_operator(p, {DiffPair<Rational>{0, 1, a + b}}));
  }
}

TEST_CASE("reverse") {
  const auto y = QB::monomial({0, 1});
  CHECK(reverse(y, var_y, 2) == y);

  const auto p = QB::from_terms({{{0, 0}, Q(1)}, {{0, 2}, Q(1)}});
  CHECK(reverse(p, var_y, 3) ==
        QB::from_terms({{{0, 3}, Q(1)}, {{0, 1}, Q(1)}}));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto q = testing::random_poly<3>(rng, {2, 3, 2});
    CHECK(reverse(reverse(q, var_y, 4), var_y, 4) == q);
    CHECK(reverse(reverse(q, var_z, 2), var_z, 2) == q);
  }
  CHECK_THROWS_AS(reverse(p, var_y, 1), Error);
}

TEST_CASE("substitute") {
  const auto p = QT::from_terms(
      {{{1, 0, 0}, Q(1)}, {{0, 1, 0}, Q(2)}, {{0, 0, 1}, Q(3)}});
  CHECK(substitute_gsvd(p) == QU::from_terms({{{1}, Q(5)}, {{0}, Q(-2)}}));

  CHECK(substitute_singular(QT::monomial({3, 0, 0})) == QU::monomial({3}));

  // det(xI + z B^T B) with B = [[1]] is x + z.
  const auto pb = QT::from_terms({{{1, 0, 0}, Q(1)}, {{0, 0, 1}, Q(1)}});
  CHECK(substitute_singular(pb) == QU::from_terms({{{1}, Q(1)}, {{0}, Q(-1)}}));

  // h(x, u) = p(x, u - 1, u) of x + y + z is x + 2u - 1.
  const auto sum = QT::from_terms(
      {{{1, 0, 0}, Q(1)}, {{0, 1, 0}, Q(1)}, {{0, 0, 1}, Q(1)}});
  CHECK(substitute_xw(sum) ==
        QB::from_terms({{{1, 0}, Q(1)}, {{0, 1}, Q(2)}, {{0, 0}, Q(-1)}}));

  // General affine map against pointwise evaluation.
  std::mt19937_64 rng(5);
  const auto q = testing::random_poly<3>(rng, {2, 2, 2});
  std::array<AffineForm<Rational, 2>, 3> map{};
  map[0] = {Q(1), {Q(2), Q(0)}};
  map[1] = {Q(0), {Q(-1), Q(3)}};
  map[2] = {Q(1, 2), {Q(0), Q(1)}};
  const auto r = substitute(q, map);
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      const Rational ua(a), ub(b);
      const Rational x = Q(1) + Q(2) * ua, yv = -ua + Q(3) * ub,
                     z = Q(1, 2) + ub;
      CHECK(eval(r, {ua, ub}) == eval(q, {x, yv, z}));
    }
  }
}

TEST_CASE("eval") {
  const auto p = UniPoly<double>::from_terms({{{2}, 1.0}, {{0}, -2.0}});
  CHECK(std::abs(eval(p, {std::sqrt(2.0)})) < 1e-9);
  const auto xy = QB::from_terms({{{1, 1}, Q(1)}, {{0, 0}, Q(-1)}});
  CHECK(eval(xy, {Q(1), Q(1)}) == 0);
  const std::vector<Rational> wrong{Q(1)};
  CHECK_THROWS_AS(eval(xy, std::span<const Rational>(wrong)), Error);
}

TEST_CASE("exact arithmetic round trip") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::random_poly<3>(rng, {3, 2, 1});
    const auto q = testing::random_poly<3>(rng, {1, 3, 2});
    CHECK((p + q) - q == p);
    CHECK(p * q == q * p);
  }
}

TEST_CASE("to_string") {
  const auto p = QT::from_terms(
      {{{2, 1, 0}, Q(1)}, {{0, 0, 1}, Q(-3, 2)}, {{0, 0, 0}, Q(1)}});
  CHECK(to_string(p) == "x^2*y - 3/2*z + 1");
  CHECK(to_string(QU()) == "0");
}
