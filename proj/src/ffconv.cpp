// SPDX-License-Identifier: Apache-2.0
#include "ffgsv/ffconv.hpp"

namespace ffgsv {

UniPoly<Rational> hermite_poly(int n) {
  if (n < 0) throw Error(Errc::invalid_argument, "hermite_poly: n < 0");
  return hermite_evolve(UniPoly<Rational>::monomial({n}), make_rational(1, 2));
}

UniPoly<Rational> laguerre_charpoly(int s, int k) {
  if (k < 1 || s < 1) {
    throw Error(Errc::invalid_argument, "laguerre_charpoly: need s, k >= 1");
  }
  if (k > s) throw Error(Errc::invalid_argument, "laguerre_charpoly: k > s");
  UniPoly<Rational> out({k});
  for (int i = 0; i <= k; ++i) {
    Rational c = binomial<Rational>(s, i) * falling_factorial<Rational>(k, i);
    if (i % 2 == 1) c = -c;
    out.at({k - i}) = c;
  }
  return out;
}

UniPoly<Rational> jacobi_charpoly(int s, int t, int k) {
  if (k < 1 || s < 1 || t < 1) {
    throw Error(Errc::invalid_argument, "jacobi_charpoly: need s, t, k >= 1");
  }
  if (k > s + t) {
    throw Error(Errc::invalid_argument, "jacobi_charpoly: k > s + t");
  }
  const ShapeParams shape{k, s, t};
  const auto evolved = gsvd_evolve(TriPoly<Rational>::monomial({k, 0, 0}),
                                   Rational(1), shape);
  // The operator value is k! times the Jacobi polynomial
  // P_k^(t-k, s-k)(2w - 1); return the latter.
  return substitute_gsvd(evolved) *
         Rational(1 / falling_factorial<Rational>(k, k));
}

}  // namespace ffgsv
