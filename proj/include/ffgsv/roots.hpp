// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ffgsv/point_config.hpp"
#include "ffgsv/poly.hpp"

namespace ffgsv {

/// All complex roots, as eigenvalues of the balanced companion matrix.
/// Leading zero coefficients are dropped; throws on the zero polynomial.
std::vector<Complex> all_roots(const UniPoly<double>& p);

/// Real roots with multiplicity. Eigenvalues with |imag| below
/// imag_tol * max(1, |real|) count as real (near-multiple roots of a
/// real-rooted polynomial split into such pairs); each real root gets a
/// guarded Newton polish. Values within cluster_tol are flagged as one
/// cluster.
PointConfig real_roots(const UniPoly<double>& p, double imag_tol = 1e-6,
                       double cluster_tol = 1e-6);

/// Exact-mode real roots: square-free decomposition, Sturm-sequence
/// isolation, then sign bisection until the bracket collapses to one
/// double. tol only separates roots closer than it (reported together).
/// Multiplicities are exact.
PointConfig real_roots(const UniPoly<Rational>& p, double tol = 1e-12);

/// Number of distinct real roots in (a, b] via a Sturm sequence.
int sturm_count(const UniPoly<Rational>& p, const Rational& a,
                const Rational& b);

}  // namespace ffgsv
