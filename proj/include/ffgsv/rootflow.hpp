// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ffgsv/ffconv.hpp"
#include "ffgsv/point_config.hpp"
#include "ffgsv/roots.hpp"

namespace ffgsv {

enum class TraceMethod { operator_path, ode };

/// Root configurations along an increasing theta grid. Index i of every
/// config follows one root path (paths never cross, so sorted order is the
/// matching). An empty config marks a theta where the specialized
/// polynomial vanished identically.
struct EvolutionTrace {
  std::vector<double> thetas;
  std::vector<PointConfig> configs;
  TraceMethod method = TraceMethod::operator_path;
  std::string abort_reason;  // non-empty when an ODE run stopped early

  bool aborted() const noexcept { return !abort_reason.empty(); }
};

/// Which univariate slice of a trivariate polynomial to track.
enum class Specialization {
  gsvd,      // p(0, w - 1, w)
  singular,  // p(x, 0, -1)
};

namespace detail {

inline bool same_point(double a, double b) {
  return std::abs(a - b) <=
         1e-14 * std::max({1.0, std::abs(a), std::abs(b)});
}
inline bool same_point(const Rational& a, const Rational& b) { return a == b; }

template <class T>
void require_distinct(std::span<const T> roots) {
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (same_point(roots[i], roots[j])) {
        throw Error(Errc::degenerate,
                    "repeated root: drift is singular, use the operator path");
      }
    }
  }
}

}  // namespace detail

/// d lambda_i / d theta = sum_{j != i} 2 / (lambda_i - lambda_j).
template <class T>
std::vector<T> hermite_drift(std::span<const T> roots) {
  detail::require_distinct(roots);
  std::vector<T> v(roots.size(), T(0));
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j != i) v[i] += T(2) / T(roots[i] - roots[j]);
    }
  }
  return v;
}

/// d lambda_i / d theta = n + sum_{j != i} (lambda_i + lambda_j) /
/// (lambda_i - lambda_j), for m = roots.size() <= n.
template <class T>
std::vector<T> laguerre_drift(std::span<const T> roots, int n) {
  if (static_cast<int>(roots.size()) > n) {
    throw Error(Errc::invalid_argument, "laguerre drift needs n >= m");
  }
  detail::require_distinct(roots);
  std::vector<T> v(roots.size(), T(n));
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j != i) {
        v[i] += T(roots[i] + roots[j]) / T(roots[i] - roots[j]);
      }
    }
  }
  return v;
}

/// The classical Jacobi drift
///   -s (lambda_i - 1) - t lambda_i
///   + sum_{j != i} [lambda_i (1 - lambda_j) + lambda_j (1 - lambda_i)]
///                  / (lambda_i - lambda_j).
std::vector<double> jacobi_drift(std::span<const double> roots, int s, int t);

/// Root velocities of p(0, w - 1, w) under the gsvd evolution, from
/// h(x, u) = p(x, u - 1, u):
///   w' = { [-(s-k+1)(w-1) - (t-k+1) w] h_1 - w (w-1) h_12 } / h_2
/// with partials taken at (0, w). Throws Errc::degenerate when h_2 vanishes
/// at a root or roots repeat.
std::vector<double> gsvd_drift(const BiPoly<double>& h,
                               std::span<const double> roots,
                               const ShapeParams& shape);

struct HermiteModel {};
struct LaguerreModel {
  int m = 1;
  int n = 1;
};
/// Carries the trivariate polynomial so h can be re-evolved to the current
/// theta at every stage.
struct GsvdModel {
  TriPoly<double> p;
  ShapeParams shape;
};
using DriftModel = std::variant<HermiteModel, LaguerreModel, GsvdModel>;

/// Velocities of the model at a given theta (theta only matters for Gsvd).
std::vector<double> drift_velocity(const DriftModel& model, double theta,
                                   std::span<const double> roots);

/// Classical fixed-step RK4 over [theta0, theta1]. Requires distinct
/// starting roots; a mid-run collision (gap < 1e-10) or degeneracy stops
/// the run and returns the partial trace with abort_reason set.
EvolutionTrace evolve_roots_ode(const DriftModel& model,
                                const PointConfig& start, double theta0,
                                double theta1, int steps);

struct OperatorPathOptions {
  /// Every `recompute_every` grid points the polynomial is re-evolved from
  /// theta = 0 (exactly, for exact input); in between it is advanced in
  /// float by the grid increment.
  int recompute_every = 64;
};

/// Hermite path: roots of exp(-theta d^2) p.
EvolutionTrace evolve_roots_operator(const UniPoly<Rational>& p,
                                     std::span<const Rational> thetas,
                                     OperatorPathOptions opts = {});
EvolutionTrace evolve_roots_operator(const UniPoly<double>& p,
                                     std::span<const double> thetas,
                                     OperatorPathOptions opts = {});

/// Laguerre path: x-roots at y = 1 of exp(-theta dx dy) p.
EvolutionTrace evolve_roots_operator(const BiPoly<Rational>& p,
                                     std::span<const Rational> thetas,
                                     OperatorPathOptions opts = {});
EvolutionTrace evolve_roots_operator(const BiPoly<double>& p,
                                     std::span<const double> thetas,
                                     OperatorPathOptions opts = {});

/// GSVD path: roots of the chosen slice of gsvd_evolve(p, theta).
EvolutionTrace evolve_roots_operator(const TriPoly<Rational>& p,
                                     std::span<const Rational> thetas,
                                     const ShapeParams& shape,
                                     Specialization spec,
                                     OperatorPathOptions opts = {});
EvolutionTrace evolve_roots_operator(const TriPoly<double>& p,
                                     std::span<const double> thetas,
                                     const ShapeParams& shape,
                                     Specialization spec,
                                     OperatorPathOptions opts = {});

/// Roots of one slice of a trivariate polynomial; empty when the slice is
/// identically zero.
PointConfig specialized_roots(const TriPoly<double>& p, Specialization spec);
PointConfig specialized_roots(const TriPoly<Rational>& p, Specialization spec);

}  // namespace ffgsv
