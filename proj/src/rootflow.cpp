// SPDX-License-Identifier: Apache-2.0
#include "ffgsv/rootflow.hpp"

#include <cmath>
#include <sstream>

namespace ffgsv {

namespace {

constexpr double kCollisionGap = 1e-10;
constexpr double kDegenerateH2 = 1e-12;

// Sum of |c| * r^deg over the coefficients, a scale for judging whether a
// value of the polynomial at |u| <= r is numerically zero.
double magnitude_bound(const UniPoly<double>& p, double r) {
  double total = 0.0, pw = 1.0;
  for (double c : p.coeffs()) {
    total += std::abs(c) * pw;
    pw *= r;
  }
  return total;
}

UniPoly<double> slice_at_zero_x(const BiPoly<double>& h) {
  // h(0, u) as a polynomial in u.
  std::array<AffineForm<double, 1>, 2> map{};
  map[0] = {0.0, {0.0}};
  map[1] = {0.0, {1.0}};
  return substitute(h, map);
}

std::vector<double> rk4_combine(const std::vector<double>& y,
                                const std::vector<double>& k, double h) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + h * k[i];
  return out;
}

std::string collision_message(double theta) {
  std::ostringstream os;
  os << "root collision at theta = " << format_double(theta);
  return os.str();
}

double min_gap(const std::vector<double>& y) {
  double gap = INFINITY;
  for (std::size_t i = 1; i < y.size(); ++i) gap = std::min(gap, y[i] - y[i - 1]);
  return gap;
}

PointConfig roots_or_empty(const UniPoly<double>& p) {
  if (p.is_zero()) return {};
  return real_roots(p);
}

PointConfig roots_or_empty(const UniPoly<Rational>& p) {
  if (p.is_zero()) return {};
  return real_roots(p);
}

void check_grid(std::span<const double> thetas) {
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (!std::isfinite(thetas[i])) {
      throw Error(Errc::invalid_argument, "non-finite theta");
    }
    if (i > 0 && !(thetas[i] > thetas[i - 1])) {
      throw Error(Errc::invalid_argument, "theta grid must be increasing");
    }
  }
}

void check_grid(std::span<const Rational> thetas) {
  for (std::size_t i = 1; i < thetas.size(); ++i) {
    if (!(thetas[i] > thetas[i - 1])) {
      throw Error(Errc::invalid_argument, "theta grid must be increasing");
    }
  }
}

// Shared driver. `exact_at(j)` re-evolves from the start polynomial to
// thetas[j] and returns the roots plus the float polynomial; `advance`
// moves a float polynomial forward by a theta increment.
template <class P, class ExactAt, class Advance, class Roots>
EvolutionTrace operator_trace(std::span<const double> thetas, int every,
                              ExactAt exact_at, Advance advance, Roots roots) {
  if (every < 1) {
    throw Error(Errc::invalid_argument, "recompute period must be >= 1");
  }
  EvolutionTrace trace;
  trace.method = TraceMethod::operator_path;
  P cur;
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    PointConfig cfg;
    if (j % static_cast<std::size_t>(every) == 0) {
      cfg = exact_at(j, cur);
    } else {
      cur = advance(cur, thetas[j] - thetas[j - 1]);
      cfg = roots(cur);
    }
    trace.thetas.push_back(thetas[j]);
    trace.configs.push_back(std::move(cfg));
  }
  return trace;
}

std::vector<double> to_doubles(std::span<const Rational> thetas) {
  std::vector<double> out;
  out.reserve(thetas.size());
  for (const auto& t : thetas) out.push_back(to_double(t));
  return out;
}

UniPoly<double> slice(const TriPoly<double>& p, Specialization spec) {
  return spec == Specialization::gsvd ? substitute_gsvd(p)
                                      : substitute_singular(p);
}

UniPoly<Rational> slice(const TriPoly<Rational>& p, Specialization spec) {
  return spec == Specialization::gsvd ? substitute_gsvd(p)
                                      : substitute_singular(p);
}

}  // namespace

std::vector<double> jacobi_drift(std::span<const double> roots, int s, int t) {
  detail::require_distinct(roots);
  std::vector<double> v(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double li = roots[i];
    double acc = -s * (li - 1.0) - t * li;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j == i) continue;
      const double lj = roots[j];
      acc += (li * (1.0 - lj) + lj * (1.0 - li)) / (li - lj);
    }
    v[i] = acc;
  }
  return v;
}

std::vector<double> gsvd_drift(const BiPoly<double>& h,
                               std::span<const double> roots,
                               const ShapeParams& shape) {
  shape.validate();
  detail::require_distinct(roots);
  const BiPoly<double> h1 = derivative(h, var_x);
  const UniPoly<double> h1u = slice_at_zero_x(h1);
  const UniPoly<double> h2u = slice_at_zero_x(derivative(h, var_y));
  const UniPoly<double> h12u =
      slice_at_zero_x(derivative(h1, var_y));
  const double a = shape.s - shape.k + 1;
  const double b = shape.t - shape.k + 1;
  std::vector<double> v(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double w = roots[i];
    const double d1 = eval(h1u, {w});
    const double d2 = eval(h2u, {w});
    const double d12 = eval(h12u, {w});
    const double scale =
        magnitude_bound(h2u, std::max(1.0, std::abs(w)));
    if (!(std::abs(d2) > kDegenerateH2 * scale)) {
      throw Error(Errc::degenerate,
                  "h_2 vanishes at a root: stationary-w degeneracy");
    }
    v[i] = ((-a * (w - 1.0) - b * w) * d1 - w * (w - 1.0) * d12) / d2;
  }
  return v;
}

std::vector<double> drift_velocity(const DriftModel& model, double theta,
                                   std::span<const double> roots) {
  return std::visit(
      [&](const auto& m) -> std::vector<double> {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, HermiteModel>) {
          return hermite_drift(roots);
        } else if constexpr (std::is_same_v<M, LaguerreModel>) {
          if (m.n < m.m) {
            throw Error(Errc::invalid_argument, "laguerre model needs n >= m");
          }
          if (static_cast<int>(roots.size()) != m.m) {
            throw Error(Errc::shape, "laguerre model: root count != m");
          }
          return laguerre_drift(roots, m.n);
        } else {
          const TriPoly<double> p =
              theta == 0.0 ? m.p : gsvd_evolve(m.p, theta, m.shape);
          return gsvd_drift(substitute_xw(p), roots, m.shape);
        }
      },
      model);
}

EvolutionTrace evolve_roots_ode(const DriftModel& model,
                                const PointConfig& start, double theta0,
                                double theta1, int steps) {
  if (steps < 1) throw Error(Errc::invalid_argument, "steps must be >= 1");
  if (!std::isfinite(theta0) || !std::isfinite(theta1) || !(theta1 > theta0)) {
    throw Error(Errc::invalid_argument, "need finite theta0 < theta1");
  }
  if (start.empty()) throw Error(Errc::invalid_argument, "empty start config");
  std::vector<double> y = start.values;
  std::sort(y.begin(), y.end());
  if (!(min_gap(y) >= kCollisionGap) && y.size() > 1) {
    throw Error(Errc::degenerate,
                "repeated starting roots: use the operator path instead");
  }
  // Theta is passed to the model relative to theta0 (Gsvd holds the
  // polynomial at theta0).
  auto f = [&](double th, const std::vector<double>& state) {
    return drift_velocity(model, th - theta0, state);
  };

  EvolutionTrace trace;
  trace.method = TraceMethod::ode;
  trace.thetas.push_back(theta0);
  trace.configs.push_back(PointConfig::from_values(y));
  const double h = (theta1 - theta0) / steps;
  for (int step = 0; step < steps; ++step) {
    const double th = theta0 + step * h;
    std::vector<double> next;
    try {
      const auto k1 = f(th, y);
      const auto k2 = f(th + h / 2, rk4_combine(y, k1, h / 2));
      const auto k3 = f(th + h / 2, rk4_combine(y, k2, h / 2));
      const auto k4 = f(th + h, rk4_combine(y, k3, h));
      next.resize(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) {
        next[i] = y[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      }
    } catch (const Error& e) {
      if (e.code() != Errc::degenerate) throw;
      trace.abort_reason = e.what();
      return trace;
    }
    const double th_next = step + 1 == steps ? theta1 : th + h;
    bool finite = true;
    for (double v : next) finite = finite && std::isfinite(v);
    if (!finite) {
      trace.abort_reason = "non-finite state at theta = " + format_double(th_next);
      return trace;
    }
    // Ordering must survive a step; a swap is a collision in disguise.
    if (!std::is_sorted(next.begin(), next.end()) ||
        (next.size() > 1 && min_gap(next) < kCollisionGap)) {
      trace.abort_reason = collision_message(th_next);
      return trace;
    }
    y = std::move(next);
    trace.thetas.push_back(th_next);
    trace.configs.push_back(PointConfig::from_values(y));
  }
  return trace;
}

PointConfig specialized_roots(const TriPoly<double>& p, Specialization spec) {
  return roots_or_empty(slice(p, spec));
}

PointConfig specialized_roots(const TriPoly<Rational>& p,
                              Specialization spec) {
  return roots_or_empty(slice(p, spec));
}

EvolutionTrace evolve_roots_operator(const UniPoly<Rational>& p,
                                     std::span<const Rational> thetas,
                                     OperatorPathOptions opts) {
  check_grid(thetas);
  const auto grid = to_doubles(thetas);
  return operator_trace<UniPoly<double>>(
      grid, opts.recompute_every,
      [&](std::size_t j, UniPoly<double>& cur) {
        const auto q = hermite_evolve(p, thetas[j]);
        cur = to_float(q);
        return roots_or_empty(q);
      },
      [](const UniPoly<double>& q, double dt) { return hermite_evolve(q, dt); },
      [](const UniPoly<double>& q) { return roots_or_empty(q); });
}

EvolutionTrace evolve_roots_operator(const UniPoly<double>& p,
                                     std::span<const double> thetas,
                                     OperatorPathOptions opts) {
  check_grid(thetas);
  return operator_trace<UniPoly<double>>(
      thetas, opts.recompute_every,
      [&](std::size_t j, UniPoly<double>& cur) {
        cur = hermite_evolve(p, thetas[j]);
        return roots_or_empty(cur);
      },
      [](const UniPoly<double>& q, double dt) { return hermite_evolve(q, dt); },
      [](const UniPoly<double>& q) { return roots_or_empty(q); });
}

EvolutionTrace evolve_roots_operator(const BiPoly<Rational>& p,
                                     std::span<const Rational> thetas,
                                     OperatorPathOptions opts) {
  check_grid(thetas);
  const auto grid = to_doubles(thetas);
  return operator_trace<BiPoly<double>>(
      grid, opts.recompute_every,
      [&](std::size_t j, BiPoly<double>& cur) {
        const auto q = laguerre_evolve(p, thetas[j]);
        cur = to_float(q);
        return roots_or_empty(substitute_unit_y(q));
      },
      [](const BiPoly<double>& q, double dt) { return laguerre_evolve(q, dt); },
      [](const BiPoly<double>& q) { return roots_or_empty(substitute_unit_y(q)); });
}

EvolutionTrace evolve_roots_operator(const BiPoly<double>& p,
                                     std::span<const double> thetas,
                                     OperatorPathOptions opts) {
  check_grid(thetas);
  return operator_trace<BiPoly<double>>(
      thetas, opts.recompute_every,
      [&](std::size_t j, BiPoly<double>& cur) {
        cur = laguerre_evolve(p, thetas[j]);
        return roots_or_empty(substitute_unit_y(cur));
      },
      [](const BiPoly<double>& q, double dt) { return laguerre_evolve(q, dt); },
      [](const BiPoly<double>& q) { return roots_or_empty(substitute_unit_y(q)); });
}

EvolutionTrace evolve_roots_operator(const TriPoly<Rational>& p,
                                     std::span<const Rational> thetas,
                                     const ShapeParams& shape,
                                     Specialization spec,
                                     OperatorPathOptions opts) {
  check_grid(thetas);
  shape.validate();
  const auto grid = to_doubles(thetas);
  return operator_trace<TriPoly<double>>(
      grid, opts.recompute_every,
      [&](std::size_t j, TriPoly<double>& cur) {
        const auto q = gsvd_evolve(p, thetas[j], shape);
        cur = to_float(q);
        return roots_or_empty(slice(q, spec));
      },
      [&](const TriPoly<double>& q, double dt) {
        return gsvd_evolve(q, dt, shape);
      },
      [&](const TriPoly<double>& q) { return roots_or_empty(slice(q, spec)); });
}

EvolutionTrace evolve_roots_operator(const TriPoly<double>& p,
                                     std::span<const double> thetas,
                                     const ShapeParams& shape,
                                     Specialization spec,
                                     OperatorPathOptions opts) {
  check_grid(thetas);
  shape.validate();
  return operator_trace<TriPoly<double>>(
      thetas, opts.recompute_every,
      [&](std::size_t j, TriPoly<double>& cur) {
        cur = gsvd_evolve(p, thetas[j], shape);
        return roots_or_empty(slice(cur, spec));
      },
      [&](const TriPoly<double>& q, double dt) {
        return gsvd_evolve(q, dt, shape);
      },
      [&](const TriPoly<double>& q) { return roots_or_empty(slice(q, spec)); });
}

}  // namespace ffgsv
