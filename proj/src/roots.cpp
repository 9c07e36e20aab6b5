// SPDX-License-Identifier: Apache-2.0
#include "ffgsv/roots.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace ffgsv {

namespace {

// Ascending coefficients with trailing (high-order) zeros removed.
std::vector<double> dense_coeffs(const UniPoly<double>& p) {
  std::vector<double> c(p.coeffs().begin(), p.coeffs().end());
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return c;
}

// Parlett-Reinsch balancing with power-of-two scalings.
void balance(Eigen::MatrixXd& a) {
  constexpr double radix = 2.0;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        a.row(i) *= g;
        a.col(i) *= f;
      }
    }
  }
}

double horner(const std::vector<double>& c, double x, double* deriv) {
  double v = 0.0, d = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) {
    d = d * x + v;
    v = v * x + c[i];
  }
  if (deriv != nullptr) *deriv = d;
  return v;
}

// --- exact helpers -------------------------------------------------------

using QPoly = std::vector<Rational>;  // ascending, no trailing zeros

QPoly to_qpoly(const UniPoly<Rational>& p) {
  QPoly c(p.coeffs().begin(), p.coeffs().end());
  while (!c.empty() && sgn(c.back()) == 0) c.pop_back();
  return c;
}

void strip(QPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

QPoly q_derivative(const QPoly& p) {
  QPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) {
    d.push_back(p[i] * static_cast<long>(i));
  }
  strip(d);
  return d;
}

// Returns the remainder; quotient written to *quot if non-null.
QPoly q_divmod(QPoly num, const QPoly& den, QPoly* quot) {
  if (den.empty()) throw Error(Errc::internal, "division by zero polynomial");
  QPoly q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0);
  while (num.size() >= den.size() && !num.empty()) {
    const std::size_t shift = num.size() - den.size();
    const Rational f = num.back() / den.back();
    q[shift] = f;
    for (std::size_t i = 0; i < den.size(); ++i) num[i + shift] -= f * den[i];
    num.pop_back();
    strip(num);
  }
  if (quot != nullptr) {
    strip(q);
    *quot = std::move(q);
  }
  return num;
}

QPoly q_monic(QPoly p) {
  if (p.empty()) return p;
  const Rational lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

QPoly q_gcd(QPoly a, QPoly b) {
  while (!b.empty()) {
    QPoly r = q_divmod(a, b, nullptr);
    a = std::move(b);
    b = std::move(r);
  }
  return q_monic(std::move(a));
}

int sign_at(const QPoly& p, const Rational& x) {
  Rational v(0);
  for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return sgn(v);
}

std::vector<QPoly> sturm_chain(const QPoly& p) {
  std::vector<QPoly> chain{p, q_derivative(p)};
  while (!chain.back().empty()) {
    QPoly r = q_divmod(chain[chain.size() - 2], chain.back(), nullptr);
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    chain.push_back(std::move(r));
  }
  if (chain.back().empty()) chain.pop_back();
  return chain;
}

int variations(const std::vector<QPoly>& chain, const Rational& x) {
  int count = 0, last = 0;
  for (const auto& p : chain) {
    const int s = sign_at(p, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

// The single root of p in (lo, hi], bisected on signs until both ends
// round to the same double.
double refine(const QPoly& p, Rational lo, Rational hi) {
  const int shi = sign_at(p, hi);
  if (shi == 0) return to_double(hi);
  for (int it = 0; it < 2000 && to_double(lo) != to_double(hi); ++it) {
    const Rational mid = (lo + hi) / 2;
    const int s = sign_at(p, mid);
    if (s == 0) return to_double(mid);
    (s == shi ? hi : lo) = mid;
  }
  return to_double(Rational((lo + hi) / 2));
}

void isolate(const std::vector<QPoly>& chain, const Rational& lo,
             const Rational& hi, int vlo, int vhi, const Rational& tol,
             std::vector<double>& out) {
  const int count = vlo - vhi;
  if (count <= 0) return;
  if (count == 1) {
    out.push_back(refine(chain.front(), lo, hi));
    return;
  }
  if (hi - lo < tol) {
    const double mid = to_double(Rational((lo + hi) / 2));
    for (int i = 0; i < count; ++i) out.push_back(mid);
    return;
  }
  const Rational mid = (lo + hi) / 2;
  const int vmid = variations(chain, mid);
  isolate(chain, lo, mid, vlo, vmid, tol, out);
  isolate(chain, mid, hi, vmid, vhi, tol, out);
}

// Distinct real roots of a square-free polynomial, ascending.
std::vector<double> distinct_real_roots(const QPoly& sqf, const Rational& tol) {
  std::vector<double> out;
  if (sqf.size() <= 1) return out;
  Rational bound(0);
  for (std::size_t i = 0; i + 1 < sqf.size(); ++i) {
    const Rational r = abs(sqf[i] / sqf.back());
    if (r > bound) bound = r;
  }
  bound += 1;
  const auto chain = sturm_chain(sqf);
  const Rational lo = -bound;
  isolate(chain, lo, bound, variations(chain, lo), variations(chain, bound),
          tol, out);
  return out;
}

// Real roots with multiplicity, ascending.
std::vector<std::pair<double, int>> exact_roots(const QPoly& p,
                                                const Rational& tol) {
  if (p.size() <= 1) return {};
  const QPoly g = q_gcd(p, q_derivative(p));
  QPoly sqf;
  q_divmod(p, g, &sqf);
  std::vector<std::pair<double, int>> out;
  for (double r : distinct_real_roots(sqf, tol)) out.emplace_back(r, 1);
  if (g.size() > 1) {
    for (const auto& [r, m] : exact_roots(g, tol)) {
      // Every root of g is a root of p; attach it to the nearest one.
      auto best = out.begin();
      for (auto it = out.begin(); it != out.end(); ++it) {
        if (std::abs(it->first - r) < std::abs(best->first - r)) best = it;
      }
      if (best != out.end()) best->second += m;
    }
  }
  return out;
}

}  // namespace

std::vector<Complex> all_roots(const UniPoly<double>& p) {
  std::vector<double> c = dense_coeffs(p);
  if (c.empty()) throw Error(Errc::degenerate, "zero polynomial has no roots");
  std::vector<Complex> roots;
  std::size_t zeros = 0;
  while (zeros < c.size() && c[zeros] == 0.0) ++zeros;
  for (std::size_t i = 0; i < zeros; ++i) roots.emplace_back(0.0, 0.0);
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(zeros));
  const auto n = static_cast<Eigen::Index>(c.size()) - 1;
  if (n <= 0) return roots;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    comp(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  }
  balance(comp);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) {
    throw Error(Errc::internal, "companion eigenvalue iteration failed");
  }
  for (Eigen::Index i = 0; i < n; ++i) roots.push_back(es.eigenvalues()(i));
  return roots;
}

PointConfig real_roots(const UniPoly<double>& p, double imag_tol,
                       double cluster_tol) {
  const auto roots = all_roots(p);
  const std::vector<double> c = dense_coeffs(p);
  std::vector<double> real;
  for (const auto& r : roots) {
    if (std::abs(r.imag()) <= imag_tol * std::max(1.0, std::abs(r.real()))) {
      real.push_back(r.real());
    }
  }
  std::sort(real.begin(), real.end());
  // Guarded Newton polish: a step must reduce the residual and stay within
  // half the gap to the neighbouring roots.
  std::vector<double> polished = real;
  for (std::size_t i = 0; i < real.size(); ++i) {
    double gap = INFINITY;
    if (i > 0) gap = std::min(gap, real[i] - real[i - 1]);
    if (i + 1 < real.size()) gap = std::min(gap, real[i + 1] - real[i]);
    double x = real[i];
    for (int iter = 0; iter < 3; ++iter) {
      double d = 0.0;
      const double v = horner(c, x, &d);
      if (v == 0.0 || d == 0.0) break;
      const double next = x - v / d;
      if (!std::isfinite(next) || std::abs(next - real[i]) >= 0.5 * gap) break;
      if (std::abs(horner(c, next, nullptr)) >= std::abs(v)) break;
      x = next;
    }
    polished[i] = x;
  }
  return PointConfig::from_values(std::move(polished), cluster_tol);
}

PointConfig real_roots(const UniPoly<Rational>& p, double tol) {
  const QPoly q = to_qpoly(p);
  if (q.empty()) throw Error(Errc::degenerate, "zero polynomial has no roots");
  Rational qtol(tol);
  PointConfig cfg;
  for (const auto& [r, m] : exact_roots(q, qtol)) {
    for (int i = 0; i < m; ++i) {
      cfg.values.push_back(r);
      cfg.multiplicity.push_back(m);
    }
  }
  return cfg;
}

int sturm_count(const UniPoly<Rational>& p, const Rational& a,
                const Rational& b) {
  const QPoly q = to_qpoly(p);
  if (q.size() <= 1) return 0;
  const QPoly g = q_gcd(q, q_derivative(q));
  QPoly sqf;
  q_divmod(q, g, &sqf);
  const auto chain = sturm_chain(sqf);
  return variations(chain, a) - variations(chain, b);
}

}  // namespace ffgsv
