// SPDX-License-Identifier: Apache-2.0
#include "ffgsv/mcharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <random>
#include <thread>

#include "ffgsv/ffconv.hpp"

namespace ffgsv {

void McConfig::validate() const {
  if (trials < 1) throw Error(Errc::invalid_argument, "trials must be >= 1");
  if (steps < 0) throw Error(Errc::invalid_argument, "steps must be >= 0");
  if (!(sigma2 >= 0) || !std::isfinite(sigma2)) {
    throw Error(Errc::invalid_argument, "sigma2 must be finite and >= 0");
  }
  if (beta != 1 && beta != 2) {
    throw Error(Errc::invalid_argument, "beta must be 1 or 2");
  }
  if (threads < 0) throw Error(Errc::invalid_argument, "threads must be >= 0");
  if (trials > 0xffffffffL || steps > 0x7fffffff) {
    throw Error(Errc::invalid_argument, "trial or step count too large");
  }
}

namespace {

double draw(EntryDist dist, Stream& rng, std::normal_distribution<double>& nd) {
  if (dist == EntryDist::gaussian) return nd(rng);
  return (rng() & 1u) ? 1.0 : -1.0;
}

}  // namespace

Matrix<double> sample_real(std::size_t rows, std::size_t cols, EntryDist dist,
                           Stream& rng) {
  std::normal_distribution<double> nd;
  Matrix<double> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = draw(dist, rng, nd);
  }
  return m;
}

Matrix<Complex> sample_complex(std::size_t rows, std::size_t cols,
                               EntryDist dist, Stream& rng) {
  std::normal_distribution<double> nd;
  const double h = std::sqrt(0.5);
  Matrix<Complex> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double re = draw(dist, rng, nd);
      const double im = draw(dist, rng, nd);
      m(i, j) = Complex(h * re, h * im);
    }
  }
  return m;
}

void VectorStats::add(std::span<const double> x) {
  if (x.size() != mean_.size()) {
    throw Error(Errc::shape, "sample dimension mismatch");
  }
  ++n_;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - mean_[i];
    mean_[i] += d / static_cast<double>(n_);
    m2_[i] += d * (x[i] - mean_[i]);
  }
}

void VectorStats::merge(const VectorStats& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  if (o.dim() != dim()) throw Error(Errc::shape, "stats dimension mismatch");
  const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
  const double n = na + nb;
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    const double d = o.mean_[i] - mean_[i];
    mean_[i] += d * nb / n;
    m2_[i] += o.m2_[i] + d * d * na * nb / n;
  }
  n_ += o.n_;
}

double VectorStats::variance(std::size_t i) const {
  if (n_ < 2) return 0.0;
  return m2_.at(i) / static_cast<double>(n_ - 1);
}

double VectorStats::se(std::size_t i) const {
  if (n_ < 1) return 0.0;
  return std::sqrt(variance(i) / static_cast<double>(n_));
}

double ExpectationReport::max_abs_z() const {
  double z = 0;
  for (const auto& c : coeffs) z = std::max(z, std::abs(c.z));
  return z;
}

std::array<double, 4> gsv_moments(std::span<const double> squared) {
  std::array<double, 4> m{};
  if (squared.empty()) return m;
  for (double w : squared) {
    const double c = std::sqrt(std::max(w, 0.0));
    double p = 1;
    for (double& v : m) {
      p *= c;
      v += p;
    }
  }
  for (double& v : m) v /= static_cast<double>(squared.size());
  return m;
}

namespace {

constexpr long kBlockTrials = 32;

/// Splits trials into fixed blocks, runs them on a pool and merges the
/// per-block states in block order.
template <class State, class Make, class Body>
State run_blocked(long trials, int threads, Make make, Body body) {
  const long nblocks = (trials + kBlockTrials - 1) / kBlockTrials;
  std::vector<std::optional<State>> blocks(static_cast<std::size_t>(nblocks));
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      const long b = next.fetch_add(1);
      if (b >= nblocks) return;
      try {
        State s = make();
        const long end = std::min(trials, (b + 1) * kBlockTrials);
        for (long trial = b * kBlockTrials; trial < end; ++trial) {
          body(trial, s);
        }
        blocks[static_cast<std::size_t>(b)] = std::move(s);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        next.store(nblocks);
      }
    }
  };
  long n = threads > 0 ? threads
                       : std::max(1u, std::thread::hardware_concurrency());
  n = std::clamp(n, 1L, nblocks);
  {
    std::vector<std::jthread> pool;
    for (long i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);
  State total = make();
  for (auto& b : blocks) total.merge(*b);
  return total;
}

template <class T>
Matrix<T> convert(const Matrix<Rational>& m) {
  Matrix<T> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = T(to_double(m(i, j)));
  }
  return out;
}

template <class T>
Matrix<T> sample(std::size_t rows, std::size_t cols, EntryDist dist,
                 Stream& rng) {
  if constexpr (is_complex_v<T>) {
    return sample_complex(rows, cols, dist, rng);
  } else {
    return sample_real(rows, cols, dist, rng);
  }
}

using Exp3 = std::array<int, 3>;

std::vector<Exp3> grid(const std::array<int, 3>& bounds) {
  std::vector<Exp3> out;
  for (int i = 0; i <= bounds[0]; ++i) {
    for (int j = 0; j <= bounds[1]; ++j) {
      for (int l = 0; l <= bounds[2]; ++l) out.push_back({i, j, l});
    }
  }
  return out;
}

template <class T, std::size_t N>
void extract(const Poly<T, N>& p, const std::vector<Exp3>& g,
             std::vector<double>& out) {
  out.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    typename Poly<T, N>::Exponents e{};
    for (std::size_t v = 0; v < N; ++v) e[v] = g[i][v];
    out[i] = to_double(p.coeff(e));
  }
}

struct StatsState {
  VectorStats stats;
  void merge(const StatsState& o) { stats.merge(o.stats); }
};

/// Shared Monte Carlo loop: sample_poly(trial) returns the coefficient
/// vector of one draw on the grid.
template <class F>
ExpectationReport check(Theorem theorem, const std::vector<Exp3>& g,
                        const std::vector<double>& predicted,
                        const McConfig& mc, F sample_coeffs) {
  mc.validate();
  StatsState total = run_blocked<StatsState>(
      mc.trials, mc.threads,
      [&] { return StatsState{VectorStats(g.size())}; },
      [&](long trial, StatsState& s) {
        std::vector<double> c;
        sample_coeffs(trial, c);
        s.stats.add(c);
      });
  ExpectationReport rep;
  rep.theorem = theorem;
  rep.trials = total.stats.count();
  double scale = 0;
  for (double v : predicted) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < g.size(); ++i) {
    CoefficientCheck cc;
    cc.exponent = g[i];
    cc.predicted = predicted[i];
    cc.mean = total.stats.mean(i);
    cc.se = total.stats.se(i);
    const double floor = 1e-12 * (scale > 0 ? scale : 1.0);
    cc.z = (cc.mean - cc.predicted) / std::max(cc.se, floor);
    rep.coeffs.push_back(cc);
  }
  return rep;
}

Stream trial_stream(const McConfig& mc, long trial) {
  return Stream(mc.master_seed, static_cast<std::uint32_t>(trial), 0, 0);
}

template <class T>
ExpectationReport hermite_impl(const Matrix<Rational>& a,
                               const Rational& theta, const McConfig& mc) {
  const std::size_t n = a.rows();
  const auto g = grid({static_cast<int>(n), 0, 0});
  std::vector<double> predicted;
  extract(hermite_evolve(charpoly(a), theta), g, predicted);
  const Matrix<T> base = convert<T>(a);
  const double scale = std::sqrt(to_double(theta));
  return check(Theorem::hermite, g, predicted, mc,
               [&](long trial, std::vector<double>& out) {
                 Stream rng = trial_stream(mc, trial);
                 const Matrix<T> x = sample<T>(n, n, mc.dist, rng);
                 const Matrix<T> m = base + T(scale) * (x + x.adjoint());
                 extract(charpoly(m), g, out);
               });
}

template <class T>
ExpectationReport laguerre_impl(const Matrix<Rational>& a,
                                const Rational& theta, const McConfig& mc) {
  const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
  const auto g = grid({m, n, 0});
  std::vector<double> predicted;
  extract(laguerre_evolve(singular_charpoly(a), theta), g, predicted);
  const Matrix<T> base = convert<T>(a);
  const double scale = std::sqrt(to_double(theta));
  return check(Theorem::laguerre, g, predicted, mc,
               [&](long trial, std::vector<double>& out) {
                 Stream rng = trial_stream(mc, trial);
                 const Matrix<T> c =
                     base + T(scale) * sample<T>(a.rows(), a.cols(), mc.dist,
                                                 rng);
                 extract(singular_charpoly(c), g, out);
               });
}

template <class T>
ExpectationReport gsvd_impl(const MatrixPair<Rational>& pair,
                            const Rational& theta, const McConfig& mc) {
  const ShapeParams shape = pair.shape();
  const auto g = grid({shape.k, shape.k, shape.k});
  std::vector<double> predicted;
  extract(gsvd_evolve(tri_charpoly(pair), theta, shape), g, predicted);
  const MatrixPair<T> base{convert<T>(pair.a), convert<T>(pair.b)};
  const double scale = std::sqrt(to_double(theta));
  const auto k = static_cast<std::size_t>(shape.k);
  return check(
      Theorem::gsvd, g, predicted, mc,
      [&](long trial, std::vector<double>& out) {
        Stream rng = trial_stream(mc, trial);
        MatrixPair<T> p = base;
        p.a = p.a + T(scale) * sample<T>(pair.a.rows(), k, mc.dist, rng);
        p.b = p.b + T(scale) * sample<T>(pair.b.rows(), k, mc.dist, rng);
        extract(tri_charpoly(p), g, out);
      });
}

void require_nonnegative(const Rational& theta) {
  if (sgn(theta) < 0) throw Error(Errc::invalid_argument, "theta must be >= 0");
}

}  // namespace

ExpectationReport verify_hermite(const Matrix<Rational>& a,
                                 const Rational& theta, const McConfig& mc) {
  require_nonnegative(theta);
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(Errc::shape, "hermite base must be square and non-empty");
  }
  if (!(a == a.adjoint())) {
    throw Error(Errc::invalid_argument, "hermite base must be symmetric");
  }
  return mc.beta == 1 ? hermite_impl<double>(a, theta, mc)
                      : hermite_impl<Complex>(a, theta, mc);
}

ExpectationReport verify_laguerre(const Matrix<Rational>& a,
                                  const Rational& theta, const McConfig& mc) {
  require_nonnegative(theta);
  if (a.rows() == 0 || a.rows() > a.cols()) {
    throw Error(Errc::shape, "laguerre base must be m x n with 1 <= m <= n");
  }
  return mc.beta == 1 ? laguerre_impl<double>(a, theta, mc)
                      : laguerre_impl<Complex>(a, theta, mc);
}

ExpectationReport verify_gsvd(const MatrixPair<Rational>& pair,
                              const Rational& theta, const McConfig& mc) {
  require_nonnegative(theta);
  pair.validate();
  return mc.beta == 1 ? gsvd_impl<double>(pair, theta, mc)
                      : gsvd_impl<Complex>(pair, theta, mc);
}

ExpectationReport verify_expectation(Theorem theorem, const ShapeParams& shape,
                                     const Rational& theta,
                                     const McConfig& mc) {
  shape.validate();
  const auto k = static_cast<std::size_t>(shape.k);
  switch (theorem) {
    case Theorem::hermite:
      return verify_hermite(Matrix<Rational>(k, k), theta, mc);
    case Theorem::laguerre:
      if (shape.s < shape.k) throw Error(Errc::shape, "laguerre needs k <= s");
      return verify_laguerre(
          Matrix<Rational>(k, static_cast<std::size_t>(shape.s)), theta, mc);
    case Theorem::gsvd:
      return verify_gsvd(
          {Matrix<Rational>(static_cast<std::size_t>(shape.s), k),
           Matrix<Rational>(static_cast<std::size_t>(shape.t), k)},
          theta, mc);
  }
  throw Error(Errc::internal, "unknown theorem");
}

namespace {

struct ProcState {
  struct Step {
    VectorStats gsv, coeff, moments;
  };
  std::vector<Step> steps;
  std::vector<std::vector<double>> samples;
  long dropped = 0;

  void merge(const ProcState& o) {
    for (std::size_t i = 0; i < steps.size(); ++i) {
      steps[i].gsv.merge(o.steps[i].gsv);
      steps[i].coeff.merge(o.steps[i].coeff);
      steps[i].moments.merge(o.steps[i].moments);
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
      samples[i].insert(samples[i].end(), o.samples[i].begin(),
                        o.samples[i].end());
    }
    dropped += o.dropped;
  }
};

struct AllState {
  std::vector<ProcState> procs;
  void merge(const AllState& o) {
    for (std::size_t p = 0; p < procs.size(); ++p) procs[p].merge(o.procs[p]);
  }
};

template <class T>
MatrixPair<T> lift(const MatrixPair<double>& p) {
  if constexpr (is_complex_v<T>) {
    auto conv = [](const Matrix<double>& m) {
      Matrix<Complex> out(m.rows(), m.cols());
      for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
      }
      return out;
    };
    return {conv(p.a), conv(p.b)};
  } else {
    return p;
  }
}

template <class T>
std::vector<ProcessAggregate> simulate(std::span<const MatrixPair<double>> starts,
                                       const McConfig& mc,
                                       std::span<const int> sample_steps) {
  const ShapeParams shape = starts.front().shape();
  const auto k = static_cast<std::size_t>(shape.k);
  const auto s = static_cast<std::size_t>(shape.s);
  const auto t = static_cast<std::size_t>(shape.t);
  const auto nsteps = static_cast<std::size_t>(mc.steps) + 1;
  const double sigma = std::sqrt(mc.sigma2);
  std::vector<MatrixPair<T>> base;
  for (const auto& p : starts) base.push_back(lift<T>(p));

  auto make = [&] {
    AllState st;
    for (std::size_t p = 0; p < starts.size(); ++p) {
      ProcState ps;
      ps.steps.assign(nsteps, {VectorStats(k), VectorStats(k + 1),
                               VectorStats(4)});
      ps.samples.resize(sample_steps.size());
      st.procs.push_back(std::move(ps));
    }
    return st;
  };

  auto record = [&](ProcState& ps, const MatrixPair<T>& pair, int step) {
    const GsvResult r = gsv_squares(pair);
    if (r.deficiency > 0 || r.values.size() != k) {
      ++ps.dropped;
      return;
    }
    auto& st = ps.steps[static_cast<std::size_t>(step)];
    st.gsv.add(r.values.values);
    const UniPoly<double> g = gsvd_charpoly(pair);
    std::vector<double> c(k + 1);
    for (std::size_t i = 0; i <= k; ++i) c[i] = g.coeff({static_cast<int>(i)});
    st.coeff.add(c);
    const auto mom = gsv_moments(r.values.values);
    st.moments.add(mom);
    for (std::size_t i = 0; i < sample_steps.size(); ++i) {
      if (sample_steps[i] == step) {
        auto& out = ps.samples[i];
        out.insert(out.end(), r.values.values.begin(), r.values.values.end());
      }
    }
  };

  AllState total = run_blocked<AllState>(
      mc.trials, mc.threads, make, [&](long trial, AllState& st) {
        std::vector<MatrixPair<T>> cur = base;
        for (std::size_t p = 0; p < cur.size(); ++p) {
          record(st.procs[p], cur[p], 0);
        }
        for (int step = 1; step <= mc.steps; ++step) {
          for (std::size_t p = 0; p < cur.size(); ++p) {
            const auto lane = mc.shared_increments
                                  ? 0u
                                  : static_cast<std::uint32_t>(p + 1);
            Stream rng(mc.master_seed, static_cast<std::uint32_t>(trial),
                       static_cast<std::uint32_t>(step), lane);
            const Matrix<T> z = sample<T>(s + t, k, mc.dist, rng);
            for (std::size_t j = 0; j < k; ++j) {
              for (std::size_t i = 0; i < s; ++i) {
                cur[p].a(i, j) += sigma * z(i, j);
              }
              for (std::size_t i = 0; i < t; ++i) {
                cur[p].b(i, j) += sigma * z(s + i, j);
              }
            }
            record(st.procs[p], cur[p], step);
          }
        }
      });

  std::vector<ProcessAggregate> out;
  for (auto& ps : total.procs) {
    ProcessAggregate agg;
    agg.dropped = ps.dropped;
    agg.samples = std::move(ps.samples);
    for (const auto& st : ps.steps) {
      StepStats ss;
      ss.count = st.gsv.count();
      for (std::size_t i = 0; i < k; ++i) {
        ss.gsv_mean.push_back(st.gsv.mean(i));
        ss.gsv_se.push_back(st.gsv.se(i));
      }
      for (std::size_t i = 0; i <= k; ++i) {
        ss.coeff_mean.push_back(st.coeff.mean(i));
        ss.coeff_se.push_back(st.coeff.se(i));
      }
      for (std::size_t i = 0; i < 4; ++i) {
        ss.moment_mean[i] = st.moments.mean(i);
        ss.moment_se[i] = st.moments.se(i);
      }
      agg.steps.push_back(std::move(ss));
    }
    out.push_back(std::move(agg));
  }
  return out;
}

}  // namespace

std::vector<ProcessAggregate> run_processes(
    std::span<const MatrixPair<double>> starts, const McConfig& mc,
    std::span<const int> sample_steps) {
  mc.validate();
  if (starts.empty()) throw Error(Errc::invalid_argument, "no processes");
  for (const auto& p : starts) {
    p.validate();
    if (!(p.shape() == starts.front().shape())) {
      throw Error(Errc::shape, "all processes must share one shape");
    }
  }
  for (int st : sample_steps) {
    if (st < 0 || st > mc.steps) {
      throw Error(Errc::invalid_argument, "sample step outside [0, steps]");
    }
  }
  return mc.beta == 1 ? simulate<double>(starts, mc, sample_steps)
                      : simulate<Complex>(starts, mc, sample_steps);
}

}  // namespace ffgsv
