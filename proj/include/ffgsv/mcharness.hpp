// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ffgsv/matrix.hpp"
#include "ffgsv/random.hpp"
#include "ffgsv/specpoly.hpp"

namespace ffgsv {

enum class EntryDist { gaussian, rademacher };

struct McConfig {
  long trials = 500;
  int steps = 100;
  double sigma2 = 1e-8;
  int beta = 1;  // 1 real, 2 complex
  EntryDist dist = EntryDist::gaussian;
  std::uint64_t master_seed = 20240601;
  bool shared_increments = true;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
};

/// Unit-variance entries. Complex entries have E|z|^2 = 1, split evenly
/// between the real and imaginary parts.
Matrix<double> sample_real(std::size_t rows, std::size_t cols, EntryDist dist,
                           Stream& rng);
Matrix<Complex> sample_complex(std::size_t rows, std::size_t cols,
                               EntryDist dist, Stream& rng);

/// Running mean and variance per coordinate (Welford), mergeable (Chan).
class VectorStats {
 public:
  explicit VectorStats(std::size_t dim = 0) : mean_(dim, 0.0), m2_(dim, 0.0) {}

  void add(std::span<const double> x);
  void merge(const VectorStats& other);

  long count() const noexcept { return n_; }
  std::size_t dim() const noexcept { return mean_.size(); }
  double mean(std::size_t i) const { return mean_.at(i); }
  /// Unbiased sample variance; 0 with fewer than two samples.
  double variance(std::size_t i) const;
  /// Standard error of the mean.
  double se(std::size_t i) const;

 private:
  long n_ = 0;
  std::vector<double> mean_, m2_;
};

enum class Theorem { hermite, laguerre, gsvd };

struct CoefficientCheck {
  std::array<int, 3> exponent{};  // unused trailing entries are 0
  double predicted = 0;
  double mean = 0;
  double se = 0;
  double z = 0;
};

struct ExpectationReport {
  Theorem theorem = Theorem::hermite;
  long trials = 0;
  std::vector<CoefficientCheck> coeffs;

  double max_abs_z() const;
};

/// Monte Carlo check of an expected-characteristic-polynomial identity,
/// coefficient by coefficient. z uses max(se, 1e-12 max|predicted|) so
/// deterministic coefficients do not divide by zero.
///   hermite:  E det(xI - A - sqrt(theta)(X + X^*)) = exp(-theta d^2) p_A,
///             A symmetric n x n.
///   laguerre: E y^(n-m) det(xyI - C C^*), C = A + sqrt(theta) X, equals
///             exp(-theta dx dy) p_A, A m x n with m <= n.
///   gsvd:     E det(xI + y W1 + z W2) of (A + sqrt(theta) X,
///             B + sqrt(theta) Y) equals gsvd_evolve(p_(A,B), theta).
/// X and Y are real (beta 1) or complex (beta 2); mc.steps and
/// mc.sigma2 are ignored.
ExpectationReport verify_hermite(const Matrix<Rational>& a,
                                 const Rational& theta, const McConfig& mc);
ExpectationReport verify_laguerre(const Matrix<Rational>& a,
                                  const Rational& theta, const McConfig& mc);
ExpectationReport verify_gsvd(const MatrixPair<Rational>& pair,
                              const Rational& theta, const McConfig& mc);

/// Zero base: hermite uses n = shape.k, laguerre (m, n) = (k, s), gsvd the
/// full shape.
ExpectationReport verify_expectation(Theorem theorem, const ShapeParams& shape,
                                     const Rational& theta, const McConfig& mc);

/// Per-step summary of one process over all trials.
struct StepStats {
  long count = 0;                        // trials that contributed
  std::vector<double> gsv_mean, gsv_se;  // sorted squared values
  std::vector<double> coeff_mean, coeff_se;  // gsvd_charpoly, ascending
  std::array<double, 4> moment_mean{}, moment_se{};  // (1/k) sum c^r
};

struct ProcessAggregate {
  std::vector<StepStats> steps;  // index 0 is the starting pair
  /// Per-trial squared values at each requested sample step, trial-major
  /// with k values per trial. Dropped trials are omitted.
  std::vector<std::vector<double>> samples;
  long dropped = 0;  // (trial, step) cells with a rank-deficient pair
};

/// Runs M_i = M_(i-1) + sigma Z_i for every start, with Z_i of the stacked
/// (s + t) x k shape. With shared increments all processes see the same
/// Z_i in a trial. Block-parallel with a fixed reduction order, so the
/// result does not depend on mc.threads.
std::vector<ProcessAggregate> run_processes(
    std::span<const MatrixPair<double>> starts, const McConfig& mc,
    std::span<const int> sample_steps = {});

/// Moments (1/k) sum c_j^r, r = 1..4, with c_j = sqrt(squared value).
std::array<double, 4> gsv_moments(std::span<const double> squared);

}  // namespace ffgsv
