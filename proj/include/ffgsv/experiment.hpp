// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "ffgsv/mcharness.hpp"
#include "ffgsv/point_config.hpp"
#include "ffgsv/poly.hpp"

namespace ffgsv {

/// The displayed second diagonal (10 I) and the one that reproduces the
/// stated starting values (3 I).
enum class MatrixConvention { paper_display, values_consistent };

std::string_view convention_name(MatrixConvention c);
MatrixConvention parse_convention(std::string_view name);

/// Two processes started at
///   A = delta [F1 H; F2 H],  B = epsilon [F1 K; F2 K],
/// F1 = [D1; 0] (s x k), F2 = [D2; 0] (t x k), with delta and epsilon
/// fixed by trace(A^T A) = trace(B^T B) = 1.
struct ExperimentSpec {
  ShapeParams shape{4, 5, 10};
  Matrix<Rational> d1, h, k;
  Matrix<Rational> d2_paper_display, d2_values_consistent;
  MatrixConvention convention = MatrixConvention::values_consistent;

  McConfig mc;                    // run defaults; callers may override
  std::vector<int> sample_steps;  // steps whose per-trial values are kept
                                  // (those past mc.steps are skipped)
  double horizon_max = 1e6;       // largest theta on the prediction grid
  int horizon_per_decade = 10;

  const Matrix<Rational>& d2() const;
  void validate() const;

  /// delta^2 and epsilon^2 (exact; delta itself may be irrational).
  Rational delta2() const;
  Rational epsilon2() const;

  GramPair<Rational> gram_a() const;
  GramPair<Rational> gram_b() const;
  MatrixPair<double> start_a() const;
  MatrixPair<double> start_b() const;

  /// Parses "key = value" lines. Matrix values use the matrix text format
  /// and may continue over the following lines. Unset keys keep the
  /// built-in defaults.
  static ExperimentSpec parse(std::string_view text);
  static ExperimentSpec defaults();
};

/// The built-in configuration text.
std::string_view default_experiment_config();

/// Exact value of the shortest decimal that round-trips to v.
Rational shortest_rational(double v);

struct ProcessResult {
  std::string name;
  ProcessAggregate beta1, beta2;
  std::vector<PointConfig> predicted;  // per step, roots of the slice
  std::vector<std::array<double, 4>> predicted_moments;
  std::vector<PointConfig> horizon;  // at Section6Result::horizon_thetas
  UniPoly<Rational> start_charpoly;  // exact gsvd polynomial of the start
};

struct Section6Result {
  ExperimentSpec spec;
  McConfig mc;
  Rational sigma2;  // exact step variance used for the predictions
  std::vector<double> horizon_thetas;
  PointConfig asymptote;  // roots of the Jacobi limit
  ProcessResult a, b;
  /// Starting values of pair A under each convention.
  PointConfig start_paper_display, start_values_consistent;

  const ProcessAggregate& primary(const ProcessResult& p) const {
    return mc.beta == 2 ? p.beta2 : p.beta1;
  }
};

/// Runs both processes for beta 1 and beta 2 and evolves their exact
/// polynomials along theta = i sigma2 and along a log-spaced horizon.
Section6Result section6_experiment(const ExperimentSpec& spec,
                                   const McConfig& mc);

}  // namespace ffgsv
