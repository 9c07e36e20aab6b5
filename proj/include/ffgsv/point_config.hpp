// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ffgsv/scalar.hpp"

namespace ffgsv {

/// Sorted multiset of real points. multiplicity[i] is the size of the
/// cluster value i belongs to (1 for a simple point).
struct PointConfig {
  std::vector<double> values;
  std::vector<int> multiplicity;

  /// Sorts, rejects NaN, and marks values within cluster_tol (relative to
  /// max(1, |value|)) of a neighbour as one cluster.
  static PointConfig from_values(std::vector<double> v,
                                 double cluster_tol = 0.0) {
    for (double x : v) {
      if (std::isnan(x)) throw Error(Errc::invalid_argument, "NaN point");
    }
    std::sort(v.begin(), v.end());
    PointConfig cfg;
    cfg.values = std::move(v);
    cfg.multiplicity.assign(cfg.values.size(), 1);
    std::size_t start = 0;
    for (std::size_t i = 1; i <= cfg.values.size(); ++i) {
      const bool split =
          i == cfg.values.size() ||
          cfg.values[i] - cfg.values[i - 1] >
              cluster_tol * std::max(1.0, std::abs(cfg.values[i]));
      if (split) {
        for (std::size_t j = start; j < i; ++j) {
          cfg.multiplicity[j] = static_cast<int>(i - start);
        }
        start = i;
      }
    }
    return cfg;
  }

  std::size_t size() const noexcept { return values.size(); }
  bool empty() const noexcept { return values.empty(); }

  bool distinct() const {
    return std::all_of(multiplicity.begin(), multiplicity.end(),
                       [](int m) { return m == 1; });
  }
};

}  // namespace ffgsv
