#pragma once

// Small dataset builders shared across test files.

#include <cstdint>
#include <utility>
#include <vector>

#include "gvp/data.hpp"
#include "gvp/rng.hpp"

namespace testutil {

inline gvp::DataSet make_series(std::vector<double> y) {
  gvp::DataSet d;
  d.y = std::move(y);
  return d;
}

inline gvp::DataSet gaussian_series(int n, std::uint64_t seed, double mean = 0.0,
                                    double sd = 1.0) {
  gvp::Rng rng(seed);
  gvp::DataSet d;
  d.y.reserve(n);
  for (int t = 0; t < n; ++t) d.y.push_back(mean + sd * gvp::draw_normal(rng));
  return d;
}

// AR(1) series: mildly dependent data for model tests that only need a
// plausible input, not a specific generating process.
inline gvp::DataSet ar1_series(int n, std::uint64_t seed, double coef = 0.6, double sd = 1.0) {
  gvp::Rng rng(seed);
  gvp::DataSet d;
  d.y.reserve(n);
  double prev = 0.0;
  for (int t = 0; t < n + 50; ++t) {
    prev = coef * prev + sd * gvp::draw_normal(rng);
    if (t >= 50) d.y.push_back(prev);
  }
  return d;
}

}  // namespace testutil
