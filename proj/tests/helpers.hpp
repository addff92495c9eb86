#pragma once

#include <random>
#include <vector>

#include "fourlin/grid.hpp"

namespace testing {

inline fourlin::GridField random_field(const fourlin::GridSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(spec.points());
  for (auto& x : v) x = g(rng);
  return fourlin::GridField(spec, std::move(v));
}

inline std::vector<fourlin::cplx> random_complex(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<fourlin::cplx> v(n);
  for (auto& z : v) z = {g(rng), g(rng)};
  return v;
}

inline double max_abs_diff(std::span<const fourlin::cplx> a, std::span<const fourlin::cplx> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testing
