#pragma once

// Error sweeps over sample size, truncation level and training resolution.
// Data follow one recipe: v ~ GRF(gamma, sigma), lambda* ~ Uniform(-bound, bound)
// mirrored for real output, w = T* v + GRF(3, 1) noise.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fourlin/fourier_operator.hpp"

namespace fourlin::bench {

struct ExperimentConfig {
  int d = 2;
  std::int64_t N = 64;        // train/test grid (sweep_discretization: test grid)
  std::int64_t K = 31;        // fitted truncation where fixed
  std::int64_t K_star = -1;   // generating operator band; -1 = largest below Nyquist
  double gamma = 2.0;
  double sigma = 10.0;
  double lambda_bound = 2.0;  // lambda* ~ Uniform(-bound, bound)
  double C = 2.0;
  bool noise = true;
  bool zero_mean = true;      // drop the zero mode of inputs and noise
  std::size_t n_train = 500;  // where n is fixed
  std::size_t n_test = 100;
  std::size_t n_seeds = 5;
  std::uint64_t seed = 20240601;
  bool redraw_operator = true;  // fresh T* per seed, else one T* for all seeds
  bool squared_denominator = false;
};

// Largest K with N > 2K.
constexpr std::int64_t max_resolvable_K(std::int64_t N) { return (N + 1) / 2 - 1; }

struct CurvePoint {
  double value = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation over seeds, 0 for one seed
  std::vector<double> per_seed;
};

struct ErrorCurve {
  std::string parameter_name;  // "n", "K" or "N"
  std::vector<CurvePoint> points;
  std::vector<std::pair<std::string, std::string>> meta;
};

// Header param,value,mean_rel_mse,std_rel_mse,n_seeds; 17 significant digits.
std::string to_csv(const ErrorCurve& curve);
ErrorCurve parse_csv(const std::string& text);

// Number of adjacent pairs where the mean rises.
std::size_t count_increases(const ErrorCurve& curve);
std::size_t count_increases_median(const ErrorCurve& curve);

// Generating operator for a seed according to cfg.redraw_operator.
DiagonalOperator draw_target(const ExperimentConfig& cfg, std::int64_t generation_N, std::size_t seed_index);

ErrorCurve sweep_statistical(const ExperimentConfig& cfg, std::vector<std::size_t> n_list);
// Rejects K >= N/2.
ErrorCurve sweep_truncation(const ExperimentConfig& cfg, std::vector<std::int64_t> K_list);
// Data drawn at N_test = cfg.N; training on each N of N_list restricted from
// it with K = max_resolvable_K(N); evaluation at N_test.
ErrorCurve sweep_discretization(const ExperimentConfig& cfg, std::vector<std::int64_t> N_list);

// Least-squares slope of log(mean) on log(value) over the middle third of
// the points (at least two points).
double fit_loglog_slope(const ErrorCurve& curve);

// Truncation error against K on noiseless d = 1 data whose input spectrum
// decays like |m|^-gamma, with every mode learned exactly.
ErrorCurve truncation_rate_curve(std::int64_t N, double gamma, const std::vector<std::int64_t>& K_list,
                                 std::uint64_t seed);

// Population excess risk sum_m |lambda_hat - lambda*|^2 E|a_m|^2 against n.
ErrorCurve statistical_rate_curve(const ExperimentConfig& cfg, const std::vector<std::size_t>& n_list);

}  // namespace fourlin::bench
