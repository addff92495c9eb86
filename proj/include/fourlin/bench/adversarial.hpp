#pragma once

// Finite-support distributions with exact risk, and the hard distribution
// behind the minimax lower bound for the estimator (d = 1 by default; the
// construction lives on the first axis).

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fourlin/fourier_operator.hpp"
#include "fourlin/grid.hpp"

namespace fourlin::bench {

// Finite combination sum c_m phi_m of continuous Fourier modes.
struct SparseSpectrum {
  int d = 1;
  std::map<Mode, cplx> terms;

  void add(const Mode& m, cplx c);
  double l2_norm_sq() const;
  // Frequency scale 1 matches the integer-frequency Sobolev budget of the construction.
  double sobolev_norm_sq(int s, double frequency_scale) const;
  // Values at the grid points, summed term by term; the imaginary part
  // must vanish to 1e-12.
  GridField sample(const GridSpec& spec) const;
};

// gamma psi_k with psi_0 = phi_0 and psi_k = (phi_k + phi_-k)/sqrt(2).
SparseSpectrum scaled_psi(int d, std::int64_t k, double gamma);

struct Atom {
  double weight = 0.0;
  SparseSpectrum v;
  SparseSpectrum w;
  std::string label;
};

struct FiniteSupportDistribution {
  int d = 1;
  std::size_t n = 0;
  std::int64_t N = 0;
  std::int64_t K = 0;
  int s = 1;
  double B = 1.0;
  std::int64_t M = 0;          // 2n
  std::int64_t high_mode = 0;  // K + j, j in {1, 2}
  std::vector<std::int64_t> J; // {1..M} without multiples of N
  std::map<std::int64_t, int> xi;
  std::vector<Atom> atoms;

  double total_weight() const;
  double gamma(std::int64_t k) const;  // B / (sqrt(s+1) |k|^s), gamma_0 = B / sqrt(s+1)
};

// Requires N > 1 and N^s >= sqrt(2) B. Signs xi_k = xi_-k ~ Uniform{-1, 1}.
// Every atom is checked against ||.||_{H^s} <= B (integer frequencies) to 1e-9.
FiniteSupportDistribution build_adversarial_distribution(std::size_t n, std::int64_t N, std::int64_t K, int s,
                                                         double B, std::uint64_t xi_seed, int d = 1);

using Multiplier = std::function<cplx(const Mode&)>;

// sum_atoms weight ||T v - w||^2, by Parseval on the sparse spectra.
double exact_risk(const Multiplier& T, const FiniteSupportDistribution& dist);
double exact_risk(const DiagonalOperator& T, const FiniteSupportDistribution& dist);

// lambda_0 = 0, lambda_k = xi_k on the construction modes, 0 elsewhere.
Multiplier comparator(const FiniteSupportDistribution& dist);

// Indices of n atoms drawn i.i.d. from the weights.
std::vector<std::size_t> sample_atoms(const FiniteSupportDistribution& dist, std::size_t n, std::uint64_t seed);

// Grid training set from atom indices.
Dataset grid_dataset(const FiniteSupportDistribution& dist, const std::vector<std::size_t>& idx);

struct LowerBoundReport {
  std::size_t n = 0;
  std::int64_t N = 0;
  std::int64_t K = 0;
  int s = 1;
  double B = 1.0;
  std::size_t trials = 0;
  double mean_excess = 0.0;
  double stderr_excess = 0.0;
  double min_excess = 0.0;
  double bound = 0.0;        // B^2/(3(s+1)) (1/(8n) + 1/N^{2s} + 2/(K+2)^{2s})
  double bound_swapped = 0.0;  // B^2/(3(s+1)) (1/(8n) + 2/N^{2s} + 1/(K+2)^{2s})
  bool passed() const noexcept { return mean_excess >= bound; }
};

double lower_bound_rhs(std::size_t n, std::int64_t N, std::int64_t K, int s, double B);
double lower_bound_rhs_swapped(std::size_t n, std::int64_t N, std::int64_t K, int s, double B);

// For each trial: draw xi, sample n pairs on the N-grid, fit the estimator
// (truncation K, C = 1) and take exact risk minus the comparator's risk.
LowerBoundReport verify_lower_bound(std::size_t n, std::int64_t N, std::int64_t K, int s, double B,
                                    std::size_t trials, std::uint64_t seed, int d = 1);

}  // namespace fourlin::bench
