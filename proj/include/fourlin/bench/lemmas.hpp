#pragma once

// Numerical checks of the Fourier-analytic inequalities behind the error
// bounds. Each check evaluates both sides on a concrete field and records
// the tightest case; violations carry a witness.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fourlin/grid.hpp"

namespace fourlin::bench {

struct CheckReport {
  std::string name;
  std::size_t cases = 0;
  std::size_t violations = 0;
  // min over cases of (rhs - lhs); negative means violated.
  double worst_slack = 0.0;
  // max over cases of lhs / rhs (0 when every rhs is 0 and lhs is 0).
  double worst_ratio = 0.0;
  std::string witness;  // first violating case, else the tightest one
  bool passed() const noexcept { return violations == 0; }

  // Folds another report into this one.
  void merge(const CheckReport& other);
};

// One JSON object per line: name, passed, cases, violations, slack, ratio, witness.
std::string to_json_line(const CheckReport& r);

inline constexpr double kCheckTolerance = 1e-10;

// |coeff(m)| <= ||u||_{H^s} / ((2 pi)^s |m|_inf^s) for every stored m != 0.
// With B > 0 the bound uses B and ||u||_{H^s} <= B is checked as well.
CheckReport check_coefficient_decay(const SpectrumField& u, int s, double B = 0.0);

// sum_m (1 + |m|_inf^{2s}) |coeff(m)|^2 <= ||u||_{H^s}^2.
CheckReport check_weighted_sum(const SpectrumField& u, int s);

// sum_{|m|_inf > K} |coeff(m)|^2 <= ||u||_{H^s}^2 / K^{2s}, K >= 1.
CheckReport check_tail_sum(const SpectrumField& u, int s, std::int64_t K);

// u is given exactly by its spectrum on a fine grid. Samples u on the
// coarse grid (which must divide the fine one, with fine Nyquist above
// N_coarse) and compares the coarse DFT at m with the true coefficient:
//   |DFT_coarse(m) - coeff(m)| <= |sum_{l != 0} coeff(m + l N_coarse)|.
// Requires |m|_inf < N_coarse.
CheckReport check_aliasing(const SpectrumField& u, std::int64_t N_coarse, const Mode& m);
// Every m with |m|_inf < N_coarse that the fine grid stores.
CheckReport check_aliasing_all(const SpectrumField& u, std::int64_t N_coarse);

struct LatticeSumReport {
  int d = 1;
  int s = 1;
  std::int64_t cutoff = 0;
  double partial = 0.0;  // sum over 1 <= |k|_inf <= cutoff
  double lower = 0.0;    // rigorous enclosure of the full sum
  double upper = 0.0;
  double bound = 0.0;    // pi^2 3^(d-2)
  bool holds() const noexcept { return lower <= bound; }  // not refuted
  bool certain() const noexcept { return upper <= bound; }
  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

// sum_{k in Z^d \ 0} |k|_inf^{-2s} with exact shell counts
// (2j+1)^d - (2j-1)^d and an integral-test remainder. Requires 2s > d,
// else non_convergence. cutoff = 0 picks one whose remainder bound is below 1e-6.
LatticeSumReport lattice_tail_sum(int s, int d, std::int64_t cutoff = 0);

// The inequality against the lattice bound as a check.
CheckReport check_lattice_sum(const LatticeSumReport& r);

struct CounterexampleReport {
  std::int64_t K = 0;
  std::size_t n = 0;
  std::int64_t N = 0;
  double estimator_risk = 0.0;
  double reference_risk = 0.0;  // T* = identity on every mode
  double excess_risk = 0.0;
  std::size_t support_size = 0;
};

// mu uniform on (psi_m, psi_m), 2^K < |m|_inf < 2^{K+1}, on the grid
// N = 2^{K+2}; the estimator with truncation K is fitted on n draws and
// scored exactly on the support. K <= 3 keeps the grid small.
CounterexampleReport high_mode_counterexample(std::int64_t K, std::size_t n, std::uint64_t seed, int d = 1);

struct LemmaSuiteConfig {
  std::size_t draws = 100;       // GRF draws per dimension
  std::vector<int> dims{1, 2};
  double gamma = 2.0;
  int s = 1;
  std::uint64_t seed = 7;
  std::int64_t N_coarse = 8;     // aliasing checks sample onto this grid
  std::vector<std::pair<int, int>> lattice_cases{{1, 1}, {2, 2}};  // (d, s)
  std::int64_t counterexample_K = 2;
  std::vector<std::size_t> counterexample_n{1, 10};
  // Sabotage: spectra lose the 1/N^d factor, which Parseval must catch.
  bool broken_dft_normalization = false;
};

// Monte Carlo and analytic edge cases for every check above, plus the
// discrete Parseval identity and the grid character sum. One report per
// check family.
std::vector<CheckReport> run_lemma_suite(const LemmaSuiteConfig& cfg);

}  // namespace fourlin::bench
