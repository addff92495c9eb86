#pragma once

// Constrained least squares over the truncated class: minimize
//   (1/n) sum_i sum_{|m|_inf <= K} |lambda_m a_i(m) - b_i(m)|^2   s.t. |lambda_m| <= C,
// where a_i(m), b_i(m) are the grid DFT coefficients of v_i, w_i at mode m.
// The problem separates over modes.

#include <cstdint>
#include <span>
#include <vector>

#include "fourlin/fourier_operator.hpp"
#include "fourlin/grid.hpp"

namespace fourlin {

enum class FitMethod { closed_form, projected_sgd };

// Steps are preconditioned per mode by the inverse curvature, so step_size
// is dimensionless: 1 would jump to the batch minimizer.
struct SgdOptions {
  double step_size = 0.5;
  std::size_t batch_size = 32;
  std::size_t epochs = 200;
  std::uint64_t seed = 0;
  // Stop once an epoch moves no coefficient by more than tolerance * max(1, C).
  double tolerance = 1e-10;
  // Step halves whenever an epoch raises the objective; below this it fails.
  double min_step = 1e-6;
};

struct FitConfig {
  std::int64_t K = 0;
  double C = 1.0;
  FitMethod method = FitMethod::closed_form;
  SgdOptions sgd;
};

struct FitDiagnostics {
  std::size_t modes_clipped = 0;
  std::size_t modes_degenerate = 0;
  std::size_t epochs_run = 0;
  double final_step = 0.0;
  std::vector<double> epoch_losses;  // objective after each SGD epoch
};

struct FitResult {
  DiagonalOperator op;
  // (1/n) sum_i |lambda_m a_i - b_i|^2, by box position of op.
  std::vector<double> per_mode_residual;
  double objective = 0.0;
  FitDiagnostics diagnostics;
};

// A mode is degenerate when its input power sum_i |a_i(m)|^2 is at most this
// fraction of the total input energy sum_i ||v_i||^2 (exact zero included).
// Round-off leaves about 1e-32 of the energy in unexcited modes.
inline constexpr double kDegenerateRatio = 1e-24;

// Box coefficients a(m), b(m) of a spectrum pair, lexicographic over {-K..K}^d.
std::vector<cplx> gather_box(const SpectrumField& s, std::int64_t K);

// Running sums over samples: sum b conj(a), sum |a|^2, sum |b|^2 per mode.
class SpectralNormalEquations {
 public:
  SpectralNormalEquations(int d, std::int64_t K);

  int dim() const noexcept { return d_; }
  std::int64_t K() const noexcept { return K_; }
  std::size_t count() const noexcept { return count_; }

  // input_energy is ||v||^2 over the whole grid; negative means the box part.
  void add(std::span<const cplx> a_box, std::span<const cplx> b_box, double input_energy = -1.0);
  void add(const SpectrumField& v, const SpectrumField& w);

  double input_energy() const noexcept { return energy_; }
  bool degenerate(std::size_t pos) const { return !(power_a_[pos] > kDegenerateRatio * energy_); }

  const std::vector<cplx>& cross() const noexcept { return cross_; }
  const std::vector<double>& power_in() const noexcept { return power_a_; }
  const std::vector<double>& power_out() const noexcept { return power_b_; }

  // Closed-form solution on the sub-box |m|_inf <= K (K <= this->K()).
  FitResult solve(std::int64_t K, double C) const;
  FitResult solve(double C) const { return solve(K_, C); }

  // Objective of an arbitrary operator with T.K() <= K() from the sums.
  double objective(const DiagonalOperator& T) const;

 private:
  int d_;
  std::int64_t K_;
  std::size_t count_ = 0;
  double energy_ = 0.0;
  std::vector<cplx> cross_;
  std::vector<double> power_a_;
  std::vector<double> power_b_;
};

// Accumulates a dataset; transforms run in parallel, sums in sample order.
SpectralNormalEquations accumulate(const Dataset& data, std::int64_t K);

void validate_fit_config(const FitConfig& cfg, const GridSpec& spec);

FitResult fit_closed_form(const Dataset& data, const FitConfig& cfg);

// Mini-batch projected SGD with variance reduction, started at zero. Each
// step moves lambda_m along its batch gradient scaled by the inverse of the
// full-data curvature and projects onto |lambda_m| <= C.
FitResult fit_projected_sgd(const Dataset& data, const FitConfig& cfg);

FitResult fit(const Dataset& data, const FitConfig& cfg);

// The estimator objective evaluated from the data fields directly.
double empirical_objective(const DiagonalOperator& T, const Dataset& data);

// Applies T at the input's resolution; requires N' > 2K.
GridField predict(const DiagonalOperator& T, const GridField& v);

// (1/n) sum_i ||w_i - T v_i||^2 / ||w_i||, grid L2 norms. With
// squared_denominator the divisor is ||w_i||^2.
double relative_mse(const DiagonalOperator& T, const Dataset& test, bool squared_denominator = false);

// (1/n) sum_i ( ||T_hat v_i - w_i||^2 - ||T_ref v_i - w_i||^2 )
double empirical_excess_risk(const DiagonalOperator& T_hat, const DiagonalOperator& T_ref, const Dataset& test);

// Test pairs kept as spectra so an operator is scored without transforms.
// By Parseval ||w - T v||^2 = sum_{box} |b - lambda a|^2 + tail energy of w.
class SpectralTestSet {
 public:
  SpectralTestSet(int d, std::int64_t K_max);

  void add(const SpectrumField& v, const SpectrumField& w);
  std::size_t size() const noexcept { return tail_.size(); }
  std::int64_t K_max() const noexcept { return K_max_; }

  // Same value as relative_mse(T, test) for the pairs added; T.K() <= K_max.
  double relative_mse(const DiagonalOperator& T, bool squared_denominator = false) const;

 private:
  int d_;
  std::int64_t K_max_;
  std::vector<std::vector<cplx>> a_;
  std::vector<std::vector<cplx>> b_;
  std::vector<double> tail_;    // energy of w outside the K_max box
  std::vector<double> energy_;  // ||w||^2
};

}  // namespace fourlin
