#include "fourlin/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "fourlin/parallel.hpp"
#include "fourlin/rng.hpp"
#include "fourlin/simd/kernels.hpp"
#include "fourlin/spectral.hpp"

namespace fourlin {
namespace {

constexpr std::size_t kChunk = 64;

double sum_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Per-mode residual (1/n)(|l|^2 P_a - 2 Re(conj(l) X) + P_b).
double mode_residual(cplx lambda, cplx cross, double pa, double pb, double n) {
  return (std::norm(lambda) * pa - 2.0 * (std::conj(lambda) * cross).real() + pb) / n;
}

cplx project_disk(cplx z, double C) {
  const double r = std::abs(z);
  return r > C ? z * (C / r) : z;
}

// Conjugate symmetry of the sums, relative to their scale.
bool sums_conjugate_symmetric(std::span<const cplx> x, std::span<const double> pa) {
  double scale = 0.0;
  double defect = 0.0;
  const std::size_t m = x.size();
  for (std::size_t p = 0; p < m; ++p) {
    scale = std::max(scale, std::abs(x[p]) + pa[p]);
    defect = std::max(defect, std::abs(x[m - 1 - p] - std::conj(x[p])) + std::abs(pa[m - 1 - p] - pa[p]));
  }
  return defect <= 1e-12 * std::max(scale, 1e-300);
}

}  // namespace

std::vector<cplx> gather_box(const SpectrumField& s, std::int64_t K) {
  const auto flat = box_flat_indices(s.spec(), K);
  std::vector<cplx> out(flat.size());
  for (std::size_t p = 0; p < flat.size(); ++p) out[p] = s[flat[p]];
  return out;
}

SpectralNormalEquations::SpectralNormalEquations(int d, std::int64_t K) : d_(d), K_(K) {
  require(d >= 1 && K >= 0, "normal equations need d >= 1 and K >= 0");
  const std::size_t m = box_mode_count(d, K);
  cross_.assign(m, cplx{});
  power_a_.assign(m, 0.0);
  power_b_.assign(m, 0.0);
}

void SpectralNormalEquations::add(std::span<const cplx> a_box, std::span<const cplx> b_box, double input_energy) {
  require(a_box.size() == cross_.size() && b_box.size() == cross_.size(), "box size mismatch");
  const auto& k = simd::active_kernels();
  k.accumulate_cross(a_box.data(), b_box.data(), cross_.data(), power_a_.data(), power_b_.data(), cross_.size());
  energy_ += input_energy >= 0.0 ? input_energy : k.sum_abs_squares(a_box.data(), a_box.size());
  ++count_;
}

void SpectralNormalEquations::add(const SpectrumField& v, const SpectrumField& w) {
  require(v.spec() == w.spec() && v.spec().dim() == d_, "pair spectra must share a grid of dimension d");
  const auto a = gather_box(v, K_);
  const auto b = gather_box(w, K_);
  add(a, b, spectral_energy(v));
}

FitResult SpectralNormalEquations::solve(std::int64_t K, double C) const {
  require(count_ >= 1, "cannot fit an empty dataset");
  require(C > 0.0 && std::isfinite(C), "constraint radius C must be positive");
  const auto pos = sub_box_positions(d_, K, K_);
  const std::size_t m = pos.size();
  std::vector<cplx> x(m);
  std::vector<double> pa(m);
  std::vector<double> pb(m);
  for (std::size_t p = 0; p < m; ++p) {
    x[p] = cross_[pos[p]];
    pa[p] = power_a_[pos[p]];
    pb[p] = power_b_[pos[p]];
  }
  const bool real = sums_conjugate_symmetric(x, pa);
  if (real) {
    // Remove round-off asymmetry so lambda_{-m} = conj(lambda_m) exactly.
    for (std::size_t p = 0; p < m / 2 + 1; ++p) {
      const std::size_t q = m - 1 - p;
      const cplx c = 0.5 * (x[p] + std::conj(x[q]));
      const double a = 0.5 * (pa[p] + pa[q]);
      x[p] = c;
      x[q] = std::conj(c);
      pa[p] = pa[q] = a;
    }
    x[m / 2] = {x[m / 2].real(), 0.0};
  }

  const double n = static_cast<double>(count_);
  FitResult out;
  std::vector<cplx> lambdas(m);
  out.per_mode_residual.resize(m);
  for (std::size_t p = 0; p < m; ++p) {
    if (degenerate(pos[p])) {
      ++out.diagnostics.modes_degenerate;
    } else {
      const cplx star = x[p] / pa[p];
      if (std::abs(star) > C) ++out.diagnostics.modes_clipped;
      lambdas[p] = project_disk(star, C);
    }
    out.per_mode_residual[p] = mode_residual(lambdas[p], x[p], pa[p], pb[p], n);
  }
  out.objective = sum_of(out.per_mode_residual);
  out.op = DiagonalOperator(d_, K, C, std::move(lambdas), real);
  return out;
}

double SpectralNormalEquations::objective(const DiagonalOperator& T) const {
  require(T.dim() == d_ && T.K() <= K_, "operator box must fit inside the accumulated box");
  require(count_ >= 1, "no samples accumulated");
  std::vector<cplx> lam(cross_.size(), cplx{});
  const auto pos = sub_box_positions(d_, T.K(), K_);
  for (std::size_t p = 0; p < pos.size(); ++p) lam[pos[p]] = T.lambdas()[p];
  const double n = static_cast<double>(count_);
  double total = 0.0;
  for (std::size_t p = 0; p < lam.size(); ++p) total += mode_residual(lam[p], cross_[p], power_a_[p], power_b_[p], n);
  return total;
}

void validate_fit_config(const FitConfig& cfg, const GridSpec& spec) {
  require(cfg.K >= 0, "truncation K must be non-negative");
  require(cfg.C > 0.0 && std::isfinite(cfg.C), "constraint radius C must be positive");
  require(spec.dim() >= 1, "grid dimension must be positive");
  require_resolution(spec, cfg.K);
  if (cfg.method == FitMethod::projected_sgd) {
    require(cfg.sgd.step_size > 0.0 && cfg.sgd.step_size <= 1.0, "SGD step must lie in (0, 1]");
    require(cfg.sgd.batch_size >= 1, "SGD batch size must be positive");
    require(cfg.sgd.epochs >= 1, "SGD needs at least one epoch");
    require(cfg.sgd.min_step > 0.0, "SGD minimal step must be positive");
  }
}

SpectralNormalEquations accumulate(const Dataset& data, std::int64_t K) {
  require(data.size() >= 1, "cannot fit an empty dataset");
  data.validate();
  SpectralNormalEquations eq(data.spec.dim(), K);
  const std::size_t n = data.size();
  std::vector<std::vector<cplx>> a(kChunk);
  std::vector<std::vector<cplx>> b(kChunk);
  std::vector<double> e(kChunk);
  for (std::size_t start = 0; start < n; start += kChunk) {
    const std::size_t len = std::min(kChunk, n - start);
    parallel_for(len, [&](std::size_t j) {
      const SpectrumField v = dft_forward(data.inputs[start + j]);
      a[j] = gather_box(v, K);
      e[j] = spectral_energy(v);
      b[j] = gather_box(dft_forward(data.outputs[start + j]), K);
    });
    for (std::size_t j = 0; j < len; ++j) eq.add(a[j], b[j], e[j]);
  }
  return eq;
}

FitResult fit_closed_form(const Dataset& data, const FitConfig& cfg) {
  require(data.size() >= 1, "cannot fit an empty dataset");
  validate_fit_config(cfg, data.spec);
  return accumulate(data, cfg.K).solve(cfg.C);
}

FitResult fit_projected_sgd(const Dataset& data, const FitConfig& cfg) {
  require(data.size() >= 1, "cannot fit an empty dataset");
  validate_fit_config(cfg, data.spec);
  data.validate();
  const std::size_t n = data.size();
  const int d = data.spec.dim();
  const std::size_t m = box_mode_count(d, cfg.K);

  std::vector<std::vector<cplx>> a(n);
  std::vector<std::vector<cplx>> b(n);
  std::vector<double> e(n);
  parallel_for(n, [&](std::size_t i) {
    const SpectrumField v = dft_forward(data.inputs[i]);
    a[i] = gather_box(v, cfg.K);
    e[i] = spectral_energy(v);
    b[i] = gather_box(dft_forward(data.outputs[i]), cfg.K);
  });
  SpectralNormalEquations eq(d, cfg.K);
  for (std::size_t i = 0; i < n; ++i) eq.add(a[i], b[i], e[i]);
  const auto& x = eq.cross();
  const auto& pa = eq.power_in();
  const auto& pb = eq.power_out();
  const double nd = static_cast<double>(n);

  std::vector<char> active(m);
  std::vector<double> curv(m);  // (1/n) sum_i |a_i|^2
  FitResult out;
  for (std::size_t p = 0; p < m; ++p) {
    active[p] = !eq.degenerate(p);
    curv[p] = pa[p] / nd;
    if (!active[p]) ++out.diagnostics.modes_degenerate;
  }

  auto objective_of = [&](const std::vector<cplx>& lam) {
    double total = 0.0;
    for (std::size_t p = 0; p < m; ++p) total += mode_residual(lam[p], x[p], pa[p], pb[p], nd);
    return total;
  };

  const SgdOptions& opt = cfg.sgd;
  const std::size_t batch = std::min(opt.batch_size, n);
  std::vector<cplx> lam(m, cplx{});
  std::vector<cplx> snap(m);
  std::vector<cplx> full_grad(m);
  std::vector<double> batch_pow(m);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(opt.seed, Stream::sgd));

  double step = opt.step_size;
  double current = objective_of(lam);
  // Round-off scale of the objective: its value at lambda = 0.
  const double slack = 1e-12 * current;
  const double move_tol = opt.tolerance * std::max(1.0, cfg.C);
  for (std::size_t epoch = 0; epoch < opt.epochs; ++epoch) {
    snap = lam;
    for (std::size_t p = 0; p < m; ++p) full_grad[p] = snap[p] * curv[p] - x[p] / nd;
    std::shuffle(order.begin(), order.end(), rng);

    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t len = std::min(batch, n - start);
      std::fill(batch_pow.begin(), batch_pow.end(), 0.0);
      for (std::size_t k = 0; k < len; ++k) {
        const auto& ai = a[order[start + k]];
        for (std::size_t p = 0; p < m; ++p) batch_pow[p] += std::norm(ai[p]);
      }
      // Variance-reduced batch gradient: H_B (lambda - snap) + grad(snap).
      const double inv_len = 1.0 / static_cast<double>(len);
      for (std::size_t p = 0; p < m; ++p) {
        if (!active[p]) continue;
        const cplx g = batch_pow[p] * inv_len * (lam[p] - snap[p]) + full_grad[p];
        lam[p] = project_disk(lam[p] - step * g / curv[p], cfg.C);
      }
    }

    const double next = objective_of(lam);
    out.diagnostics.epoch_losses.push_back(next);
    out.diagnostics.epochs_run = epoch + 1;
    if (next > current + slack) {
      lam = snap;
      step *= 0.5;
      if (step < opt.min_step) {
        std::ostringstream os;
        os << "projected SGD diverged: objective rose from " << current << " to " << next << " at epoch "
           << epoch + 1 << " with step " << step * 2.0;
        fail(ErrorKind::non_convergence, os.str());
      }
      continue;
    }
    current = next;
    double moved = 0.0;
    for (std::size_t p = 0; p < m; ++p) moved = std::max(moved, std::abs(lam[p] - snap[p]));
    if (moved <= move_tol) break;
  }

  out.diagnostics.final_step = step;
  out.per_mode_residual.resize(m);
  for (std::size_t p = 0; p < m; ++p) {
    out.per_mode_residual[p] = mode_residual(lam[p], x[p], pa[p], pb[p], nd);
    if (active[p] && std::abs(x[p] / pa[p]) > cfg.C) ++out.diagnostics.modes_clipped;
  }
  out.objective = sum_of(out.per_mode_residual);
  const bool real = sums_conjugate_symmetric(x, pa);
  out.op = DiagonalOperator(d, cfg.K, cfg.C, std::move(lam), real);
  return out;
}

FitResult fit(const Dataset& data, const FitConfig& cfg) {
  return cfg.method == FitMethod::closed_form ? fit_closed_form(data, cfg) : fit_projected_sgd(data, cfg);
}

double empirical_objective(const DiagonalOperator& T, const Dataset& data) {
  data.validate();
  require(T.dim() == data.spec.dim(), "operator and data dimensions differ");
  const std::size_t n = data.size();
  std::vector<double> per(n);
  parallel_for(n, [&](std::size_t i) {
    const auto a = gather_box(dft_forward(data.inputs[i]), T.K());
    const auto b = gather_box(dft_forward(data.outputs[i]), T.K());
    per[i] = simd::active_kernels().residual_energy(b.data(), a.data(), T.lambdas().data(), a.size());
  });
  return sum_of(per) / static_cast<double>(n);
}

GridField predict(const DiagonalOperator& T, const GridField& v) { return apply(T, v); }

double relative_mse(const DiagonalOperator& T, const Dataset& test, bool squared_denominator) {
  test.validate();
  const std::size_t n = test.size();
  std::vector<double> per(n);
  parallel_for(n, [&](std::size_t i) {
    const GridField& w = test.outputs[i];
    const double w_sq = grid_l2_norm_sq(w);
    if (!(w_sq > 0.0)) {
      fail(ErrorKind::degenerate_target, "test target " + std::to_string(i) + " has zero L2 norm");
    }
    GridField diff = predict(T, test.inputs[i]);
    for (std::size_t k = 0; k < diff.values().size(); ++k) diff[k] = w[k] - diff[k];
    per[i] = grid_l2_norm_sq(diff) / (squared_denominator ? w_sq : std::sqrt(w_sq));
  });
  return sum_of(per) / static_cast<double>(n);
}

double empirical_excess_risk(const DiagonalOperator& T_hat, const DiagonalOperator& T_ref, const Dataset& test) {
  test.validate();
  const std::size_t n = test.size();
  std::vector<double> per(n);
  parallel_for(n, [&](std::size_t i) {
    const GridField& w = test.outputs[i];
    GridField e_hat = predict(T_hat, test.inputs[i]);
    GridField e_ref = predict(T_ref, test.inputs[i]);
    for (std::size_t k = 0; k < e_hat.values().size(); ++k) {
      e_hat[k] -= w[k];
      e_ref[k] -= w[k];
    }
    per[i] = grid_l2_norm_sq(e_hat) - grid_l2_norm_sq(e_ref);
  });
  return sum_of(per) / static_cast<double>(n);
}

SpectralTestSet::SpectralTestSet(int d, std::int64_t K_max) : d_(d), K_max_(K_max) {
  require(d >= 1 && K_max >= 0, "test set needs d >= 1 and K_max >= 0");
}

void SpectralTestSet::add(const SpectrumField& v, const SpectrumField& w) {
  require(v.spec() == w.spec() && v.spec().dim() == d_, "pair spectra must share a grid of dimension d");
  auto a = gather_box(v, K_max_);
  auto b = gather_box(w, K_max_);
  const double energy = spectral_energy(w);
  if (!(energy > 0.0)) {
    fail(ErrorKind::degenerate_target, "test target " + std::to_string(size()) + " has zero L2 norm");
  }
  // Summed directly: energy minus the box part cancels when the tail is small.
  const std::int64_t N = w.spec().side();
  const std::int64_t half = (N + 1) / 2;
  const auto c = w.coeffs();
  double tail = 0.0;
  for (std::size_t f = 0; f < c.size(); ++f) {
    bool outside = false;
    for (std::size_t rest = f; rest > 0 && !outside; rest /= static_cast<std::size_t>(N)) {
      const auto idx = static_cast<std::int64_t>(rest % static_cast<std::size_t>(N));
      outside = (idx < half ? idx : N - idx) > K_max_;
    }
    if (outside) tail += std::norm(c[f]);
  }
  tail_.push_back(tail);
  energy_.push_back(energy);
  a_.push_back(std::move(a));
  b_.push_back(std::move(b));
}

double SpectralTestSet::relative_mse(const DiagonalOperator& T, bool squared_denominator) const {
  require(size() >= 1, "empty test set");
  require(T.dim() == d_ && T.K() <= K_max_, "operator box must fit inside the test box");
  std::vector<cplx> lam(a_.front().size(), cplx{});
  const auto pos = sub_box_positions(d_, T.K(), K_max_);
  for (std::size_t p = 0; p < pos.size(); ++p) lam[pos[p]] = T.lambdas()[p];
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const double err =
        tail_[i] + simd::active_kernels().residual_energy(b_[i].data(), a_[i].data(), lam.data(), lam.size());
    total += err / (squared_denominator ? energy_[i] : std::sqrt(energy_[i]));
  }
  return total / static_cast<double>(size());
}

}  // namespace fourlin
