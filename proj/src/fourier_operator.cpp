#include "fourlin/fourier_operator.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fourlin/fft.hpp"
#include "fourlin/parallel.hpp"
#include "fourlin/rng.hpp"
#include "fourlin/simd/kernels.hpp"
#include "fourlin/spectral.hpp"

namespace fourlin {
namespace {

constexpr double kLambdaSlack = 1e-12;

std::size_t box_size(int d, std::int64_t K) {
  std::size_t out = 1;
  for (int j = 0; j < d; ++j) out *= static_cast<std::size_t>(2 * K + 1);
  return out;
}

}  // namespace

std::size_t box_mode_count(int d, std::int64_t K) {
  require(d >= 1 && K >= 0, "box needs d >= 1 and K >= 0");
  return box_size(d, K);
}

std::vector<Mode> box_modes(int d, std::int64_t K) {
  require(d >= 1 && K >= 0, "box needs d >= 1 and K >= 0");
  std::vector<Mode> out;
  out.reserve(box_size(d, K));
  Mode m(static_cast<std::size_t>(d), -K);
  for (std::size_t p = 0, total = box_size(d, K); p < total; ++p) {
    out.push_back(m);
    for (std::size_t j = m.size(); j-- > 0;) {
      if (++m[j] <= K) break;
      m[j] = -K;
    }
  }
  return out;
}

DiagonalOperator::DiagonalOperator(int d, std::int64_t K, double C, bool real_output)
    : DiagonalOperator(d, K, C, std::vector<cplx>(box_size(d, K), cplx{}), real_output) {}

DiagonalOperator::DiagonalOperator(int d, std::int64_t K, double C, std::vector<cplx> lambdas, bool real_output)
    : d_(d), K_(K), C_(C), real_output_(real_output), lambdas_(std::move(lambdas)) {
  require(d >= 1, "operator dimension must be positive");
  require(K >= 0, "truncation level K must be non-negative");
  require(C > 0.0 && std::isfinite(C), "parameter bound C must be positive");
  require(lambdas_.size() == box_size(d, K), "expected (2K+1)^d coefficients");
  require_finite(lambdas_, "operator coefficients");
  const double worst = max_abs_lambda();
  require(worst <= C_ + kLambdaSlack * std::max(1.0, C_),
          "coefficient magnitude " + std::to_string(worst) + " exceeds bound C = " + std::to_string(C_));
  if (real_output_) {
    require(conjugate_defect() <= kLambdaSlack * std::max(1.0, C_),
            "real-output operator must satisfy lambda_{-m} = conj(lambda_m)");
  }
}

Mode DiagonalOperator::mode_at(std::size_t pos) const {
  require(pos < lambdas_.size(), "box position out of range");
  Mode m(static_cast<std::size_t>(d_));
  const auto side = static_cast<std::size_t>(2 * K_ + 1);
  for (std::size_t j = m.size(); j-- > 0;) {
    m[j] = static_cast<std::int64_t>(pos % side) - K_;
    pos /= side;
  }
  return m;
}

bool DiagonalOperator::contains(const Mode& m) const {
  return m.size() == static_cast<std::size_t>(d_) && linf_norm(m) <= K_;
}

std::size_t DiagonalOperator::position_of(const Mode& m) const {
  require(contains(m), "mode " + to_string(m) + " lies outside the operator box");
  std::size_t pos = 0;
  const auto side = static_cast<std::size_t>(2 * K_ + 1);
  for (auto c : m) pos = pos * side + static_cast<std::size_t>(c + K_);
  return pos;
}

cplx DiagonalOperator::lambda(const Mode& m) const {
  return contains(m) ? lambdas_[position_of(m)] : cplx{};
}

double DiagonalOperator::max_abs_lambda() const {
  double worst = 0.0;
  for (const auto& l : lambdas_) worst = std::max(worst, std::abs(l));
  return worst;
}

double DiagonalOperator::conjugate_defect() const {
  // Lexicographic order maps m -> -m onto pos -> size-1-pos.
  double worst = 0.0;
  const std::size_t n = lambdas_.size();
  for (std::size_t p = 0; p < n; ++p) worst = std::max(worst, std::abs(lambdas_[n - 1 - p] - std::conj(lambdas_[p])));
  return worst;
}

void require_resolution(const GridSpec& spec, std::int64_t K) {
  if (spec.side() <= 2 * K) {
    fail(ErrorKind::resolution_too_coarse, "grid side N = " + std::to_string(spec.side()) +
                                               " must exceed 2K = " + std::to_string(2 * K));
  }
}

std::vector<std::size_t> box_flat_indices(const GridSpec& spec, std::int64_t K) {
  require_resolution(spec, K);
  const int d = spec.dim();
  const std::int64_t n = spec.side();
  const auto side = static_cast<std::size_t>(2 * K + 1);
  std::vector<std::size_t> out(box_size(d, K));
  for (std::size_t p = 0; p < out.size(); ++p) {
    std::size_t rest = p;
    std::size_t flat = 0;
    std::size_t stride = 1;
    for (int j = 0; j < d; ++j) {
      const std::int64_t m = static_cast<std::int64_t>(rest % side) - K;
      rest /= side;
      flat += static_cast<std::size_t>(frequency_index(m, n)) * stride;
      stride *= static_cast<std::size_t>(n);
    }
    out[p] = flat;
  }
  return out;
}

std::vector<std::size_t> sub_box_positions(int d, std::int64_t K, std::int64_t K_outer) {
  require(K >= 0 && K <= K_outer, "inner box must fit inside the outer box");
  const auto side = static_cast<std::size_t>(2 * K + 1);
  const auto outer = static_cast<std::size_t>(2 * K_outer + 1);
  std::vector<std::size_t> out(box_size(d, K));
  for (std::size_t p = 0; p < out.size(); ++p) {
    std::size_t rest = p;
    std::size_t q = 0;
    std::size_t stride = 1;
    for (int j = 0; j < d; ++j) {
      q += (rest % side + static_cast<std::size_t>(K_outer - K)) * stride;
      rest /= side;
      stride *= outer;
    }
    out[p] = q;
  }
  return out;
}

std::vector<cplx> DiagonalOperator::grid_multiplier(const GridSpec& spec) const {
  require(spec.dim() == d_, "operator and grid dimensions differ");
  const auto flat = box_flat_indices(spec, K_);
  std::vector<cplx> mult(spec.points(), cplx{});
  for (std::size_t p = 0; p < flat.size(); ++p) mult[flat[p]] = lambdas_[p];
  return mult;
}

std::vector<cplx> apply_complex(const DiagonalOperator& T, const GridField& v) {
  const auto mult = T.grid_multiplier(v.spec());
  SpectrumField s = dft_forward(v);
  simd::active_kernels().multiply(s.coeffs().data(), mult.data(), mult.size());
  return dft_inverse_complex(s);
}

GridField apply(const DiagonalOperator& T, const GridField& v) {
  const auto mult = T.grid_multiplier(v.spec());
  SpectrumField s = dft_forward(v);
  simd::active_kernels().multiply(s.coeffs().data(), mult.data(), mult.size());
  return dft_inverse(s);
}

GridField apply_direct(const DiagonalOperator& T, const GridField& v, std::size_t cap) {
  const GridSpec& spec = v.spec();
  require(spec.dim() == T.dim(), "operator and grid dimensions differ");
  require_resolution(spec, T.K());
  const SpectrumField coeff = dft_naive(v, cap);
  const std::int64_t n = spec.side();

  // Terms lambda_m * coeff(m) for every box mode.
  std::vector<Mode> modes = box_modes(T.dim(), T.K());
  std::vector<cplx> weight(modes.size());
  for (std::size_t p = 0; p < modes.size(); ++p) weight[p] = T.lambdas()[p] * coeff.at(modes[p]);

  std::vector<double> out(spec.points());
  double norm_sq = 0.0;
  double max_imag = 0.0;
  for (std::size_t xf = 0; xf < spec.points(); ++xf) {
    const auto idx = unflatten(xf, spec);
    cplx acc{};
    for (std::size_t p = 0; p < modes.size(); ++p) {
      std::int64_t phase = 0;
      for (std::size_t j = 0; j < idx.size(); ++j) phase += modes[p][j] * idx[j];
      phase = ((phase % n) + n) % n;
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(n);
      acc += weight[p] * cplx{std::cos(angle), std::sin(angle)};
    }
    out[xf] = acc.real();
    norm_sq += std::norm(acc);
    max_imag = std::max(max_imag, std::abs(acc.imag()));
  }
  const double norm = std::sqrt(norm_sq / static_cast<double>(spec.points()));
  if (max_imag > kImagResidueTol * norm) {
    fail(ErrorKind::symmetry_violation, "direct operator application produced a complex field");
  }
  return GridField(spec, std::move(out));
}

DiagonalOperator synthesize_random_operator(int d, std::int64_t K, double bound, std::uint64_t seed,
                                            bool real_output) {
  require(bound > 0.0 && std::isfinite(bound), "bound must be positive");
  const std::size_t n = box_size(d, K);
  std::vector<cplx> lambdas(n);
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(-bound, bound);
  if (real_output) {
    // Position p and n-1-p hold m and -m; the centre is the zero mode.
    for (std::size_t p = 0; p <= n / 2; ++p) {
      const double l = unif(rng);
      lambdas[p] = l;
      lambdas[n - 1 - p] = l;
    }
  } else {
    for (auto& l : lambdas) l = unif(rng);
  }
  return DiagonalOperator(d, K, bound, std::move(lambdas), real_output);
}

DiagonalOperator heat_operator(int d, double tau, std::int64_t K) {
  require(tau >= 0.0 && std::isfinite(tau), "heat operator needs tau >= 0");
  const auto modes = box_modes(d, K);
  std::vector<cplx> lambdas(modes.size());
  const double c = 4.0 * std::numbers::pi * std::numbers::pi * tau;
  for (std::size_t p = 0; p < modes.size(); ++p) {
    lambdas[p] = std::exp(-c * static_cast<double>(l2_norm_sq(modes[p])));
  }
  return DiagonalOperator(d, K, 1.0, std::move(lambdas), true);
}

void Dataset::validate() const {
  require(!inputs.empty(), "dataset must hold at least one pair");
  require(inputs.size() == outputs.size(), "dataset inputs and outputs differ in count");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    require(inputs[i].spec() == spec && outputs[i].spec() == spec,
            "dataset pair " + std::to_string(i) + " is on a different grid");
  }
}

std::pair<GridField, GridField> generate_pair(const PairRecipe& recipe, std::uint64_t seed, std::size_t i) {
  const GridSpec& spec = recipe.input.spec;
  require_resolution(spec, recipe.target.K());
  const std::uint64_t item = derive_seed(seed, i);
  GrfConfig input = recipe.input;
  input.seed = derive_seed(item, Stream::input);
  GridField v = sample_grf(input);
  GridField w = apply(recipe.target, v);
  if (recipe.noise) {
    const GridField eps = sample_noise(spec, derive_seed(item, Stream::noise), recipe.input.zero_mean);
    for (std::size_t k = 0; k < spec.points(); ++k) w[k] += eps[k];
  }
  return {std::move(v), std::move(w)};
}

Dataset generate_dataset(const DiagonalOperator& target, const GrfConfig& grf, bool noise, std::size_t n,
                         std::uint64_t seed) {
  require(n >= 1, "dataset size must be positive");
  require_resolution(grf.spec, target.K());
  const PairRecipe recipe{target, grf, noise};
  Dataset out;
  out.spec = grf.spec;
  out.inputs.resize(n);
  out.outputs.resize(n);
  parallel_for(n, [&](std::size_t i) {
    auto [v, w] = generate_pair(recipe, seed, i);
    out.inputs[i] = std::move(v);
    out.outputs[i] = std::move(w);
  });
  return out;
}

namespace {

template <typename T>
std::vector<T> restrict_values(const GridSpec& fine, std::span<const T> values, std::int64_t coarse) {
  require(coarse >= 1 && fine.side() % coarse == 0,
          "coarse side " + std::to_string(coarse) + " must divide " + std::to_string(fine.side()));
  const GridSpec target(fine.dim(), coarse);
  const auto step = static_cast<std::size_t>(fine.side() / coarse);
  const auto n_fine = static_cast<std::size_t>(fine.side());
  const auto n_coarse = static_cast<std::size_t>(coarse);
  std::vector<T> out(target.points());
  for (std::size_t cf = 0; cf < target.points(); ++cf) {
    std::size_t rest = cf;
    std::size_t ff = 0;
    std::size_t stride = 1;
    for (int j = 0; j < fine.dim(); ++j) {
      ff += (rest % n_coarse) * step * stride;
      rest /= n_coarse;
      stride *= n_fine;
    }
    out[cf] = values[ff];
  }
  return out;
}

}  // namespace

GridField restrict_to_grid(const GridField& u, std::int64_t coarse) {
  auto vals = restrict_values<double>(u.spec(), u.values(), coarse);
  return GridField(GridSpec(u.spec().dim(), coarse), std::move(vals));
}

std::vector<cplx> restrict_to_grid(const GridSpec& fine, std::span<const cplx> values, std::int64_t coarse) {
  require(values.size() == fine.points(), "field length must equal N^d");
  return restrict_values<cplx>(fine, values, coarse);
}

}  // namespace fourlin
