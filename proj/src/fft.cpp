#include "fourlin/fft.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "fourlin/simd/kernels.hpp"

namespace fourlin {
namespace {

std::shared_ptr<const Fft1d> line_plan(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const Fft1d>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const Fft1d>(n);
  return slot;
}

}  // namespace

Fft1d::Fft1d(std::size_t n) : n_(n), pow2_(std::has_single_bit(n)) {
  require(n >= 1, "FFT length must be positive");
  if (pow2_) {
    const int bits = std::countr_zero(n);
    bitrev_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1U) << (bits - 1 - b);
      bitrev_[i] = r;
    }
    twiddle_fwd_.reserve(n);
    twiddle_inv_.reserve(n);
    for (std::size_t half = 1; half < n; half *= 2) {
      for (std::size_t j = 0; j < half; ++j) {
        const double angle = std::numbers::pi * static_cast<double>(j) / static_cast<double>(half);
        twiddle_fwd_.push_back(std::polar(1.0, -angle));
        twiddle_inv_.push_back(std::polar(1.0, angle));
      }
    }
    return;
  }

  padded_ = std::bit_ceil(2 * n - 1);
  inner_ = std::make_unique<Fft1d>(padded_);
  chirp_fwd_.resize(n);
  chirp_inv_.resize(n);
  const std::size_t period = 2 * n;
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the chirp phase small and exact in integers.
    const std::size_t k2 = (k * k) % period;
    const double angle = std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp_fwd_[k] = std::polar(1.0, -angle);
    chirp_inv_[k] = std::polar(1.0, angle);
  }
  auto build_kernel = [&](const std::vector<cplx>& chirp) {
    std::vector<cplx> kernel(padded_, cplx{});
    kernel[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) {
      kernel[k] = std::conj(chirp[k]);
      kernel[padded_ - k] = std::conj(chirp[k]);
    }
    inner_->transform(kernel.data(), FftDirection::forward);
    return kernel;
  };
  kernel_fwd_ = build_kernel(chirp_fwd_);
  kernel_inv_ = build_kernel(chirp_inv_);
}

Fft1d::~Fft1d() = default;

void Fft1d::transform(cplx* data, FftDirection dir) const {
  if (n_ == 1) return;
  if (pow2_) {
    radix2(data, dir);
  } else {
    bluestein(data, dir);
  }
}

void Fft1d::radix2(cplx* data, FftDirection dir) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t r = bitrev_[i];
    if (i < r) std::swap(data[i], data[r]);
  }
  const auto& k = simd::active_kernels();
  const cplx* tw = dir == FftDirection::forward ? twiddle_fwd_.data() : twiddle_inv_.data();
  for (std::size_t half = 1; half < n_; half *= 2) {
    for (std::size_t start = 0; start < n_; start += 2 * half) {
      k.butterfly(data + start, data + start + half, tw, half);
    }
    tw += half;
  }
}

void Fft1d::bluestein(cplx* data, FftDirection dir) const {
  const auto& chirp = dir == FftDirection::forward ? chirp_fwd_ : chirp_inv_;
  const auto& kernel = dir == FftDirection::forward ? kernel_fwd_ : kernel_inv_;
  const auto& k = simd::active_kernels();

  std::vector<cplx> work(padded_, cplx{});
  for (std::size_t j = 0; j < n_; ++j) work[j] = data[j] * chirp[j];
  inner_->transform(work.data(), FftDirection::forward);
  k.multiply(work.data(), kernel.data(), padded_);
  inner_->transform(work.data(), FftDirection::inverse);
  const double inv = 1.0 / static_cast<double>(padded_);
  for (std::size_t j = 0; j < n_; ++j) data[j] = work[j] * chirp[j] * inv;
}

FftPlan::FftPlan(const GridSpec& spec) : spec_(spec), line_(line_plan(static_cast<std::size_t>(spec.side()))) {}

void FftPlan::transform(std::span<cplx> data, FftDirection dir) const {
  require(data.size() == spec_.points(), "FFT buffer length must equal N^d");
  const auto n = static_cast<std::size_t>(spec_.side());
  if (n == 1) return;
  const std::size_t total = spec_.points();

  // Last axis is contiguous.
  for (std::size_t base = 0; base < total; base += n) line_->transform(data.data() + base, dir);

  std::vector<cplx> line(n);
  std::size_t stride = n;
  for (int axis = spec_.dim() - 2; axis >= 0; --axis) {
    const std::size_t block = stride * n;
    for (std::size_t outer = 0; outer < total; outer += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        cplx* p = data.data() + outer + inner;
        for (std::size_t t = 0; t < n; ++t) line[t] = p[t * stride];
        line_->transform(line.data(), dir);
        for (std::size_t t = 0; t < n; ++t) p[t * stride] = line[t];
      }
    }
    stride = block;
  }
}

std::shared_ptr<const FftPlan> fft_plan(const GridSpec& spec) {
  static std::mutex mu;
  static std::map<std::pair<int, std::int64_t>, std::shared_ptr<const FftPlan>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{spec.dim(), spec.side()}];
  if (!slot) slot = std::make_shared<const FftPlan>(spec);
  return slot;
}

}  // namespace fourlin
