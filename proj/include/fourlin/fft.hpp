#pragma once

// Complex FFTs of arbitrary length: iterative radix-2 for powers of two,
// Bluestein's chirp-z reduction otherwise. Transforms are unnormalized;
// callers apply the 1/N^d factor where their convention needs it.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fourlin/grid.hpp"

namespace fourlin {

// forward: sum_k x_k exp(-2 pi i jk/n); inverse: exp(+2 pi i jk/n)
enum class FftDirection { forward, inverse };

class Fft1d {
 public:
  explicit Fft1d(std::size_t n);
  ~Fft1d();
  Fft1d(const Fft1d&) = delete;
  Fft1d& operator=(const Fft1d&) = delete;

  std::size_t size() const noexcept { return n_; }

  // In place over n contiguous values. Thread-safe: plans are immutable.
  void transform(cplx* data, FftDirection dir) const;

 private:
  void radix2(cplx* data, FftDirection dir) const;
  void bluestein(cplx* data, FftDirection dir) const;

  std::size_t n_;
  bool pow2_;
  std::vector<std::size_t> bitrev_;
  // Twiddles for every stage, concatenated: half = 1, 2, 4, ...
  std::vector<cplx> twiddle_fwd_;
  std::vector<cplx> twiddle_inv_;

  std::size_t padded_ = 0;
  std::unique_ptr<Fft1d> inner_;
  std::vector<cplx> chirp_fwd_;
  std::vector<cplx> chirp_inv_;
  std::vector<cplx> kernel_fwd_;  // FFT of the conjugate chirp, forward direction
  std::vector<cplx> kernel_inv_;
};

// Separable d-dimensional transform over a GridSpec layout.
class FftPlan {
 public:
  explicit FftPlan(const GridSpec& spec);

  const GridSpec& spec() const noexcept { return spec_; }
  void transform(std::span<cplx> data, FftDirection dir) const;

 private:
  GridSpec spec_;
  std::shared_ptr<const Fft1d> line_;
};

// Cached, shared plans. Safe to call from many threads.
std::shared_ptr<const FftPlan> fft_plan(const GridSpec& spec);

}  // namespace fourlin
