#pragma once

// Data-parallel inner loops shared by the FFT, the operator application and
// the estimator. Every kernel has a scalar reference implementation; vector
// variants (AVX2+FMA on x86-64, NEON on aarch64) are picked at runtime and
// must agree with the reference up to floating-point reassociation.

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace fourlin::simd {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;

  // Radix-2 butterfly over one block: t = tw[j] * hi[j]; hi[j] = lo[j] - t; lo[j] += t.
  void (*butterfly)(cplx* lo, cplx* hi, const cplx* tw, std::size_t count);

  // x[j] *= y[j]
  void (*multiply)(cplx* x, const cplx* y, std::size_t count);

  // x[j] *= s
  void (*scale)(cplx* x, double s, std::size_t count);

  // cross[j] += b[j] * conj(a[j]); power_a[j] += |a[j]|^2; power_b[j] += |b[j]|^2
  void (*accumulate_cross)(const cplx* a, const cplx* b, cplx* cross, double* power_a,
                           double* power_b, std::size_t count);

  // sum_j x[j]^2
  double (*sum_squares)(const double* x, std::size_t count);

  // sum_j |z[j]|^2
  double (*sum_abs_squares)(const cplx* z, std::size_t count);

  // sum_j |w[j] - lambda[j] * v[j]|^2
  double (*residual_energy)(const cplx* w, const cplx* v, const cplx* lambda, std::size_t count);
};

const KernelTable& scalar_kernels();

// Vector tables compiled into this build that the running CPU supports.
std::vector<const KernelTable*> available_vector_kernels();

// Table used by the library. Honors FOURLIN_SIMD=scalar|avx2|neon when the
// requested table is available; otherwise the widest supported one.
const KernelTable& active_kernels();

// Overrides the active table (tests and benchmarks). Pass nullptr to restore
// the automatic choice.
void set_active_kernels(const KernelTable* table);

namespace detail {
const KernelTable* avx2_table();
const KernelTable* neon_table();
}  // namespace detail

}  // namespace fourlin::simd
