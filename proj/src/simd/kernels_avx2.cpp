#include <immintrin.h>

#include "fourlin/simd/kernels.hpp"

namespace fourlin::simd {
namespace {

inline double* dptr(cplx* z) { return reinterpret_cast<double*>(z); }
inline const double* dptr(const cplx* z) { return reinterpret_cast<const double*>(z); }

// (x * y) for two interleaved complex values per register.
inline __m256d cmul(__m256d x, __m256d y) {
  const __m256d yr = _mm256_movedup_pd(y);
  const __m256d yi = _mm256_permute_pd(y, 0xF);
  const __m256d xs = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(x, yr, _mm256_mul_pd(xs, yi));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void butterfly(cplx* lo, cplx* hi, const cplx* tw, std::size_t count) {
  std::size_t j = 0;
  for (; j + 2 <= count; j += 2) {
    const __m256d h = _mm256_loadu_pd(dptr(hi + j));
    const __m256d l = _mm256_loadu_pd(dptr(lo + j));
    const __m256d t = cmul(_mm256_loadu_pd(dptr(tw + j)), h);
    _mm256_storeu_pd(dptr(hi + j), _mm256_sub_pd(l, t));
    _mm256_storeu_pd(dptr(lo + j), _mm256_add_pd(l, t));
  }
  for (; j < count; ++j) {
    const cplx t = tw[j] * hi[j];
    hi[j] = lo[j] - t;
    lo[j] += t;
  }
}

void multiply(cplx* x, const cplx* y, std::size_t count) {
  std::size_t j = 0;
  for (; j + 2 <= count; j += 2) {
    const __m256d r = cmul(_mm256_loadu_pd(dptr(x + j)), _mm256_loadu_pd(dptr(y + j)));
    _mm256_storeu_pd(dptr(x + j), r);
  }
  for (; j < count; ++j) x[j] *= y[j];
}

void scale(cplx* x, double s, std::size_t count) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t j = 0;
  for (; j + 2 <= count; j += 2) {
    _mm256_storeu_pd(dptr(x + j), _mm256_mul_pd(_mm256_loadu_pd(dptr(x + j)), sv));
  }
  for (; j < count; ++j) x[j] *= s;
}

void accumulate_cross(const cplx* a, const cplx* b, cplx* cross, double* power_a, double* power_b,
                      std::size_t count) {
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    const __m256d a0 = _mm256_loadu_pd(dptr(a + j));
    const __m256d a1 = _mm256_loadu_pd(dptr(a + j + 2));
    const __m256d b0 = _mm256_loadu_pd(dptr(b + j));
    const __m256d b1 = _mm256_loadu_pd(dptr(b + j + 2));

    // b * conj(a): (br ar + bi ai, bi ar - br ai)
    const __m256d c0 = _mm256_fmsubadd_pd(
        b0, _mm256_movedup_pd(a0), _mm256_mul_pd(_mm256_permute_pd(b0, 0x5), _mm256_permute_pd(a0, 0xF)));
    const __m256d c1 = _mm256_fmsubadd_pd(
        b1, _mm256_movedup_pd(a1), _mm256_mul_pd(_mm256_permute_pd(b1, 0x5), _mm256_permute_pd(a1, 0xF)));
    _mm256_storeu_pd(dptr(cross + j), _mm256_add_pd(_mm256_loadu_pd(dptr(cross + j)), c0));
    _mm256_storeu_pd(dptr(cross + j + 2), _mm256_add_pd(_mm256_loadu_pd(dptr(cross + j + 2)), c1));

    // hadd pairs, then reorder (s0, s2, s1, s3) -> (s0, s1, s2, s3)
    const __m256d pa = _mm256_permute4x64_pd(
        _mm256_hadd_pd(_mm256_mul_pd(a0, a0), _mm256_mul_pd(a1, a1)), 0xD8);
    const __m256d pb = _mm256_permute4x64_pd(
        _mm256_hadd_pd(_mm256_mul_pd(b0, b0), _mm256_mul_pd(b1, b1)), 0xD8);
    _mm256_storeu_pd(power_a + j, _mm256_add_pd(_mm256_loadu_pd(power_a + j), pa));
    _mm256_storeu_pd(power_b + j, _mm256_add_pd(_mm256_loadu_pd(power_b + j), pb));
  }
  for (; j < count; ++j) {
    cross[j] += b[j] * std::conj(a[j]);
    power_a[j] += std::norm(a[j]);
    power_b[j] += std::norm(b[j]);
  }
}

double sum_squares(const double* x, std::size_t count) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 8 <= count; j += 8) {
    const __m256d u = _mm256_loadu_pd(x + j);
    const __m256d v = _mm256_loadu_pd(x + j + 4);
    acc0 = _mm256_fmadd_pd(u, u, acc0);
    acc1 = _mm256_fmadd_pd(v, v, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; j < count; ++j) acc += x[j] * x[j];
  return acc;
}

double sum_abs_squares(const cplx* z, std::size_t count) { return sum_squares(dptr(z), 2 * count); }

double residual_energy(const cplx* w, const cplx* v, const cplx* lambda, std::size_t count) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 2 <= count; j += 2) {
    const __m256d p = cmul(_mm256_loadu_pd(dptr(lambda + j)), _mm256_loadu_pd(dptr(v + j)));
    const __m256d e = _mm256_sub_pd(_mm256_loadu_pd(dptr(w + j)), p);
    acc = _mm256_fmadd_pd(e, e, acc);
  }
  double total = hsum(acc);
  for (; j < count; ++j) total += std::norm(w[j] - lambda[j] * v[j]);
  return total;
}

constexpr KernelTable kAvx2{
    "avx2", &butterfly, &multiply, &scale, &accumulate_cross, &sum_squares, &sum_abs_squares,
    &residual_energy,
};

}  // namespace

namespace detail {
const KernelTable* avx2_table() { return &kAvx2; }
}  // namespace detail

}  // namespace fourlin::simd
