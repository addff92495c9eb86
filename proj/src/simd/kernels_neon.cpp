#include <arm_neon.h>

#include "fourlin/simd/kernels.hpp"

namespace fourlin::simd {
namespace {

inline double* dptr(cplx* z) { return reinterpret_cast<double*>(z); }
inline const double* dptr(const cplx* z) { return reinterpret_cast<const double*>(z); }

// One complex value per register.
inline float64x2_t cmul(float64x2_t x, float64x2_t y) {
  const float64x2_t sign = {-1.0, 1.0};
  const float64x2_t yr = vdupq_laneq_f64(y, 0);
  const float64x2_t yi = vdupq_laneq_f64(y, 1);
  const float64x2_t xs = vextq_f64(x, x, 1);
  return vfmaq_f64(vmulq_f64(vmulq_f64(xs, yi), sign), x, yr);
}

void butterfly(cplx* lo, cplx* hi, const cplx* tw, std::size_t count) {
  for (std::size_t j = 0; j < count; ++j) {
    const float64x2_t l = vld1q_f64(dptr(lo + j));
    const float64x2_t t = cmul(vld1q_f64(dptr(tw + j)), vld1q_f64(dptr(hi + j)));
    vst1q_f64(dptr(hi + j), vsubq_f64(l, t));
    vst1q_f64(dptr(lo + j), vaddq_f64(l, t));
  }
}

void multiply(cplx* x, const cplx* y, std::size_t count) {
  for (std::size_t j = 0; j < count; ++j) {
    vst1q_f64(dptr(x + j), cmul(vld1q_f64(dptr(x + j)), vld1q_f64(dptr(y + j))));
  }
}

void scale(cplx* x, double s, std::size_t count) {
  for (std::size_t j = 0; j < count; ++j) vst1q_f64(dptr(x + j), vmulq_n_f64(vld1q_f64(dptr(x + j)), s));
}

void accumulate_cross(const cplx* a, const cplx* b, cplx* cross, double* power_a, double* power_b,
                      std::size_t count) {
  const float64x2_t sign = {1.0, -1.0};
  for (std::size_t j = 0; j < count; ++j) {
    const float64x2_t av = vld1q_f64(dptr(a + j));
    const float64x2_t bv = vld1q_f64(dptr(b + j));
    // b * conj(a) = (br ar + bi ai, bi ar - br ai)
    const float64x2_t ar = vdupq_laneq_f64(av, 0);
    const float64x2_t ai = vdupq_laneq_f64(av, 1);
    const float64x2_t bs = vextq_f64(bv, bv, 1);
    const float64x2_t c = vfmaq_f64(vmulq_f64(vmulq_f64(bs, ai), sign), bv, ar);
    vst1q_f64(dptr(cross + j), vaddq_f64(vld1q_f64(dptr(cross + j)), c));
    power_a[j] += vaddvq_f64(vmulq_f64(av, av));
    power_b[j] += vaddvq_f64(vmulq_f64(bv, bv));
  }
}

double sum_squares(const double* x, std::size_t count) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 2 <= count; j += 2) {
    const float64x2_t u = vld1q_f64(x + j);
    acc = vfmaq_f64(acc, u, u);
  }
  double total = vaddvq_f64(acc);
  for (; j < count; ++j) total += x[j] * x[j];
  return total;
}

double sum_abs_squares(const cplx* z, std::size_t count) { return sum_squares(dptr(z), 2 * count); }

double residual_energy(const cplx* w, const cplx* v, const cplx* lambda, std::size_t count) {
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t j = 0; j < count; ++j) {
    const float64x2_t e =
        vsubq_f64(vld1q_f64(dptr(w + j)), cmul(vld1q_f64(dptr(lambda + j)), vld1q_f64(dptr(v + j))));
    acc = vfmaq_f64(acc, e, e);
  }
  return vaddvq_f64(acc);
}

constexpr KernelTable kNeon{
    "neon", &butterfly, &multiply, &scale, &accumulate_cross, &sum_squares, &sum_abs_squares,
    &residual_energy,
};

}  // namespace

namespace detail {
const KernelTable* neon_table() { return &kNeon; }
}  // namespace detail

}  // namespace fourlin::simd
