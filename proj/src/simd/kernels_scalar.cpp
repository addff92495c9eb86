#include "fourlin/simd/kernels.hpp"

namespace fourlin::simd {
namespace {

void butterfly(cplx* lo, cplx* hi, const cplx* tw, std::size_t count) {
  for (std::size_t j = 0; j < count; ++j) {
    const double tr = tw[j].real() * hi[j].real() - tw[j].imag() * hi[j].imag();
    const double ti = tw[j].real() * hi[j].imag() + tw[j].imag() * hi[j].real();
    const double lr = lo[j].real();
    const double li = lo[j].imag();
    hi[j] = {lr - tr, li - ti};
    lo[j] = {lr + tr, li + ti};
  }
}

void multiply(cplx* x, const cplx* y, std::size_t count) {
  for (std::size_t j = 0; j < count; ++j) {
    const double re = x[j].real() * y[j].real() - x[j].imag() * y[j].imag();
    const double im = x[j].real() * y[j].imag() + x[j].imag() * y[j].real();
    x[j] = {re, im};
  }
}

void scale(cplx* x, double s, std::size_t count) {
  for (std::size_t j = 0; j < count; ++j) x[j] = {x[j].real() * s, x[j].imag() * s};
}

void accumulate_cross(const cplx* a, const cplx* b, cplx* cross, double* power_a, double* power_b,
                      std::size_t count) {
  for (std::size_t j = 0; j < count; ++j) {
    const double ar = a[j].real(), ai = a[j].imag();
    const double br = b[j].real(), bi = b[j].imag();
    cross[j] += cplx{br * ar + bi * ai, bi * ar - br * ai};
    power_a[j] += ar * ar + ai * ai;
    power_b[j] += br * br + bi * bi;
  }
}

double sum_squares(const double* x, std::size_t count) {
  double acc = 0.0;
  for (std::size_t j = 0; j < count; ++j) acc += x[j] * x[j];
  return acc;
}

double sum_abs_squares(const cplx* z, std::size_t count) {
  double acc = 0.0;
  for (std::size_t j = 0; j < count; ++j) acc += z[j].real() * z[j].real() + z[j].imag() * z[j].imag();
  return acc;
}

double residual_energy(const cplx* w, const cplx* v, const cplx* lambda, std::size_t count) {
  double acc = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double pr = lambda[j].real() * v[j].real() - lambda[j].imag() * v[j].imag();
    const double pi = lambda[j].real() * v[j].imag() + lambda[j].imag() * v[j].real();
    const double er = w[j].real() - pr;
    const double ei = w[j].imag() - pi;
    acc += er * er + ei * ei;
  }
  return acc;
}

constexpr KernelTable kScalar{
    "scalar", &butterfly, &multiply, &scale, &accumulate_cross, &sum_squares, &sum_abs_squares,
    &residual_energy,
};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace fourlin::simd
