#pragma once

// Forward/inverse DFT with the grid-average normalization
//   coeff(m) = N^-d sum_x u(x) exp(-2 pi i <m, x>),   u(x) = sum_m coeff(m) exp(2 pi i <m, x>),
// grid and Sobolev norms, and the discrete character sum.

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "fourlin/grid.hpp"

namespace fourlin {

inline constexpr std::size_t kDefaultOracleCap = 4096;
inline constexpr double kImagResidueTol = 1e-12;

SpectrumField dft_forward(const GridField& u);
SpectrumField dft_forward(const GridSpec& spec, std::span<const cplx> values);

// Real realization; the imaginary residue must stay below
// kImagResidueTol * ||result||, otherwise symmetry_violation is thrown.
GridField dft_inverse(const SpectrumField& s);
std::vector<cplx> dft_inverse_complex(const SpectrumField& s);

// Direct O(N^{2d}) evaluation of the forward sum; oracle for tests.
SpectrumField dft_naive(const GridField& u, std::size_t cap = kDefaultOracleCap);
SpectrumField dft_naive(const GridSpec& spec, std::span<const cplx> values,
                        std::size_t cap = kDefaultOracleCap);

// max_m |coeff(-m) - conj(coeff(m))|
double hermitian_defect(const SpectrumField& s);

// N^-d sum_x u(x)^2
double grid_l2_norm_sq(const GridField& u);
double grid_l2_norm_sq(const GridSpec& spec, std::span<const cplx> values);

// sum_m |coeff(m)|^2
double spectral_energy(const SpectrumField& s);

// Per-axis factor sum_{k=0..s} (scale * m)^{2k}; the Sobolev weight of a
// mode is the product over axes.
double sobolev_axis_weight(std::int64_t m, int s, double frequency_scale);
double sobolev_weight(const Mode& m, int s, double frequency_scale = 2.0 * std::numbers::pi);

// sum_m |coeff(m)|^2 prod_j sum_{k_j<=s} (2 pi m_j)^{2 k_j}, i.e. the H^s norm
// with multi-indices |k|_inf <= s. frequency_scale = 1 gives the
// integer-frequency variant.
double sobolev_norm_sq(const SpectrumField& s_field, int s,
                       double frequency_scale = 2.0 * std::numbers::pi);

// N^-d sum_{x in G} exp(2 pi i <k - m, x>) by direct summation.
cplx grid_character_sum(const Mode& k, const Mode& m, const GridSpec& spec);

}  // namespace fourlin
