#include "fourlin/spectral.hpp"

#include <cmath>
#include <string>

#include "fourlin/fft.hpp"
#include "fourlin/simd/kernels.hpp"

namespace fourlin {
namespace {

// exp(sign * 2 pi i r / n) for an integer phase reduced mod n.
cplx unit_root(std::int64_t r, std::int64_t n, double sign) {
  const std::int64_t q = ((r % n) + n) % n;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(n);
  return {std::cos(angle), sign * std::sin(angle)};
}

}  // namespace

SpectrumField dft_forward(const GridSpec& spec, std::span<const cplx> values) {
  require(values.size() == spec.points(), "field length must equal N^d");
  require_finite(values, "DFT input");
  std::vector<cplx> buf(values.begin(), values.end());
  fft_plan(spec)->transform(buf, FftDirection::forward);
  simd::active_kernels().scale(buf.data(), 1.0 / static_cast<double>(spec.points()), buf.size());
  return SpectrumField(spec, std::move(buf));
}

SpectrumField dft_forward(const GridField& u) {
  const auto vals = u.values();
  require_finite(vals, "DFT input");
  std::vector<cplx> buf(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) buf[i] = {vals[i], 0.0};
  fft_plan(u.spec())->transform(buf, FftDirection::forward);
  simd::active_kernels().scale(buf.data(), 1.0 / static_cast<double>(u.spec().points()), buf.size());
  // Real input: make coeff(-m) == conj(coeff(m)) hold bit-exactly.
  for (std::size_t f = 0; f < buf.size(); ++f) {
    const std::size_t p = conjugate_flat_index(f, u.spec());
    if (p < f) continue;
    if (p == f) {
      buf[f] = {buf[f].real(), 0.0};
    } else {
      const cplx c = 0.5 * (buf[f] + std::conj(buf[p]));
      buf[f] = c;
      buf[p] = std::conj(c);
    }
  }
  return SpectrumField(u.spec(), std::move(buf));
}

std::vector<cplx> dft_inverse_complex(const SpectrumField& s) {
  std::vector<cplx> buf(s.coeffs().begin(), s.coeffs().end());
  fft_plan(s.spec())->transform(buf, FftDirection::inverse);
  return buf;
}

GridField dft_inverse(const SpectrumField& s) {
  const auto buf = dft_inverse_complex(s);
  double norm_sq = 0.0;
  double max_imag = 0.0;
  std::vector<double> out(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) {
    out[i] = buf[i].real();
    norm_sq += std::norm(buf[i]);
    max_imag = std::max(max_imag, std::abs(buf[i].imag()));
  }
  const double norm = std::sqrt(norm_sq / static_cast<double>(buf.size()));
  if (max_imag > kImagResidueTol * norm) {
    fail(ErrorKind::symmetry_violation,
         "inverse transform is not real: imaginary residue " + std::to_string(max_imag) +
             " exceeds tolerance (spectrum is not Hermitian)");
  }
  return GridField(s.spec(), std::move(out));
}

SpectrumField dft_naive(const GridSpec& spec, std::span<const cplx> values, std::size_t cap) {
  require(values.size() == spec.points(), "field length must equal N^d");
  if (spec.points() > cap) {
    fail(ErrorKind::oracle_size, "naive DFT limited to " + std::to_string(cap) + " points, got " +
                                     std::to_string(spec.points()));
  }
  require_finite(values, "DFT input");
  const std::int64_t n = spec.side();
  const std::size_t total = spec.points();
  std::vector<std::vector<std::int64_t>> idx(total);
  for (std::size_t f = 0; f < total; ++f) idx[f] = unflatten(f, spec);

  std::vector<cplx> out(total);
  for (std::size_t mf = 0; mf < total; ++mf) {
    const Mode m = mode_of_index(idx[mf], spec);
    cplx acc{};
    for (std::size_t xf = 0; xf < total; ++xf) {
      // <m, x> N = sum_j m_j idx_j, reduced mod N before taking the phase.
      std::int64_t phase = 0;
      for (std::size_t j = 0; j < m.size(); ++j) phase += m[j] * idx[xf][j];
      acc += values[xf] * unit_root(phase, n, -1.0);
    }
    out[mf] = acc / static_cast<double>(total);
  }
  return SpectrumField(spec, std::move(out));
}

SpectrumField dft_naive(const GridField& u, std::size_t cap) {
  std::vector<cplx> vals(u.values().begin(), u.values().end());
  return dft_naive(u.spec(), vals, cap);
}

double hermitian_defect(const SpectrumField& s) {
  double worst = 0.0;
  const auto c = s.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::size_t j = conjugate_flat_index(i, s.spec());
    worst = std::max(worst, std::abs(c[j] - std::conj(c[i])));
  }
  return worst;
}

double grid_l2_norm_sq(const GridField& u) {
  const auto v = u.values();
  return simd::active_kernels().sum_squares(v.data(), v.size()) / static_cast<double>(v.size());
}

double grid_l2_norm_sq(const GridSpec& spec, std::span<const cplx> values) {
  require(values.size() == spec.points(), "field length must equal N^d");
  return simd::active_kernels().sum_abs_squares(values.data(), values.size()) /
         static_cast<double>(values.size());
}

double spectral_energy(const SpectrumField& s) {
  const auto c = s.coeffs();
  return simd::active_kernels().sum_abs_squares(c.data(), c.size());
}

double sobolev_axis_weight(std::int64_t m, int s, double frequency_scale) {
  const double w = frequency_scale * static_cast<double>(m);
  const double w2 = w * w;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= s; ++k) {
    term *= w2;
    sum += term;
  }
  return sum;
}

double sobolev_weight(const Mode& m, int s, double frequency_scale) {
  require(s >= 0, "Sobolev order must be non-negative");
  double w = 1.0;
  for (auto c : m) w *= sobolev_axis_weight(c, s, frequency_scale);
  return w;
}

double sobolev_norm_sq(const SpectrumField& s_field, int s, double frequency_scale) {
  require(s >= 0, "Sobolev order must be non-negative");
  const auto& spec = s_field.spec();
  const auto n = static_cast<std::size_t>(spec.side());
  std::vector<double> axis(n);
  for (std::size_t i = 0; i < n; ++i) {
    axis[i] = sobolev_axis_weight(signed_frequency(static_cast<std::int64_t>(i), spec.side()), s,
                                  frequency_scale);
  }
  const auto c = s_field.coeffs();
  double total = 0.0;
  for (std::size_t f = 0; f < c.size(); ++f) {
    std::size_t rest = f;
    double w = 1.0;
    for (int j = 0; j < spec.dim(); ++j) {
      w *= axis[rest % n];
      rest /= n;
    }
    total += w * std::norm(c[f]);
  }
  return total;
}

cplx grid_character_sum(const Mode& k, const Mode& m, const GridSpec& spec) {
  require(k.size() == static_cast<std::size_t>(spec.dim()) && m.size() == k.size(),
          "mode dimension mismatch");
  const std::int64_t n = spec.side();
  cplx acc{};
  std::vector<std::int64_t> idx(k.size(), 0);
  for (std::size_t f = 0; f < spec.points(); ++f) {
    std::int64_t phase = 0;
    for (std::size_t j = 0; j < k.size(); ++j) phase += ((k[j] - m[j]) % n) * idx[j];
    acc += unit_root(phase, n, 1.0);
    for (std::size_t j = k.size(); j-- > 0;) {
      if (++idx[j] < n) break;
      idx[j] = 0;
    }
  }
  return acc / static_cast<double>(spec.points());
}

}  // namespace fourlin
