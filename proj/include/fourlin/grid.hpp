#pragma once

// Periodic grids on [0,1]^d, signed Fourier modes and the field containers
// that live on them. Storage is row-major with the last axis fastest.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fourlin/error.hpp"

namespace fourlin {

using cplx = std::complex<double>;

// A point of Z^d indexing the basis function exp(2 pi i <m, x>).
using Mode = std::vector<std::int64_t>;

std::int64_t linf_norm(const Mode& m);
std::int64_t l2_norm_sq(const Mode& m);
Mode negate(const Mode& m);
std::string to_string(const Mode& m);

class GridSpec {
 public:
  GridSpec() = default;
  // Rejects d < 1, N < 1 and point counts that overflow std::size_t.
  GridSpec(int d, std::int64_t n);

  int dim() const noexcept { return d_; }
  std::int64_t side() const noexcept { return n_; }
  std::size_t points() const noexcept { return points_; }

  // Smallest and largest signed frequency stored per axis.
  std::int64_t min_mode() const noexcept { return -(n_ / 2); }
  std::int64_t max_mode() const noexcept { return (n_ + 1) / 2 - 1; }

  // Nyquist components exist only on even grids; see is_nyquist().
  bool has_nyquist() const noexcept { return n_ % 2 == 0; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int d_ = 1;
  std::int64_t n_ = 1;
  std::size_t points_ = 1;
};

// Per-axis signed frequency of array index idx (0 <= idx < N).
constexpr std::int64_t signed_frequency(std::int64_t idx, std::int64_t n) {
  return idx < (n + 1) / 2 ? idx : idx - n;
}

// Array index of a representable signed frequency.
constexpr std::int64_t frequency_index(std::int64_t m, std::int64_t n) { return m >= 0 ? m : m + n; }

Mode mode_of_index(std::span<const std::int64_t> idx, const GridSpec& spec);
std::vector<std::int64_t> index_of_mode(const Mode& m, const GridSpec& spec);

std::size_t flat_index(std::span<const std::int64_t> idx, const GridSpec& spec);
std::vector<std::int64_t> unflatten(std::size_t flat, const GridSpec& spec);

Mode mode_of_flat(std::size_t flat, const GridSpec& spec);
std::size_t flat_of_mode(const Mode& m, const GridSpec& spec);

bool is_representable(const Mode& m, const GridSpec& spec);
// True when some component equals -N/2 on an even grid.
bool is_nyquist(const Mode& m, const GridSpec& spec);

// Flat index of the grid mode that m aliases to (componentwise m mod N).
std::size_t aliased_flat_index(const Mode& m, const GridSpec& spec);

// Flat index of -m (mod N) for the mode stored at `flat`.
std::size_t conjugate_flat_index(std::size_t flat, const GridSpec& spec);

// Real samples on the grid.
class GridField {
 public:
  GridField() = default;
  explicit GridField(GridSpec spec);  // zero field
  // Rejects a length mismatch and non-finite entries.
  GridField(GridSpec spec, std::vector<double> values);

  const GridSpec& spec() const noexcept { return spec_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

// Complex coefficients indexed like the grid; position idx holds the
// coefficient of mode_of_index(idx).
class SpectrumField {
 public:
  SpectrumField() = default;
  explicit SpectrumField(GridSpec spec);
  SpectrumField(GridSpec spec, std::vector<cplx> coeffs);

  const GridSpec& spec() const noexcept { return spec_; }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  std::span<cplx> coeffs() noexcept { return coeffs_; }
  cplx operator[](std::size_t i) const { return coeffs_[i]; }
  cplx& operator[](std::size_t i) { return coeffs_[i]; }

  // Coefficient of a representable mode.
  cplx at(const Mode& m) const { return coeffs_[flat_of_mode(m, spec_)]; }

 private:
  GridSpec spec_;
  std::vector<cplx> coeffs_;
};

void require_finite(std::span<const double> values, const char* what);
void require_finite(std::span<const cplx> values, const char* what);

}  // namespace fourlin
