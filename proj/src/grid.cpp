#include "fourlin/grid.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fourlin {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::non_finite: return "non_finite";
    case ErrorKind::resolution_too_coarse: return "resolution_too_coarse";
    case ErrorKind::symmetry_violation: return "symmetry_violation";
    case ErrorKind::oracle_size: return "oracle_size";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::degenerate_target: return "degenerate_target";
    case ErrorKind::io: return "io";
    case ErrorKind::format: return "format";
  }
  return "unknown";
}

std::int64_t linf_norm(const Mode& m) {
  std::int64_t out = 0;
  for (auto c : m) out = std::max(out, c < 0 ? -c : c);
  return out;
}

std::int64_t l2_norm_sq(const Mode& m) {
  std::int64_t out = 0;
  for (auto c : m) out += c * c;
  return out;
}

Mode negate(const Mode& m) {
  Mode out(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) out[j] = -m[j];
  return out;
}

std::string to_string(const Mode& m) {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < m.size(); ++j) os << (j ? "," : "") << m[j];
  os << ')';
  return os.str();
}

GridSpec::GridSpec(int d, std::int64_t n) : d_(d), n_(n) {
  require(d >= 1, "grid dimension must be positive");
  require(n >= 1, "grid side must be positive");
  std::size_t total = 1;
  const auto side = static_cast<std::size_t>(n);
  for (int j = 0; j < d; ++j) {
    require(total <= std::numeric_limits<std::size_t>::max() / side,
            "grid point count N^d overflows the address space");
    total *= side;
  }
  points_ = total;
}

Mode mode_of_index(std::span<const std::int64_t> idx, const GridSpec& spec) {
  require(idx.size() == static_cast<std::size_t>(spec.dim()), "index dimension mismatch");
  Mode m(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    require(idx[j] >= 0 && idx[j] < spec.side(), "grid index out of range");
    m[j] = signed_frequency(idx[j], spec.side());
  }
  return m;
}

bool is_representable(const Mode& m, const GridSpec& spec) {
  if (m.size() != static_cast<std::size_t>(spec.dim())) return false;
  for (auto c : m) {
    if (c < spec.min_mode() || c > spec.max_mode()) return false;
  }
  return true;
}

bool is_nyquist(const Mode& m, const GridSpec& spec) {
  if (!spec.has_nyquist()) return false;
  for (auto c : m) {
    if (c == -spec.side() / 2) return true;
  }
  return false;
}

std::vector<std::int64_t> index_of_mode(const Mode& m, const GridSpec& spec) {
  require(is_representable(m, spec), "mode " + to_string(m) + " is not representable on the grid");
  std::vector<std::int64_t> idx(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) idx[j] = frequency_index(m[j], spec.side());
  return idx;
}

std::size_t flat_index(std::span<const std::int64_t> idx, const GridSpec& spec) {
  require(idx.size() == static_cast<std::size_t>(spec.dim()), "index dimension mismatch");
  std::size_t flat = 0;
  for (auto i : idx) {
    require(i >= 0 && i < spec.side(), "grid index out of range");
    flat = flat * static_cast<std::size_t>(spec.side()) + static_cast<std::size_t>(i);
  }
  return flat;
}

std::vector<std::int64_t> unflatten(std::size_t flat, const GridSpec& spec) {
  require(flat < spec.points(), "flat index out of range");
  std::vector<std::int64_t> idx(static_cast<std::size_t>(spec.dim()));
  const auto n = static_cast<std::size_t>(spec.side());
  for (int j = spec.dim() - 1; j >= 0; --j) {
    idx[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(flat % n);
    flat /= n;
  }
  return idx;
}

Mode mode_of_flat(std::size_t flat, const GridSpec& spec) {
  const auto idx = unflatten(flat, spec);
  return mode_of_index(idx, spec);
}

std::size_t flat_of_mode(const Mode& m, const GridSpec& spec) {
  const auto idx = index_of_mode(m, spec);
  return flat_index(idx, spec);
}

std::size_t aliased_flat_index(const Mode& m, const GridSpec& spec) {
  require(m.size() == static_cast<std::size_t>(spec.dim()), "mode dimension mismatch");
  const std::int64_t n = spec.side();
  std::size_t flat = 0;
  for (auto c : m) {
    const std::int64_t r = ((c % n) + n) % n;
    flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(r);
  }
  return flat;
}

std::size_t conjugate_flat_index(std::size_t flat, const GridSpec& spec) {
  const auto n = static_cast<std::size_t>(spec.side());
  std::size_t out = 0;
  std::size_t stride = 1;
  for (int j = 0; j < spec.dim(); ++j) {
    const std::size_t i = flat % n;
    flat /= n;
    out += ((n - i) % n) * stride;
    stride *= n;
  }
  return out;
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) fail(ErrorKind::non_finite, std::string(what) + " contains a non-finite value");
  }
}

void require_finite(std::span<const cplx> values, const char* what) {
  for (const cplx& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      fail(ErrorKind::non_finite, std::string(what) + " contains a non-finite value");
    }
  }
}

GridField::GridField(GridSpec spec) : spec_(spec), values_(spec.points(), 0.0) {}

GridField::GridField(GridSpec spec, std::vector<double> values) : spec_(spec), values_(std::move(values)) {
  require(values_.size() == spec_.points(), "field length must equal N^d");
  require_finite(values_, "grid field");
}

SpectrumField::SpectrumField(GridSpec spec) : spec_(spec), coeffs_(spec.points(), cplx{}) {}

SpectrumField::SpectrumField(GridSpec spec, std::vector<cplx> coeffs)
    : spec_(spec), coeffs_(std::move(coeffs)) {
  require(coeffs_.size() == spec_.points(), "spectrum length must equal N^d");
  require_finite(coeffs_, "spectrum");
}

}  // namespace fourlin
