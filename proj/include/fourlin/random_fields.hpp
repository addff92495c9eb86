#pragma once

// Gaussian random fields N(0, sigma^2 (-Laplacian + I)^-gamma) on the torus,
// sampled by spectral synthesis on the grid-representable modes.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fourlin/grid.hpp"

namespace fourlin {

struct GrfConfig {
  GridSpec spec;
  double gamma = 2.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  // Drop the zero mode (mean-free fields). Off by default.
  bool zero_mean = false;
};

// Human-readable warnings for a config (e.g. gamma <= d/2). Empty if none.
std::vector<std::string> grf_warnings(const GrfConfig& cfg);

// Receives warnings emitted by sample_grf. Defaults to stderr.
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler handler);
void emit_warning(const std::string& message);

// Coefficient standard deviation at mode m: sigma (4 pi^2 |m|_2^2 + 1)^(-gamma/2).
double spectral_std(const Mode& m, const GrfConfig& cfg);

// Hermitian-symmetric spectrum with independent coefficients; the field is
// its inverse transform. Deterministic in cfg.
SpectrumField sample_grf_spectrum(const GrfConfig& cfg);
GridField sample_grf(const GrfConfig& cfg);

// Noise used by the data recipe: gamma = 3, sigma = 1.
GrfConfig noise_config(const GridSpec& spec, std::uint64_t seed, bool zero_mean = false);
GridField sample_noise(const GridSpec& spec, std::uint64_t seed, bool zero_mean = false);

}  // namespace fourlin
