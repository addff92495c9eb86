#include "fourlin/random_fields.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include "fourlin/rng.hpp"
#include "fourlin/spectral.hpp"

namespace fourlin {
namespace {

std::mutex g_warn_mu;
WarningHandler g_warn = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };

}  // namespace

void set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(g_warn_mu);
  g_warn = handler ? std::move(handler) : [](const std::string&) {};
}

void emit_warning(const std::string& message) {
  std::lock_guard lock(g_warn_mu);
  g_warn(message);
}

std::vector<std::string> grf_warnings(const GrfConfig& cfg) {
  std::vector<std::string> out;
  const double half_d = 0.5 * cfg.spec.dim();
  if (!(cfg.gamma > half_d)) {
    std::ostringstream os;
    os << "gamma = " << cfg.gamma << " <= d/2 = " << half_d
       << ": samples leave the smooth regime (infinite expected Sobolev norm as N grows)";
    out.push_back(os.str());
  }
  return out;
}

double spectral_std(const Mode& m, const GrfConfig& cfg) {
  const double eig = 4.0 * std::numbers::pi * std::numbers::pi * static_cast<double>(l2_norm_sq(m));
  return cfg.sigma * std::pow(eig + 1.0, -0.5 * cfg.gamma);
}

SpectrumField sample_grf_spectrum(const GrfConfig& cfg) {
  require(cfg.sigma > 0.0, "GRF sigma must be positive");
  require(cfg.gamma >= 0.0 && std::isfinite(cfg.gamma), "GRF gamma must be a finite non-negative number");
  for (const auto& w : grf_warnings(cfg)) emit_warning(w);

  const GridSpec& spec = cfg.spec;
  SpectrumField out(spec);
  auto c = out.coeffs();
  Rng rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t f = 0; f < spec.points(); ++f) {
    const std::size_t partner = conjugate_flat_index(f, spec);
    if (partner < f) continue;
    const double sd = spectral_std(mode_of_flat(f, spec), cfg);
    if (partner == f) {
      // Self-conjugate modes (zero, Nyquist corners) carry a real coefficient.
      c[f] = {sd * gauss(rng), 0.0};
    } else {
      const double half = sd * std::numbers::sqrt2 / 2.0;
      const double re = half * gauss(rng);
      const double im = half * gauss(rng);
      c[f] = {re, im};
      c[partner] = {re, -im};
    }
  }
  if (cfg.zero_mean) c[0] = {};
  return out;
}

GridField sample_grf(const GrfConfig& cfg) { return dft_inverse(sample_grf_spectrum(cfg)); }

GrfConfig noise_config(const GridSpec& spec, std::uint64_t seed, bool zero_mean) {
  GrfConfig cfg;
  cfg.spec = spec;
  cfg.gamma = 3.0;
  cfg.sigma = 1.0;
  cfg.seed = seed;
  cfg.zero_mean = zero_mean;
  return cfg;
}

GridField sample_noise(const GridSpec& spec, std::uint64_t seed, bool zero_mean) {
  return sample_grf(noise_config(spec, seed, zero_mean));
}

}  // namespace fourlin
