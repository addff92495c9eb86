#include "fourlin/bench/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "fourlin/estimator.hpp"
#include "fourlin/parallel.hpp"
#include "fourlin/rng.hpp"
#include "fourlin/spectral.hpp"

namespace fourlin::bench {

void SparseSpectrum::add(const Mode& m, cplx c) {
  require(static_cast<int>(m.size()) == d, "mode dimension differs from the spectrum");
  terms[m] += c;
}

double SparseSpectrum::l2_norm_sq() const {
  double out = 0.0;
  for (const auto& [m, c] : terms) out += std::norm(c);
  return out;
}

double SparseSpectrum::sobolev_norm_sq(int s, double frequency_scale) const {
  double out = 0.0;
  for (const auto& [m, c] : terms) out += std::norm(c) * sobolev_weight(m, s, frequency_scale);
  return out;
}

GridField SparseSpectrum::sample(const GridSpec& spec) const {
  require(spec.dim() == d, "grid dimension differs from the spectrum");
  const std::int64_t n = spec.side();
  std::vector<double> out(spec.points());
  double max_imag = 0.0;
  double norm_sq = 0.0;
  for (std::size_t f = 0; f < spec.points(); ++f) {
    const auto idx = unflatten(f, spec);
    cplx acc{};
    for (const auto& [m, c] : terms) {
      std::int64_t phase = 0;
      for (std::size_t j = 0; j < idx.size(); ++j) phase = (phase + (m[j] % n) * idx[j]) % n;
      phase = (phase + n) % n;
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(n);
      acc += c * cplx{std::cos(angle), std::sin(angle)};
    }
    out[f] = acc.real();
    max_imag = std::max(max_imag, std::abs(acc.imag()));
    norm_sq += std::norm(acc);
  }
  const double rms = std::sqrt(norm_sq / static_cast<double>(spec.points()));
  if (max_imag > 1e-12 * std::max(rms, 1e-300) && max_imag > 1e-300) {
    fail(ErrorKind::symmetry_violation, "sparse spectrum does not describe a real function");
  }
  return GridField(spec, std::move(out));
}

SparseSpectrum scaled_psi(int d, std::int64_t k, double gamma) {
  SparseSpectrum out;
  out.d = d;
  Mode m(static_cast<std::size_t>(d), 0);
  m[0] = k;
  if (k == 0) {
    out.add(m, gamma);
  } else {
    out.add(m, gamma * std::numbers::sqrt2 / 2.0);
    out.add(negate(m), gamma * std::numbers::sqrt2 / 2.0);
  }
  return out;
}

double FiniteSupportDistribution::total_weight() const {
  double out = 0.0;
  for (const auto& a : atoms) out += a.weight;
  return out;
}

double FiniteSupportDistribution::gamma(std::int64_t k) const {
  const double base = B / std::sqrt(static_cast<double>(s) + 1.0);
  return k == 0 ? base : base / std::pow(static_cast<double>(std::abs(k)), s);
}

FiniteSupportDistribution build_adversarial_distribution(std::size_t n, std::int64_t N, std::int64_t K, int s,
                                                         double B, std::uint64_t xi_seed, int d) {
  require(n >= 1, "construction needs n >= 1");
  require(N > 1, "construction needs N > 1");
  require(K >= 0, "construction needs K >= 0");
  require(d >= 1 && 2 * s > d, "construction needs s > d/2");
  require(B > 0.0 && std::isfinite(B), "construction needs B > 0");
  require(std::pow(static_cast<double>(N), s) >= std::numbers::sqrt2 * B * (1.0 - 1e-12),
          "construction needs N^s >= sqrt(2) B");

  FiniteSupportDistribution dist;
  dist.d = d;
  dist.n = n;
  dist.N = N;
  dist.K = K;
  dist.s = s;
  dist.B = B;
  dist.M = 2 * static_cast<std::int64_t>(n);
  for (std::int64_t k = 1; k <= dist.M; ++k) {
    if (k % N != 0) dist.J.push_back(k);
  }
  dist.high_mode = (K + 1) % N != 0 ? K + 1 : K + 2;

  std::set<std::int64_t> signed_modes(dist.J.begin(), dist.J.end());
  signed_modes.insert(N);
  signed_modes.insert(dist.high_mode);
  Rng rng(xi_seed);
  std::bernoulli_distribution coin(0.5);
  for (auto k : signed_modes) dist.xi[k] = coin(rng) ? 1 : -1;

  const double third = 1.0 / 3.0;
  const double block = third / static_cast<double>(dist.J.size());
  for (auto k : dist.J) {
    const double g = dist.gamma(k);
    dist.atoms.push_back({block, scaled_psi(d, k, g), scaled_psi(d, k, dist.xi[k] * g), "J"});
  }
  dist.atoms.push_back({third, scaled_psi(d, 0, dist.gamma(0)), scaled_psi(d, N, dist.xi[N] * dist.gamma(N)), "zero"});
  const auto h = dist.high_mode;
  dist.atoms.push_back({third, scaled_psi(d, h, dist.gamma(h)), scaled_psi(d, h, dist.xi[h] * dist.gamma(h)), "high"});

  const double budget = B * B * (1.0 + 1e-9);
  for (const auto& a : dist.atoms) {
    if (a.v.sobolev_norm_sq(s, 1.0) > budget || a.w.sobolev_norm_sq(s, 1.0) > budget) {
      fail(ErrorKind::invalid_argument, "atom '" + a.label + "' exceeds the Sobolev budget B");
    }
  }
  return dist;
}

double exact_risk(const Multiplier& T, const FiniteSupportDistribution& dist) {
  double risk = 0.0;
  for (const auto& a : dist.atoms) {
    // ||T v - w||^2 over the union of both supports.
    std::map<Mode, cplx> diff;
    for (const auto& [m, c] : a.v.terms) diff[m] += T(m) * c;
    for (const auto& [m, c] : a.w.terms) diff[m] -= c;
    double e = 0.0;
    for (const auto& [m, c] : diff) e += std::norm(c);
    risk += a.weight * e;
  }
  return risk;
}

double exact_risk(const DiagonalOperator& T, const FiniteSupportDistribution& dist) {
  require(T.dim() == dist.d, "operator and distribution dimensions differ");
  return exact_risk([&T](const Mode& m) { return T.lambda(m); }, dist);
}

Multiplier comparator(const FiniteSupportDistribution& dist) {
  return [xi = dist.xi](const Mode& m) -> cplx {
    for (std::size_t j = 1; j < m.size(); ++j) {
      if (m[j] != 0) return 0.0;
    }
    const auto it = xi.find(std::abs(m[0]));
    return m[0] == 0 || it == xi.end() ? 0.0 : static_cast<double>(it->second);
  };
}

std::vector<std::size_t> sample_atoms(const FiniteSupportDistribution& dist, std::size_t n, std::uint64_t seed) {
  require(!dist.atoms.empty(), "distribution has no atoms");
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& a : dist.atoms) cumulative.push_back(acc += a.weight);
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, acc);
  std::vector<std::size_t> out(n);
  for (auto& i : out) {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), unif(rng));
    i = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), dist.atoms.size() - 1);
  }
  return out;
}

Dataset grid_dataset(const FiniteSupportDistribution& dist, const std::vector<std::size_t>& idx) {
  Dataset data;
  data.spec = GridSpec(dist.d, dist.N);
  for (auto i : idx) {
    data.inputs.push_back(dist.atoms.at(i).v.sample(data.spec));
    data.outputs.push_back(dist.atoms.at(i).w.sample(data.spec));
  }
  return data;
}

double lower_bound_rhs(std::size_t n, std::int64_t N, std::int64_t K, int s, double B) {
  const double c = B * B / (3.0 * (s + 1.0));
  return c * (1.0 / (8.0 * static_cast<double>(n)) + 1.0 / std::pow(static_cast<double>(N), 2 * s) +
              2.0 / std::pow(static_cast<double>(K + 2), 2 * s));
}

double lower_bound_rhs_swapped(std::size_t n, std::int64_t N, std::int64_t K, int s, double B) {
  const double c = B * B / (3.0 * (s + 1.0));
  return c * (1.0 / (8.0 * static_cast<double>(n)) + 2.0 / std::pow(static_cast<double>(N), 2 * s) +
              1.0 / std::pow(static_cast<double>(K + 2), 2 * s));
}

LowerBoundReport verify_lower_bound(std::size_t n, std::int64_t N, std::int64_t K, int s, double B,
                                    std::size_t trials, std::uint64_t seed, int d) {
  require(trials >= 1, "lower-bound harness needs at least one trial");
  std::vector<double> excess(trials);
  parallel_for(trials, [&](std::size_t t) {
    const std::uint64_t ts = derive_seed(seed, t);
    const auto dist = build_adversarial_distribution(n, N, K, s, B, derive_seed(ts, Stream::xi), d);
    const Dataset data = grid_dataset(dist, sample_atoms(dist, n, derive_seed(ts, Stream::sampling)));
    FitConfig cfg;
    cfg.K = K;
    cfg.C = 1.0;
    const FitResult fitted = fit_closed_form(data, cfg);
    excess[t] = exact_risk(fitted.op, dist) - exact_risk(comparator(dist), dist);
  });

  LowerBoundReport r;
  r.n = n;
  r.N = N;
  r.K = K;
  r.s = s;
  r.B = B;
  r.trials = trials;
  double sum = 0.0;
  for (double e : excess) sum += e;
  r.mean_excess = sum / static_cast<double>(trials);
  double ss = 0.0;
  for (double e : excess) ss += (e - r.mean_excess) * (e - r.mean_excess);
  r.stderr_excess = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials)) : 0.0;
  r.min_excess = *std::min_element(excess.begin(), excess.end());
  r.bound = lower_bound_rhs(n, N, K, s, B);
  r.bound_swapped = lower_bound_rhs_swapped(n, N, K, s, B);
  return r;
}

}  // namespace fourlin::bench
