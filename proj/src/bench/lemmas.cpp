#include "fourlin/bench/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"

#include "fourlin/bench/adversarial.hpp"
#include "fourlin/estimator.hpp"
#include "fourlin/fourier_operator.hpp"
#include "fourlin/io.hpp"
#include "fourlin/random_fields.hpp"
#include "fourlin/rng.hpp"
#include "fourlin/spectral.hpp"

namespace fourlin::bench {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Accumulates lhs <= rhs cases.
class Tracker {
 public:
  explicit Tracker(std::string name, double tol = kCheckTolerance) : tol_(tol) {
    report_.name = std::move(name);
    report_.worst_slack = std::numeric_limits<double>::infinity();
  }

  template <typename Describe>
  void add(double lhs, double rhs, Describe&& describe) {
    ++report_.cases;
    const double slack = rhs - lhs;
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > tol_ ? std::numeric_limits<double>::infinity() : 0.0);
    report_.worst_ratio = std::max(report_.worst_ratio, ratio);
    const bool violated = lhs > rhs + tol_;
    if (violated && report_.violations++ == 0) report_.witness = describe(lhs, rhs);
    if (slack < report_.worst_slack) {
      report_.worst_slack = slack;
      if (report_.violations == 0) report_.witness = describe(lhs, rhs);
    }
  }

  CheckReport finish() {
    if (report_.cases == 0) report_.worst_slack = 0.0;
    return report_;
  }

 private:
  double tol_;
  CheckReport report_;
};

std::string case_text(const Mode& m, double lhs, double rhs) {
  std::ostringstream os;
  os.precision(17);
  os << "m=" << to_string(m) << " lhs=" << lhs << " rhs=" << rhs;
  return os.str();
}

}  // namespace

void CheckReport::merge(const CheckReport& other) {
  if (other.cases == 0) return;
  if (name.empty()) name = other.name;
  const bool first = cases == 0;
  cases += other.cases;
  worst_ratio = std::max(worst_ratio, other.worst_ratio);
  if (violations == 0 && other.violations > 0) {
    witness = other.witness;
  } else if (violations == 0 && (first || other.worst_slack < worst_slack)) {
    witness = other.witness;
  }
  worst_slack = first ? other.worst_slack : std::min(worst_slack, other.worst_slack);
  violations += other.violations;
}

std::string to_json_line(const CheckReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["passed"] = r.passed();
  j["cases"] = r.cases;
  j["violations"] = r.violations;
  j["worst_slack"] = r.worst_slack;
  j["worst_ratio"] = r.worst_ratio;
  j["witness"] = r.witness;
  return j.dump();
}

CheckReport check_coefficient_decay(const SpectrumField& u, int s, double B) {
  require(s >= 0, "smoothness order must be non-negative");
  const double norm = std::sqrt(sobolev_norm_sq(u, s));
  Tracker t("coefficient_decay");
  if (B > 0.0) {
    t.add(norm, B, [&](double l, double r) { return "||u||_{H^s}=" + format_double(l) + " exceeds B=" + format_double(r); });
  }
  const double scale = (B > 0.0 ? B : norm) / std::pow(kTwoPi, s);
  const GridSpec& spec = u.spec();
  for (std::size_t f = 0; f < spec.points(); ++f) {
    const Mode m = mode_of_flat(f, spec);
    const auto k = linf_norm(m);
    if (k == 0) continue;
    t.add(std::abs(u[f]), scale / std::pow(static_cast<double>(k), s),
          [&](double l, double r) { return case_text(m, l, r); });
  }
  return t.finish();
}

CheckReport check_weighted_sum(const SpectrumField& u, int s) {
  require(s >= 0, "smoothness order must be non-negative");
  const GridSpec& spec = u.spec();
  double lhs = 0.0;
  for (std::size_t f = 0; f < spec.points(); ++f) {
    const double k = static_cast<double>(linf_norm(mode_of_flat(f, spec)));
    lhs += (1.0 + std::pow(k, 2 * s)) * std::norm(u[f]);
  }
  const double rhs = sobolev_norm_sq(u, s);
  Tracker t("weighted_sum", kCheckTolerance * std::max(1.0, rhs));
  t.add(lhs, rhs, [&](double l, double r) { return "sum=" + format_double(l) + " norm_sq=" + format_double(r); });
  return t.finish();
}

CheckReport check_tail_sum(const SpectrumField& u, int s, std::int64_t K) {
  require(s >= 0, "smoothness order must be non-negative");
  require(K >= 1, "tail sum needs K >= 1");
  const GridSpec& spec = u.spec();
  double lhs = 0.0;
  for (std::size_t f = 0; f < spec.points(); ++f) {
    if (linf_norm(mode_of_flat(f, spec)) > K) lhs += std::norm(u[f]);
  }
  const double rhs = sobolev_norm_sq(u, s) / std::pow(static_cast<double>(K), 2 * s);
  Tracker t("tail_sum");
  t.add(lhs, rhs, [&](double l, double r) {
    return "K=" + std::to_string(K) + " tail=" + format_double(l) + " bound=" + format_double(r);
  });
  return t.finish();
}

CheckReport check_aliasing(const SpectrumField& u, std::int64_t N_coarse, const Mode& m) {
  const GridSpec& fine = u.spec();
  require(N_coarse >= 1 && fine.side() % N_coarse == 0, "coarse grid must divide the fine grid");
  require(fine.side() > 2 * N_coarse, "fine grid Nyquist must exceed the coarse side");
  require(static_cast<int>(m.size()) == fine.dim() && linf_norm(m) < N_coarse, "need |m|_inf < N_coarse");

  const GridSpec coarse(fine.dim(), N_coarse);
  const auto values = dft_inverse_complex(u);
  const auto sampled = restrict_to_grid(fine, values, N_coarse);
  const SpectrumField dft = dft_forward(coarse, sampled);
  const cplx observed = dft[aliased_flat_index(m, coarse)];
  const cplx truth = u.at(m);

  cplx alias{};
  double scale = 0.0;
  for (std::size_t f = 0; f < fine.points(); ++f) {
    const Mode k = mode_of_flat(f, fine);
    scale += std::abs(u[f]);
    bool congruent = true;
    for (std::size_t j = 0; j < k.size(); ++j) congruent = congruent && ((k[j] - m[j]) % N_coarse == 0);
    if (congruent && k != m) alias += u[f];
  }
  Tracker t("aliasing", kCheckTolerance + 1e-12 * scale);
  t.add(std::abs(observed - truth), std::abs(alias), [&](double l, double r) {
    return "N=" + std::to_string(N_coarse) + " " + case_text(m, l, r);
  });
  return t.finish();
}

CheckReport check_aliasing_all(const SpectrumField& u, std::int64_t N_coarse) {
  CheckReport all;
  all.name = "aliasing";
  for (const Mode& m : box_modes(u.spec().dim(), N_coarse - 1)) all.merge(check_aliasing(u, N_coarse, m));
  return all;
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Shell term ((2j+1)^d - (2j-1)^d) / j^{2s} = sum_{k odd} 2 C(d,k) 2^{d-k} j^{d-k-2s}.
double shell_term(int d, int s, double j) {
  double out = 0.0;
  for (int k = 1; k <= d; k += 2) out += 2.0 * binomial(d, k) * std::pow(2.0, d - k) * std::pow(j, d - k - 2 * s);
  return out;
}

// Integral of the shell term from J to infinity; every power is below -1.
double shell_integral(int d, int s, double J) {
  double out = 0.0;
  for (int k = 1; k <= d; k += 2) {
    const int p = d - k - 2 * s + 1;
    out += 2.0 * binomial(d, k) * std::pow(2.0, d - k) * std::pow(J, p) / static_cast<double>(-p);
  }
  return out;
}

}  // namespace

LatticeSumReport lattice_tail_sum(int s, int d, std::int64_t cutoff) {
  require(d >= 1 && s >= 0, "lattice sum needs d >= 1 and s >= 0");
  if (2 * s <= d) {
    fail(ErrorKind::non_convergence,
         "lattice sum diverges for 2s <= d (s=" + std::to_string(s) + ", d=" + std::to_string(d) + ")");
  }
  if (cutoff <= 0) {
    cutoff = 16;
    while (shell_integral(d, s, static_cast<double>(cutoff)) >= 1e-6 && cutoff < (std::int64_t{1} << 26)) {
      cutoff *= 2;
    }
  }
  LatticeSumReport r;
  r.d = d;
  r.s = s;
  r.cutoff = cutoff;
  // Smallest terms first.
  for (std::int64_t j = cutoff; j >= 1; --j) r.partial += shell_term(d, s, static_cast<double>(j));
  r.lower = r.partial + shell_integral(d, s, static_cast<double>(cutoff + 1));
  r.upper = r.partial + shell_integral(d, s, static_cast<double>(cutoff));
  r.bound = std::numbers::pi * std::numbers::pi * std::pow(3.0, d - 2);
  return r;
}

CheckReport check_lattice_sum(const LatticeSumReport& r) {
  Tracker t("lattice_sum", 0.0);
  t.add(r.lower, r.bound, [&](double l, double b) {
    std::ostringstream os;
    os.precision(17);
    os << "d=" << r.d << " s=" << r.s << " sum in [" << l << ", " << r.upper << "] bound=" << b;
    return os.str();
  });
  return t.finish();
}

CounterexampleReport high_mode_counterexample(std::int64_t K, std::size_t n, std::uint64_t seed, int d) {
  require(K >= 0 && K <= 3, "counterexample supports 0 <= K <= 3");
  require(n >= 1, "counterexample needs n >= 1");
  require(d >= 1 && d <= 2, "counterexample supports d in {1, 2}");
  const std::int64_t lo = std::int64_t{1} << K;
  const std::int64_t hi = lo * 2;
  const std::int64_t N = hi * 2;
  const GridSpec spec(d, N);

  // One representative per +-m pair: first nonzero component positive.
  std::vector<SparseSpectrum> support;
  for (const Mode& m : box_modes(d, hi - 1)) {
    const auto k = linf_norm(m);
    if (k <= lo || k >= hi) continue;
    const auto first = std::find_if(m.begin(), m.end(), [](std::int64_t c) { return c != 0; });
    if (*first < 0) continue;
    SparseSpectrum psi;
    psi.d = d;
    psi.add(m, std::numbers::sqrt2 / 2.0);
    psi.add(negate(m), std::numbers::sqrt2 / 2.0);
    support.push_back(std::move(psi));
  }

  Rng rng(derive_seed(seed, Stream::sampling));
  std::uniform_int_distribution<std::size_t> pick(0, support.size() - 1);
  Dataset data;
  data.spec = spec;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& psi = support[pick(rng)];
    data.inputs.push_back(psi.sample(spec));
    data.outputs.push_back(psi.sample(spec));
  }
  FitConfig cfg;
  cfg.K = K;
  cfg.C = 1.0;
  const FitResult fitted = fit_closed_form(data, cfg);

  FiniteSupportDistribution dist;
  dist.d = d;
  for (const auto& psi : support) dist.atoms.push_back({1.0 / static_cast<double>(support.size()), psi, psi, "psi"});

  CounterexampleReport r;
  r.K = K;
  r.n = n;
  r.N = N;
  r.support_size = support.size();
  r.estimator_risk = exact_risk(fitted.op, dist);
  r.reference_risk = exact_risk([](const Mode&) { return cplx{1.0, 0.0}; }, dist);
  r.excess_risk = r.estimator_risk - r.reference_risk;
  return r;
}

namespace {

std::int64_t suite_grid(int d) { return d == 1 ? 64 : 32; }

SpectrumField single_mode(const GridSpec& spec, const Mode& k) {
  SpectrumField u(spec);
  u[flat_of_mode(k, spec)] = 1.0;
  return u;
}

CheckReport named_report(std::string name) {
  CheckReport r;
  r.name = std::move(name);
  return r;
}

Mode axis_mode(int d, std::int64_t k) {
  Mode m(static_cast<std::size_t>(d), 0);
  m[0] = k;
  return m;
}

}  // namespace

std::vector<CheckReport> run_lemma_suite(const LemmaSuiteConfig& cfg) {
  require(cfg.s >= 0, "suite smoothness must be non-negative");
  require(cfg.N_coarse >= 2, "suite coarse grid must be at least 2");
  Tracker parseval("parseval", 0.0);
  Tracker character("character_sum", 0.0);
  CheckReport decay = named_report("coefficient_decay");
  CheckReport weighted = named_report("weighted_sum");
  CheckReport tail = named_report("tail_sum");
  CheckReport alias = named_report("aliasing");
  Tracker alias_exact("aliasing_single_mode", 0.0);

  for (int d : cfg.dims) {
    require(d >= 1 && d <= 3, "suite dimensions must lie in 1..3");
    const GridSpec spec(d, suite_grid(d));
    require(spec.side() > 2 * cfg.N_coarse && spec.side() % cfg.N_coarse == 0,
            "suite grid must divide by N_coarse with Nyquist above it");
    const double unnormalize = std::pow(static_cast<double>(spec.points()), 2.0);

    for (std::size_t i = 0; i < cfg.draws; ++i) {
      GrfConfig grf;
      grf.spec = spec;
      grf.gamma = cfg.gamma;
      grf.seed = derive_seed(derive_seed(cfg.seed, static_cast<std::uint64_t>(d)), i);
      const GridField u = sample_grf(grf);
      const SpectrumField c = dft_forward(u);

      const double grid = grid_l2_norm_sq(u);
      double spectral = spectral_energy(c);
      if (cfg.broken_dft_normalization) spectral *= unnormalize;
      parseval.add(std::abs(grid - spectral) / std::max(grid, 1e-300), 1e-12, [&](double l, double r) {
        return "d=" + std::to_string(d) + " draw=" + std::to_string(i) + " grid=" + format_double(grid) +
               " spectral=" + format_double(spectral) + " rel=" + format_double(l) + " tol=" + format_double(r);
      });

      decay.merge(check_coefficient_decay(c, cfg.s));
      weighted.merge(check_weighted_sum(c, cfg.s));
      for (std::int64_t K : {std::int64_t{1}, std::int64_t{2}, std::int64_t{4}, spec.side() / 2}) {
        tail.merge(check_tail_sum(c, cfg.s, K));
      }
      alias.merge(check_aliasing_all(c, cfg.N_coarse));
    }

    // Single modes and constants.
    decay.merge(check_coefficient_decay(single_mode(spec, axis_mode(d, 3)), cfg.s));
    decay.merge(check_coefficient_decay(single_mode(spec, axis_mode(d, 0)), cfg.s));
    tail.merge(check_tail_sum(single_mode(spec, axis_mode(d, 3)), cfg.s, 2));

    // Band-limited below N_coarse / 2: no aliasing at all.
    {
      GrfConfig grf;
      grf.spec = spec;
      grf.gamma = cfg.gamma;
      grf.seed = derive_seed(cfg.seed, Stream::test);
      SpectrumField u = sample_grf_spectrum(grf);
      for (std::size_t f = 0; f < spec.points(); ++f) {
        if (linf_norm(mode_of_flat(f, spec)) >= cfg.N_coarse / 2) u[f] = 0.0;
      }
      alias.merge(check_aliasing_all(u, cfg.N_coarse));
    }

    // phi_{m + l N} lands on m with coefficient exactly 1.
    const GridSpec coarse(d, cfg.N_coarse);
    for (std::int64_t l : {std::int64_t{-1}, std::int64_t{1}}) {
      const Mode m = axis_mode(d, 1);
      Mode k = m;
      k[0] += l * cfg.N_coarse;
      if (!is_representable(k, spec) || is_nyquist(k, spec)) continue;
      const auto values = dft_inverse_complex(single_mode(spec, k));
      const SpectrumField dft = dft_forward(coarse, restrict_to_grid(spec, values, cfg.N_coarse));
      const cplx observed = dft[aliased_flat_index(m, coarse)];
      alias_exact.add(std::abs(observed - 1.0), 1e-12, [&](double lhs, double) {
        return "k=" + to_string(k) + " DFT(m=" + to_string(m) + ") off by " + format_double(lhs);
      });
    }
  }

  for (std::int64_t N : {3, 4, 5, 8}) {
    for (int d : {1, 2}) {
      const GridSpec spec(d, N);
      const auto modes = box_modes(d, N);
      for (const Mode& k : modes) {
        for (const Mode& m : modes) {
          bool congruent = true;
          for (int j = 0; j < d; ++j) congruent = congruent && ((k[j] - m[j]) % N == 0);
          const double err = std::abs(grid_character_sum(k, m, spec) - (congruent ? 1.0 : 0.0));
          character.add(err, 1e-12, [&](double l, double) {
            return "N=" + std::to_string(N) + " k=" + to_string(k) + " m=" + to_string(m) + " err=" + format_double(l);
          });
        }
      }
    }
  }

  CheckReport lattice = named_report("lattice_sum");
  for (const auto& [d, s] : cfg.lattice_cases) lattice.merge(check_lattice_sum(lattice_tail_sum(s, d)));
  Tracker basel("lattice_basel", 0.0);
  {
    const auto r = lattice_tail_sum(1, 1);
    const double target = std::numbers::pi * std::numbers::pi / 3.0;
    const double outside = std::max({0.0, r.lower - target, target - r.upper});
    basel.add(outside, 0.0, [&](double, double) {
      std::ostringstream os;
      os.precision(17);
      os << "pi^2/3=" << target << " enclosure [" << r.lower << ", " << r.upper << "]";
      return os.str();
    });
  }

  Tracker counter("high_mode_counterexample", 0.0);
  for (std::size_t n : cfg.counterexample_n) {
    const auto r = high_mode_counterexample(cfg.counterexample_K, n, derive_seed(cfg.seed, n));
    counter.add(1.0 - 1e-9, r.excess_risk, [&](double, double excess) {
      return "K=" + std::to_string(r.K) + " n=" + std::to_string(n) + " excess=" + format_double(excess);
    });
  }

  return {parseval.finish(), character.finish(), decay,           weighted,      tail,
          alias,             alias_exact.finish(), lattice,       basel.finish(), counter.finish()};
}

}  // namespace fourlin::bench
