#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fourlin/bench/adversarial.hpp"
#include "fourlin/bench/lemmas.hpp"
#include "fourlin/bench/sweeps.hpp"
#include "fourlin/estimator.hpp"
#include "fourlin/random_fields.hpp"
#include "fourlin/rng.hpp"
#include "fourlin/spectral.hpp"
#include "helpers.hpp"
#include "oracle_values.hpp"

using namespace fourlin;
using namespace fourlin::bench;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.d = 1;
  cfg.N = 32;
  cfg.K = 15;
  cfg.sigma = 1.0;
  cfg.n_train = 40;
  cfg.n_test = 20;
  cfg.n_seeds = 3;
  cfg.seed = 5;
  return cfg;
}

SpectrumField single_mode(const GridSpec& spec, const Mode& k, cplx c = 1.0) {
  SpectrumField u(spec);
  u[flat_of_mode(k, spec)] = c;
  return u;
}

}  // namespace

TEST_SUITE("sweeps") {
  TEST_CASE("statistical sweep shape and exact-recovery floor") {
    ExperimentConfig cfg = small_config();
    const ErrorCurve c = sweep_statistical(cfg, {40, 5, 10, 20});
    REQUIRE(c.points.size() == 4);
    CHECK(c.parameter_name == "n");
    CHECK(c.points.front().value == 5.0);
    for (const auto& p : c.points) {
      CHECK(p.per_seed.size() == 3);
      CHECK(p.stddev >= 0.0);
    }
    CHECK(count_increases(c) <= 1);

    cfg.noise = false;
    cfg.n_seeds = 1;
    const ErrorCurve clean = sweep_statistical(cfg, {60});
    CHECK(clean.points[0].mean <= 1e-20);
  }

  TEST_CASE("truncation sweep is exactly monotone and K = 0 predicts zero") {
    ExperimentConfig cfg = small_config();
    const ErrorCurve c = sweep_truncation(cfg, {0, 1, 2, 3, 5, 8, 12, 15});
    for (std::size_t p = 1; p < c.points.size(); ++p) {
      for (std::size_t s = 0; s < cfg.n_seeds; ++s) CHECK(c.points[p].per_seed[s] <= c.points[p - 1].per_seed[s]);
    }
    // Rebuild the first seed's test pairs; the zero-mean K = 0 fit is the zero operator.
    const std::uint64_t seed0 = derive_seed(cfg.seed, 0);
    GrfConfig grf;
    grf.spec = GridSpec(cfg.d, cfg.N);
    grf.gamma = cfg.gamma;
    grf.sigma = cfg.sigma;
    grf.zero_mean = true;
    const PairRecipe recipe{draw_target(cfg, cfg.N, 0), grf, cfg.noise};
    Dataset test;
    test.spec = grf.spec;
    for (std::size_t i = 0; i < cfg.n_test; ++i) {
      auto [v, w] = generate_pair(recipe, derive_seed(seed0, Stream::test), i);
      test.inputs.push_back(std::move(v));
      test.outputs.push_back(std::move(w));
    }
    CHECK(c.points[0].per_seed[0] == doctest::Approx(relative_mse(DiagonalOperator(1, 0, 1.0), test)).epsilon(1e-12));

    try {
      sweep_truncation(cfg, {16});
      FAIL("accepted K = N/2");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::resolution_too_coarse);
    }
  }

  TEST_CASE("discretization sweep") {
    ExperimentConfig cfg = small_config();
    cfg.N = 64;
    const ErrorCurve c = sweep_discretization(cfg, {8, 16, 32, 64});
    REQUIRE(c.points.size() == 4);
    CHECK(c.points.back().mean < c.points.front().mean);
    CHECK_THROWS_AS(sweep_discretization(cfg, {12}), Error);

    // Band-limited operator and data below the smallest Nyquist: no aliasing,
    // so every resolution recovers the operator.
    cfg.noise = false;
    cfg.K_star = 3;
    cfg.gamma = 40.0;  // spectrum beyond |m| = 3 far below round-off
    cfg.n_seeds = 1;
    const ErrorCurve band = sweep_discretization(cfg, {8, 64});
    CHECK(band.points[0].mean <= 1e-12);
    CHECK(band.points[1].mean <= 1e-12);
  }

  TEST_CASE("CSV round trip and slope fit") {
    ErrorCurve c;
    c.parameter_name = "K";
    for (int k = 1; k <= 9; ++k) {
      CurvePoint p;
      p.value = k;
      p.mean = 3.0 / (k * k * std::sqrt(3.0));
      p.stddev = p.mean / 7.0;
      p.per_seed = {p.mean, p.mean};
      c.points.push_back(p);
    }
    const ErrorCurve back = parse_csv(to_csv(c));
    REQUIRE(back.points.size() == c.points.size());
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      CHECK(back.points[i].mean == c.points[i].mean);
      CHECK(back.points[i].stddev == c.points[i].stddev);
      CHECK(back.points[i].per_seed.size() == 2);
    }
    CHECK(fit_loglog_slope(c) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK_THROWS_AS(parse_csv("bad header\n"), Error);
  }

  TEST_CASE("rate curves") {
    const ErrorCurve t = truncation_rate_curve(256, 1.5, {2, 4, 8, 16, 32, 64}, 3);
    CHECK(fit_loglog_slope(t) <= -1.5);
    ExperimentConfig cfg;
    cfg.d = 1;
    cfg.N = 32;
    cfg.K = 15;
    cfg.sigma = 1.0;
    cfg.n_seeds = 4;
    const ErrorCurve s = statistical_rate_curve(cfg, {20, 40, 80, 160, 320, 640});
    CHECK(fit_loglog_slope(s) <= -0.4);
  }
}

TEST_SUITE("lemmas") {
  TEST_CASE("coefficient decay") {
    const GridSpec spec(2, 16);
    CHECK(check_coefficient_decay(single_mode(spec, Mode{3, -1}), 1).passed());
    const auto constant = check_coefficient_decay(single_mode(spec, Mode{0, 0}), 2);
    CHECK(constant.passed());
    // Only the zero mode is excited; every nonzero mode is a zero-vs-bound case.
    CHECK(constant.worst_ratio == 0.0);
    // An explicit budget below the norm is a violation.
    CHECK_FALSE(check_coefficient_decay(single_mode(spec, Mode{1, 0}), 1, 1.0).passed());
  }

  TEST_CASE("tail sum") {
    const GridSpec spec(1, 16);
    GrfConfig grf;
    grf.spec = spec;
    grf.seed = 1;
    const SpectrumField u = sample_grf_spectrum(grf);
    const auto empty = check_tail_sum(u, 1, 8);
    CHECK(empty.passed());
    CHECK(empty.worst_ratio == 0.0);
    const auto one = check_tail_sum(single_mode(spec, Mode{3}), 1, 2);
    CHECK(one.passed());
    // tail = 1, bound = (1 + 36 pi^2) / 4
    CHECK(one.worst_ratio == doctest::Approx(4.0 / (1.0 + 36.0 * std::numbers::pi * std::numbers::pi)));
  }

  TEST_CASE("weighted sum") {
    const GridSpec spec(2, 8);
    GrfConfig grf;
    grf.spec = spec;
    grf.seed = 2;
    CHECK(check_weighted_sum(sample_grf_spectrum(grf), 1).passed());
  }

  TEST_CASE("aliasing") {
    const GridSpec fine(1, 32);
    // phi_{1 + 8} seen on the 8-grid is phi_1 with coefficient 1.
    const auto r = check_aliasing(single_mode(fine, Mode{9}), 8, Mode{1});
    CHECK(r.passed());
    CHECK(r.worst_ratio == doctest::Approx(1.0).epsilon(1e-12));
    GrfConfig grf;
    grf.spec = fine;
    grf.seed = 3;
    CHECK(check_aliasing_all(sample_grf_spectrum(grf), 8).passed());
    CHECK_THROWS_AS(check_aliasing(single_mode(fine, Mode{1}), 16, Mode{1}), Error);
    CHECK_THROWS_AS(check_aliasing(single_mode(fine, Mode{1}), 8, Mode{8}), Error);
  }

  TEST_CASE("lattice sums") {
    const auto basel = lattice_tail_sum(1, 1);
    CHECK(basel.contains(oracle::kLatticeD1S1));
    CHECK(basel.contains(std::numbers::pi * std::numbers::pi / 3.0));
    CHECK(basel.upper - basel.lower <= 1e-6);
    CHECK(basel.holds());
    const auto d2 = lattice_tail_sum(2, 2);
    CHECK(d2.contains(oracle::kLatticeD2S2));
    CHECK(d2.certain());
    CHECK(check_lattice_sum(d2).passed());
    // The bound fails for d = 3, s = 2: the sum is 4 pi^2 + pi^4 / 45 > 3 pi^2.
    const auto d3 = lattice_tail_sum(2, 3);
    CHECK(d3.contains(oracle::kLatticeD3S2));
    CHECK_FALSE(d3.holds());
    CHECK_FALSE(check_lattice_sum(d3).passed());
    // Larger cutoffs only add positive terms.
    CHECK(lattice_tail_sum(2, 2, 100).partial < lattice_tail_sum(2, 2, 1000).partial);
    try {
      lattice_tail_sum(1, 2);
      FAIL("accepted a divergent sum");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::non_convergence);
    }
  }

  TEST_CASE("high-mode counterexample") {
    for (int d : {1, 2}) {
      for (std::size_t n : {1u, 10u}) {
        const auto r = high_mode_counterexample(2, n, 3 + n, d);
        CHECK(r.reference_risk == 0.0);
        CHECK(r.excess_risk == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.N == 16);
      }
    }
    CHECK_THROWS_AS(high_mode_counterexample(4, 1, 0), Error);
  }

  TEST_CASE("suite passes and catches a broken normalization") {
    LemmaSuiteConfig cfg;
    cfg.draws = 5;
    for (const auto& r : run_lemma_suite(cfg)) {
      CAPTURE(r.name);
      CAPTURE(r.witness);
      CHECK(r.passed());
      CHECK(r.cases > 0);
    }
    cfg.broken_dft_normalization = true;
    const auto broken = run_lemma_suite(cfg);
    CHECK(broken.front().name == "parseval");
    CHECK_FALSE(broken.front().passed());
  }

  TEST_CASE("report JSON") {
    CheckReport r;
    r.name = "x";
    r.cases = 2;
    const std::string line = to_json_line(r);
    CHECK(line.find("\"name\":\"x\"") != std::string::npos);
    CHECK(line.find("\"passed\":true") != std::string::npos);
  }
}

TEST_SUITE("adversarial") {
  TEST_CASE("construction") {
    const auto dist = build_adversarial_distribution(4, 8, 2, 1, 1.0, 9);
    CHECK(dist.M == 8);
    CHECK(dist.J == std::vector<std::int64_t>{1, 2, 3, 4, 5, 6, 7});
    CHECK(dist.J.size() >= dist.n);
    CHECK(dist.high_mode == 3);
    CHECK(dist.total_weight() == doctest::Approx(1.0).epsilon(1e-12));
    double j_mass = 0.0;
    for (const auto& a : dist.atoms) {
      if (a.label == "J") j_mass += a.weight;
      CHECK(a.v.sobolev_norm_sq(1, 1.0) <= 1.0 + 1e-9);
      CHECK(a.w.sobolev_norm_sq(1, 1.0) <= 1.0 + 1e-9);
    }
    CHECK(j_mass == doctest::Approx(1.0 / 3.0));
    CHECK(build_adversarial_distribution(4, 8, 7, 1, 1.0, 9).high_mode == 9);
    CHECK_THROWS_AS(build_adversarial_distribution(4, 1, 2, 1, 1.0, 9), Error);
    CHECK_THROWS_AS(build_adversarial_distribution(4, 8, 2, 1, 6.0, 9), Error);
    CHECK_THROWS_AS(build_adversarial_distribution(4, 8, 2, 0, 1.0, 9), Error);
  }

  TEST_CASE("psi atoms are real on the grid") {
    const auto psi = scaled_psi(1, 3, 2.0);
    CHECK(psi.l2_norm_sq() == doctest::Approx(4.0));
    const GridField u = psi.sample(GridSpec(1, 16));
    CHECK(grid_l2_norm_sq(u) == doctest::Approx(4.0).epsilon(1e-13));
  }

  TEST_CASE("exact risk") {
    const auto dist = build_adversarial_distribution(4, 8, 2, 1, 1.0, 9);
    const double gN = dist.gamma(8);
    CHECK(exact_risk(comparator(dist), dist) == doctest::Approx(gN * gN / 3.0).epsilon(1e-12));
    double zero = 0.0;
    for (const auto& a : dist.atoms) zero += a.weight * a.w.l2_norm_sq();
    CHECK(exact_risk(DiagonalOperator(1, 2, 1.0), dist) == doctest::Approx(zero).epsilon(1e-12));

    // Monte Carlo over atom draws, scored on the grid with a fitted operator.
    FitConfig fc;
    fc.K = 2;
    fc.C = 1.0;
    const DiagonalOperator T = fit_closed_form(grid_dataset(dist, sample_atoms(dist, 4, 1)), fc).op;
    const auto idx = sample_atoms(dist, 4000, 2);
    double sum = 0.0, sum_sq = 0.0;
    for (auto i : idx) {
      // Atom modes stay below 2n + K + 3 < 64, so the 64-grid represents them exactly.
      const GridSpec spec(1, 64);
      const GridField pred = apply(T, dist.atoms[i].v.sample(spec));
      const GridField w = dist.atoms[i].w.sample(spec);
      double e = 0.0;
      for (std::size_t j = 0; j < spec.points(); ++j) e += std::pow(pred[j] - w[j], 2) / spec.points();
      sum += e;
      sum_sq += e * e;
    }
    const double n = static_cast<double>(idx.size());
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(std::abs(mean - exact_risk(T, dist)) <= 3.0 * se);
  }

  TEST_CASE("every atom observed: excess is the aliasing and high-mode terms") {
    const auto dist = build_adversarial_distribution(2, 16, 6, 1, 1.0, 4);
    std::vector<std::size_t> all(dist.atoms.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    FitConfig fc;
    fc.K = 6;
    fc.C = 1.0;
    const DiagonalOperator T = fit_closed_form(grid_dataset(dist, all), fc).op;
    const double gN = dist.gamma(16);
    const double gh = dist.gamma(dist.high_mode);
    const double excess = exact_risk(T, dist) - exact_risk(comparator(dist), dist);
    CHECK(excess == doctest::Approx(2.0 * gN * gN / 3.0 + gh * gh / 3.0).epsilon(1e-10));
  }

  TEST_CASE("lower bound") {
    CHECK(lower_bound_rhs(4, 8, 2, 1, 1.0) == doctest::Approx(oracle::kLowerBound_4_8_2_1_1).epsilon(1e-15));
    CHECK(lower_bound_rhs_swapped(4, 8, 2, 1, 1.0) == doctest::Approx((1.0 / 6) * (1.0 / 32 + 2.0 / 64 + 1.0 / 16)));
    const auto r = verify_lower_bound(4, 8, 2, 1, 1.0, 40, 3);
    CHECK(r.trials == 40);
    CHECK(r.min_excess >= -1e-12);
    CHECK(r.passed());
  }
}
