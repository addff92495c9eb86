#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fourlin/estimator.hpp"
#include "fourlin/random_fields.hpp"
#include "fourlin/spectral.hpp"
#include "helpers.hpp"

using namespace fourlin;

namespace {

Dataset make_data(const DiagonalOperator& T, std::int64_t N, std::size_t n, bool noise, std::uint64_t seed,
                  double sigma = 1.0) {
  GrfConfig grf;
  grf.spec = GridSpec(T.dim(), N);
  grf.sigma = sigma;
  return generate_dataset(T, grf, noise, n, seed);
}

double max_lambda_diff(const DiagonalOperator& a, const DiagonalOperator& b) {
  return testing::max_abs_diff(a.lambdas(), b.lambdas());
}

GridField cosine(const GridSpec& spec, double amp) {
  std::vector<double> v(spec.points());
  for (std::size_t f = 0; f < v.size(); ++f) {
    v[f] = amp * std::cos(2 * std::numbers::pi * static_cast<double>(unflatten(f, spec)[0]) / spec.side());
  }
  return GridField(spec, v);
}

}  // namespace

TEST_SUITE("estimator") {
  TEST_CASE("exact recovery from noiseless data") {
    const DiagonalOperator T = synthesize_random_operator(2, 8, 2.0, 17);
    const Dataset data = make_data(T, 32, 8, false, 3);
    FitConfig cfg;
    cfg.K = 8;
    cfg.C = 2.0;
    const FitResult r = fit_closed_form(data, cfg);
    CHECK(max_lambda_diff(r.op, T) <= 1e-8);
    CHECK(r.diagnostics.modes_degenerate == 0);
    CHECK(r.objective <= 1e-16);
  }

  TEST_CASE("projection onto the disk") {
    const GridSpec spec(1, 16);
    Dataset data;
    data.spec = spec;
    data.inputs.push_back(cosine(spec, 1.0));
    data.outputs.push_back(cosine(spec, 2.0));
    FitConfig cfg;
    cfg.K = 3;
    cfg.C = 1.0;
    const FitResult r = fit_closed_form(data, cfg);
    CHECK(std::abs(r.op.lambda(Mode{1}) - 1.0) <= 1e-12);
    CHECK(std::abs(r.op.lambda(Mode{-1}) - 1.0) <= 1e-12);
    CHECK(r.diagnostics.modes_clipped == 2);
    // Unexcited modes are degenerate and set to zero.
    CHECK(r.op.lambda(Mode{2}) == cplx(0.0));
    CHECK(r.op.lambda(Mode{0}) == cplx(0.0));
    CHECK(r.diagnostics.modes_degenerate == 5);
    // Residual per pair: |1 * 0.5 - 1|^2 at m = +-1.
    CHECK(r.objective == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("objective matches the data-side loss") {
    const DiagonalOperator T = synthesize_random_operator(2, 6, 2.0, 5);
    const Dataset data = make_data(T, 16, 20, true, 4);
    FitConfig cfg;
    cfg.K = 4;
    cfg.C = 1.0;
    const FitResult r = fit_closed_form(data, cfg);
    CHECK(std::abs(r.objective - empirical_objective(r.op, data)) <= 1e-10 * std::max(1.0, r.objective));
    double sum = 0.0;
    for (double x : r.per_mode_residual) sum += x;
    CHECK(sum == doctest::Approx(r.objective).epsilon(1e-12));
    CHECK(r.op.max_abs_lambda() <= 1.0 + 1e-15);
    CHECK(r.op.conjugate_defect() == 0.0);
  }

  TEST_CASE("sub-box solves agree with direct fits") {
    const DiagonalOperator T = synthesize_random_operator(2, 7, 2.0, 6);
    const Dataset data = make_data(T, 16, 12, true, 8);
    const SpectralNormalEquations eq = accumulate(data, 7);
    for (std::int64_t K : {0, 2, 5, 7}) {
      FitConfig cfg;
      cfg.K = K;
      cfg.C = 1.5;
      const FitResult direct = fit_closed_form(data, cfg);
      const FitResult sub = eq.solve(K, 1.5);
      CHECK(max_lambda_diff(direct.op, sub.op) <= 1e-13);
      CHECK(std::abs(direct.objective - sub.objective) <= 1e-12 * std::max(1.0, direct.objective));
      // On the accumulated box, modes outside the operator box add their output power.
      const auto inner = sub_box_positions(2, K, 7);
      std::vector<bool> in_box(eq.power_out().size(), false);
      for (std::size_t p : inner) in_box[p] = true;
      double outside = 0.0;
      for (std::size_t p = 0; p < in_box.size(); ++p) outside += in_box[p] ? 0.0 : eq.power_out()[p];
      const double expected = direct.objective + outside / static_cast<double>(eq.count());
      CHECK(std::abs(eq.objective(direct.op) - expected) <= 1e-12 * std::max(1.0, expected));
    }
  }

  TEST_CASE("projected SGD reaches the closed-form objective") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const DiagonalOperator T = synthesize_random_operator(2, 8, 2.0, 40 + seed);
      const Dataset data = make_data(T, 32, 50, true, 90 + seed);
      FitConfig cfg;
      cfg.K = 8;
      cfg.C = 1.0;
      const FitResult cf = fit_closed_form(data, cfg);
      cfg.method = FitMethod::projected_sgd;
      cfg.sgd.seed = seed;
      const FitResult sgd = fit(data, cfg);
      CHECK(std::abs(sgd.objective - cf.objective) <= 1e-6 * cf.objective);
      CHECK(sgd.op.max_abs_lambda() <= 1.0 + 1e-12);
      CHECK(sgd.diagnostics.epochs_run >= 1);
      CHECK(sgd.diagnostics.epoch_losses.size() == sgd.diagnostics.epochs_run);
    }
  }

  TEST_CASE("SGD on zero data stays at zero") {
    const Dataset data = make_data(DiagonalOperator(1, 3, 1.0), 8, 10, false, 1);
    FitConfig cfg;
    cfg.K = 3;
    cfg.method = FitMethod::projected_sgd;
    cfg.sgd.epochs = 5;
    const FitResult r = fit(data, cfg);
    for (auto l : r.op.lambdas()) CHECK(l == cplx(0.0));
  }

  TEST_CASE("configuration errors") {
    const Dataset data = make_data(DiagonalOperator(1, 3, 1.0), 8, 2, false, 1);
    FitConfig cfg;
    cfg.K = 4;
    try {
      fit(data, cfg);
      FAIL("accepted N = 2K");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::resolution_too_coarse);
    }
    cfg.K = 2;
    cfg.C = 0.0;
    CHECK_THROWS_AS(fit(data, cfg), Error);
    cfg.C = 1.0;
    Dataset empty;
    empty.spec = data.spec;
    CHECK_THROWS_AS(fit(empty, cfg), Error);
  }

  TEST_CASE("prediction across resolutions") {
    const DiagonalOperator T = synthesize_random_operator(2, 3, 2.0, 9);
    const GridSpec coarse(2, 8);
    const GridSpec fine(2, 16);
    GrfConfig grf;
    grf.spec = fine;
    grf.seed = 12;
    SpectrumField s = sample_grf_spectrum(grf);
    for (std::size_t f = 0; f < fine.points(); ++f) {
      if (linf_norm(mode_of_flat(f, fine)) > 3) s[f] = 0.0;
    }
    const GridField v_fine = dft_inverse(s);
    const GridField v_coarse = restrict_to_grid(v_fine, 8);
    const GridField a = predict(T, v_coarse);
    CHECK(testing::max_abs_diff(a.values(), apply(T, v_coarse).values()) == 0.0);
    const GridField b = restrict_to_grid(predict(T, v_fine), 8);
    CHECK(testing::max_abs_diff(a.values(), b.values()) <= 1e-12);
    CHECK_THROWS_AS(predict(T, GridField(GridSpec(2, 6))), Error);
  }

  TEST_CASE("relative MSE") {
    const DiagonalOperator T = synthesize_random_operator(1, 3, 2.0, 2);
    const Dataset test = make_data(T, 8, 2, false, 6);
    CHECK(relative_mse(T, test) <= 1e-28);

    Dataset one;
    one.spec = test.spec;
    one.inputs = {test.inputs[0]};
    one.outputs = {test.outputs[0]};
    const double norm = std::sqrt(grid_l2_norm_sq(test.outputs[0]));
    CHECK(relative_mse(DiagonalOperator(1, 3, 1.0), one) == doctest::Approx(norm).epsilon(1e-13));

    // Two pairs by hand, with a perturbed operator.
    auto l = T.lambdas();
    for (auto& x : l) x *= 0.5;
    const DiagonalOperator H(1, 3, 2.0, l, true);
    double expect = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      const GridField p = apply(H, test.inputs[i]);
      double num = 0.0, den = 0.0;
      for (std::size_t j = 0; j < 8; ++j) {
        num += std::pow(test.outputs[i][j] - p[j], 2) / 8.0;
        den += std::pow(test.outputs[i][j], 2) / 8.0;
      }
      expect += num / std::sqrt(den) / 2.0;
    }
    CHECK(relative_mse(H, test) == doctest::Approx(expect).epsilon(1e-12));

    Dataset zero = one;
    zero.outputs = {GridField(one.spec)};
    try {
      relative_mse(T, zero);
      FAIL("accepted a zero target");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::degenerate_target);
    }
  }

  TEST_CASE("spectral test set agrees with grid evaluation") {
    const DiagonalOperator T = synthesize_random_operator(2, 7, 2.0, 21);
    const Dataset test = make_data(T, 16, 6, true, 22);
    SpectralTestSet set(2, 7);
    for (std::size_t i = 0; i < test.size(); ++i) set.add(dft_forward(test.inputs[i]), dft_forward(test.outputs[i]));
    for (std::int64_t K : {0, 3, 7}) {
      const DiagonalOperator H = synthesize_random_operator(2, K, 2.0, 30 + K);
      for (bool sq : {false, true}) {
        CHECK(set.relative_mse(H, sq) == doctest::Approx(relative_mse(H, test, sq)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("excess risk") {
    const DiagonalOperator T = synthesize_random_operator(1, 3, 2.0, 2);
    const Dataset test = make_data(T, 8, 5, false, 7);
    CHECK(empirical_excess_risk(T, T, test) == 0.0);
    double energy = 0.0;
    for (const auto& w : test.outputs) energy += grid_l2_norm_sq(w) / test.size();
    CHECK(empirical_excess_risk(DiagonalOperator(1, 3, 2.0), T, test) == doctest::Approx(energy).epsilon(1e-12));
  }

  TEST_CASE("Monte Carlo: excess risk of a fitted operator is non-negative") {
    const DiagonalOperator T = synthesize_random_operator(1, 7, 2.0, 13);
    const Dataset train = make_data(T, 16, 20, true, 100);
    FitConfig cfg;
    cfg.K = 7;
    cfg.C = 2.0;
    const DiagonalOperator H = fit_closed_form(train, cfg).op;
    const Dataset test = make_data(T, 16, 1000, true, 200);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < test.size(); ++i) {
      Dataset one;
      one.spec = test.spec;
      one.inputs = {test.inputs[i]};
      one.outputs = {test.outputs[i]};
      const double e = empirical_excess_risk(H, T, one);
      sum += e;
      sum_sq += e * e;
    }
    const double n = static_cast<double>(test.size());
    const double mean = sum / n;
    CHECK(mean >= -3.0 * std::sqrt((sum_sq / n - mean * mean) / n));
    CHECK(empirical_excess_risk(H, T, test) == doctest::Approx(mean).epsilon(1e-9));
  }
}
