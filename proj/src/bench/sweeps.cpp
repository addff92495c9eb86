#include "fourlin/bench/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fourlin/estimator.hpp"
#include "fourlin/io.hpp"
#include "fourlin/parallel.hpp"
#include "fourlin/rng.hpp"
#include "fourlin/spectral.hpp"

namespace fourlin::bench {
namespace {

constexpr std::size_t kChunk = 32;

// Generates pairs [0, count) of a stream in parallel chunks and hands them
// to `consume` in index order.
template <typename Consume>
void stream_pairs(const PairRecipe& recipe, std::uint64_t seed, std::size_t count, Consume&& consume) {
  std::vector<std::pair<GridField, GridField>> chunk(kChunk);
  for (std::size_t start = 0; start < count; start += kChunk) {
    const std::size_t len = std::min(kChunk, count - start);
    parallel_for(len, [&](std::size_t j) { chunk[j] = generate_pair(recipe, seed, start + j); });
    for (std::size_t j = 0; j < len; ++j) consume(start + j, chunk[j].first, chunk[j].second);
  }
}

PairRecipe make_recipe(const ExperimentConfig& cfg, const DiagonalOperator& target, std::int64_t N) {
  GrfConfig grf;
  grf.spec = GridSpec(cfg.d, N);
  grf.gamma = cfg.gamma;
  grf.sigma = cfg.sigma;
  grf.zero_mean = cfg.zero_mean;
  return PairRecipe{target, grf, cfg.noise};
}

SpectralTestSet build_test_set(const ExperimentConfig& cfg, const PairRecipe& recipe, std::uint64_t seed_s,
                               std::int64_t K_max) {
  SpectralTestSet test(cfg.d, K_max);
  stream_pairs(recipe, derive_seed(seed_s, Stream::test), cfg.n_test,
               [&](std::size_t, const GridField& v, const GridField& w) { test.add(dft_forward(v), dft_forward(w)); });
  return test;
}

void check_common(const ExperimentConfig& cfg) {
  require(cfg.d >= 1, "sweep dimension must be positive");
  require(cfg.n_seeds >= 1, "sweeps need at least one seed");
  require(cfg.n_test >= 1, "sweeps need at least one test pair");
  require(cfg.C > 0.0 && cfg.lambda_bound > 0.0, "bounds must be positive");
}

double mean_of(const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size()); }

double median_of(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t h = x.size() / 2;
  return x.size() % 2 ? x[h] : 0.5 * (x[h - 1] + x[h]);
}

ErrorCurve finish_curve(std::string name, const std::vector<double>& values, std::vector<std::vector<double>> cells,
                        std::vector<std::pair<std::string, std::string>> meta) {
  ErrorCurve curve;
  curve.parameter_name = std::move(name);
  curve.meta = std::move(meta);
  for (std::size_t p = 0; p < values.size(); ++p) {
    CurvePoint pt;
    pt.value = values[p];
    pt.per_seed = std::move(cells[p]);
    pt.mean = mean_of(pt.per_seed);
    double ss = 0.0;
    for (double e : pt.per_seed) ss += (e - pt.mean) * (e - pt.mean);
    pt.stddev = pt.per_seed.size() > 1 ? std::sqrt(ss / static_cast<double>(pt.per_seed.size() - 1)) : 0.0;
    curve.points.push_back(std::move(pt));
  }
  return curve;
}

std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& cfg) {
  auto num = [](double x) { return format_double(x); };
  return {{"d", std::to_string(cfg.d)},
          {"N", std::to_string(cfg.N)},
          {"K", std::to_string(cfg.K)},
          {"K_star", std::to_string(cfg.K_star)},
          {"gamma", num(cfg.gamma)},
          {"sigma", num(cfg.sigma)},
          {"lambda_bound", num(cfg.lambda_bound)},
          {"C", num(cfg.C)},
          {"noise", cfg.noise ? "1" : "0"},
          {"zero_mean", cfg.zero_mean ? "1" : "0"},
          {"n_train", std::to_string(cfg.n_train)},
          {"n_test", std::to_string(cfg.n_test)},
          {"n_seeds", std::to_string(cfg.n_seeds)},
          {"seed", std::to_string(cfg.seed)},
          {"redraw_operator", cfg.redraw_operator ? "1" : "0"},
          {"squared_denominator", cfg.squared_denominator ? "1" : "0"}};
}

}  // namespace

std::string to_csv(const ErrorCurve& curve) {
  std::string out = "param,value,mean_rel_mse,std_rel_mse,n_seeds\n";
  for (const auto& p : curve.points) {
    out += curve.parameter_name + "," + format_double(p.value) + "," + format_double(p.mean) + "," +
           format_double(p.stddev) + "," + std::to_string(p.per_seed.size()) + "\n";
  }
  return out;
}

ErrorCurve parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "param,value,mean_rel_mse,std_rel_mse,n_seeds") {
    fail(ErrorKind::format, "error curve CSV has an unexpected header");
  }
  ErrorCurve curve;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cols.push_back(c);
    if (cols.size() != 5) fail(ErrorKind::format, "CSV row " + std::to_string(row) + " needs 5 columns");
    if (curve.parameter_name.empty()) curve.parameter_name = cols[0];
    try {
      CurvePoint p;
      p.value = std::stod(cols[1]);
      p.mean = std::stod(cols[2]);
      p.stddev = std::stod(cols[3]);
      p.per_seed.assign(static_cast<std::size_t>(std::stoul(cols[4])), p.mean);
      curve.points.push_back(std::move(p));
    } catch (const std::exception&) {
      fail(ErrorKind::format, "CSV row " + std::to_string(row) + " holds a malformed number");
    }
  }
  return curve;
}

std::size_t count_increases(const ErrorCurve& curve) {
  std::size_t k = 0;
  for (std::size_t p = 1; p < curve.points.size(); ++p) k += curve.points[p].mean > curve.points[p - 1].mean;
  return k;
}

std::size_t count_increases_median(const ErrorCurve& curve) {
  std::size_t k = 0;
  for (std::size_t p = 1; p < curve.points.size(); ++p) {
    k += median_of(curve.points[p].per_seed) > median_of(curve.points[p - 1].per_seed);
  }
  return k;
}

DiagonalOperator draw_target(const ExperimentConfig& cfg, std::int64_t generation_N, std::size_t seed_index) {
  const std::int64_t K_star = cfg.K_star < 0 ? max_resolvable_K(generation_N) : cfg.K_star;
  const std::uint64_t base = cfg.redraw_operator ? derive_seed(cfg.seed, seed_index) : cfg.seed;
  return synthesize_random_operator(cfg.d, K_star, cfg.lambda_bound, derive_seed(base, Stream::operator_draw), true);
}

ErrorCurve sweep_statistical(const ExperimentConfig& cfg, std::vector<std::size_t> n_list) {
  check_common(cfg);
  require(!n_list.empty(), "n list must not be empty");
  std::sort(n_list.begin(), n_list.end());
  n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());
  require(n_list.front() >= 1, "every n must be at least 1");
  const GridSpec spec(cfg.d, cfg.N);
  require_resolution(spec, cfg.K);

  std::vector<std::vector<double>> cells(n_list.size());
  for (std::size_t s = 0; s < cfg.n_seeds; ++s) {
    const std::uint64_t seed_s = derive_seed(cfg.seed, s);
    const auto recipe = make_recipe(cfg, draw_target(cfg, cfg.N, s), cfg.N);
    const SpectralTestSet test = build_test_set(cfg, recipe, seed_s, cfg.K);
    // Training sets are nested: the first n pairs of one stream.
    SpectralNormalEquations eq(cfg.d, cfg.K);
    std::size_t next = 0;
    stream_pairs(recipe, derive_seed(seed_s, Stream::train), n_list.back(),
                 [&](std::size_t, const GridField& v, const GridField& w) {
                   eq.add(dft_forward(v), dft_forward(w));
                   while (next < n_list.size() && eq.count() == n_list[next]) {
                     const auto fitted = eq.solve(cfg.C);
                     cells[next++].push_back(test.relative_mse(fitted.op, cfg.squared_denominator));
                   }
                 });
  }
  std::vector<double> values(n_list.begin(), n_list.end());
  return finish_curve("n", values, std::move(cells), describe(cfg));
}

ErrorCurve sweep_truncation(const ExperimentConfig& cfg, std::vector<std::int64_t> K_list) {
  check_common(cfg);
  require(!K_list.empty(), "K list must not be empty");
  std::sort(K_list.begin(), K_list.end());
  K_list.erase(std::unique(K_list.begin(), K_list.end()), K_list.end());
  require(K_list.front() >= 0, "every K must be non-negative");
  if (2 * K_list.back() >= cfg.N) {
    fail(ErrorKind::resolution_too_coarse,
         "truncation sweep needs K < N/2; got K = " + std::to_string(K_list.back()) + " at N = " + std::to_string(cfg.N));
  }
  require(cfg.n_train >= 1, "truncation sweep needs training pairs");
  const std::int64_t K_max = K_list.back();

  std::vector<std::vector<double>> cells(K_list.size());
  for (std::size_t s = 0; s < cfg.n_seeds; ++s) {
    const std::uint64_t seed_s = derive_seed(cfg.seed, s);
    const auto recipe = make_recipe(cfg, draw_target(cfg, cfg.N, s), cfg.N);
    const SpectralTestSet test = build_test_set(cfg, recipe, seed_s, K_max);
    SpectralNormalEquations eq(cfg.d, K_max);
    stream_pairs(recipe, derive_seed(seed_s, Stream::train), cfg.n_train,
                 [&](std::size_t, const GridField& v, const GridField& w) { eq.add(dft_forward(v), dft_forward(w)); });
    // One accumulation serves every K: the fit is local to each mode.
    for (std::size_t k = 0; k < K_list.size(); ++k) {
      cells[k].push_back(test.relative_mse(eq.solve(K_list[k], cfg.C).op, cfg.squared_denominator));
    }
  }
  std::vector<double> values(K_list.begin(), K_list.end());
  return finish_curve("K", values, std::move(cells), describe(cfg));
}

ErrorCurve sweep_discretization(const ExperimentConfig& cfg, std::vector<std::int64_t> N_list) {
  check_common(cfg);
  require(!N_list.empty(), "N list must not be empty");
  std::sort(N_list.begin(), N_list.end());
  N_list.erase(std::unique(N_list.begin(), N_list.end()), N_list.end());
  const std::int64_t N_test = cfg.N;
  for (auto N : N_list) {
    require(N >= 1 && N_test % N == 0,
            "training grid " + std::to_string(N) + " must divide the test grid " + std::to_string(N_test));
  }
  require(cfg.n_train >= 1, "discretization sweep needs training pairs");
  std::vector<std::int64_t> K_of(N_list.size());
  for (std::size_t j = 0; j < N_list.size(); ++j) K_of[j] = max_resolvable_K(N_list[j]);
  const std::int64_t K_max = *std::max_element(K_of.begin(), K_of.end());

  std::vector<std::vector<double>> cells(N_list.size());
  for (std::size_t s = 0; s < cfg.n_seeds; ++s) {
    const std::uint64_t seed_s = derive_seed(cfg.seed, s);
    const auto recipe = make_recipe(cfg, draw_target(cfg, N_test, s), N_test);
    const SpectralTestSet test = build_test_set(cfg, recipe, seed_s, K_max);
    std::vector<SpectralNormalEquations> eqs;
    for (std::size_t j = 0; j < N_list.size(); ++j) eqs.emplace_back(cfg.d, K_of[j]);

    std::vector<std::pair<GridField, GridField>> chunk(kChunk);
    std::vector<std::vector<std::vector<cplx>>> a(kChunk), b(kChunk);
    std::vector<std::vector<double>> e(kChunk);
    const PairRecipe& r = recipe;
    const std::uint64_t train_seed = derive_seed(seed_s, Stream::train);
    for (std::size_t start = 0; start < cfg.n_train; start += kChunk) {
      const std::size_t len = std::min(kChunk, cfg.n_train - start);
      parallel_for(len, [&](std::size_t t) {
        const auto [v, w] = generate_pair(r, train_seed, start + t);
        a[t].resize(N_list.size());
        b[t].resize(N_list.size());
        e[t].resize(N_list.size());
        for (std::size_t j = 0; j < N_list.size(); ++j) {
          const SpectrumField sv = dft_forward(restrict_to_grid(v, N_list[j]));
          a[t][j] = gather_box(sv, K_of[j]);
          e[t][j] = spectral_energy(sv);
          b[t][j] = gather_box(dft_forward(restrict_to_grid(w, N_list[j])), K_of[j]);
        }
      });
      for (std::size_t t = 0; t < len; ++t) {
        for (std::size_t j = 0; j < N_list.size(); ++j) eqs[j].add(a[t][j], b[t][j], e[t][j]);
      }
    }
    for (std::size_t j = 0; j < N_list.size(); ++j) {
      cells[j].push_back(test.relative_mse(eqs[j].solve(cfg.C).op, cfg.squared_denominator));
    }
  }
  std::vector<double> values(N_list.begin(), N_list.end());
  return finish_curve("N", values, std::move(cells), describe(cfg));
}

double fit_loglog_slope(const ErrorCurve& curve) {
  const std::size_t P = curve.points.size();
  require(P >= 2, "slope needs at least two points");
  std::size_t lo = P / 3;
  std::size_t hi = P - P / 3;
  if (hi - lo < 2) {
    lo = lo > 0 ? lo - 1 : 0;
    hi = std::min(P, lo + 2);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double k = 0;
  for (std::size_t p = lo; p < hi; ++p) {
    const auto& pt = curve.points[p];
    require(pt.value > 0.0 && pt.mean > 0.0, "log-log slope needs positive values");
    const double x = std::log(pt.value);
    const double y = std::log(pt.mean);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    k += 1;
  }
  const double den = k * sxx - sx * sx;
  require(den > 0.0, "slope needs distinct parameter values");
  return (k * sxy - sx * sy) / den;
}

ErrorCurve truncation_rate_curve(std::int64_t N, double gamma, const std::vector<std::int64_t>& K_list,
                                 std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.d = 1;
  cfg.N = N;
  cfg.gamma = gamma;
  cfg.sigma = 1.0;
  cfg.noise = false;
  cfg.n_train = 8;
  cfg.n_test = 50;
  cfg.n_seeds = 1;
  cfg.seed = seed;
  ErrorCurve curve = sweep_truncation(cfg, K_list);
  curve.meta.emplace_back("experiment", "truncation_rate");
  return curve;
}

ErrorCurve statistical_rate_curve(const ExperimentConfig& cfg, const std::vector<std::size_t>& n_list_in) {
  check_common(cfg);
  std::vector<std::size_t> n_list = n_list_in;
  std::sort(n_list.begin(), n_list.end());
  n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());
  require(!n_list.empty() && n_list.front() >= 1, "n list must hold positive sizes");
  const GridSpec spec(cfg.d, cfg.N);
  require_resolution(spec, cfg.K);

  std::vector<std::vector<double>> cells(n_list.size());
  for (std::size_t s = 0; s < cfg.n_seeds; ++s) {
    const std::uint64_t seed_s = derive_seed(cfg.seed, s);
    const DiagonalOperator target = draw_target(cfg, cfg.N, s);
    const auto recipe = make_recipe(cfg, target, cfg.N);
    // E|a_m|^2 and lambda* over the fitted box; lambda* outside it adds a
    // fixed truncation term.
    const auto modes = box_modes(cfg.d, cfg.K);
    std::vector<double> power(modes.size());
    std::vector<cplx> truth(modes.size());
    for (std::size_t p = 0; p < modes.size(); ++p) {
      const double sd = spectral_std(modes[p], recipe.input);
      const bool zero = cfg.zero_mean && linf_norm(modes[p]) == 0;
      power[p] = zero ? 0.0 : sd * sd;
      truth[p] = target.lambda(modes[p]);
    }
    double truncation = 0.0;
    for (std::size_t p = 0; p < target.mode_count(); ++p) {
      const Mode m = target.mode_at(p);
      if (linf_norm(m) <= cfg.K || (cfg.zero_mean && linf_norm(m) == 0)) continue;
      const double sd = spectral_std(m, recipe.input);
      truncation += std::norm(target.lambdas()[p]) * sd * sd;
    }
    SpectralNormalEquations eq(cfg.d, cfg.K);
    std::size_t next = 0;
    stream_pairs(recipe, derive_seed(seed_s, Stream::train), n_list.back(),
                 [&](std::size_t, const GridField& v, const GridField& w) {
                   eq.add(dft_forward(v), dft_forward(w));
                   while (next < n_list.size() && eq.count() == n_list[next]) {
                     const auto fitted = eq.solve(cfg.C);
                     double risk = truncation;
                     for (std::size_t p = 0; p < modes.size(); ++p) {
                       risk += std::norm(fitted.op.lambdas()[p] - truth[p]) * power[p];
                     }
                     cells[next++].push_back(risk);
                   }
                 });
  }
  std::vector<double> values(n_list.begin(), n_list.end());
  auto meta = describe(cfg);
  meta.emplace_back("experiment", "statistical_rate");
  return finish_curve("n", values, std::move(cells), std::move(meta));
}

}  // namespace fourlin::bench
