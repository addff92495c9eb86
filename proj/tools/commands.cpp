#include "commands.hpp"

#include <cstdio>
#include <iostream>

#include "json.hpp"

#include "fourlin/bench/adversarial.hpp"
#include "fourlin/bench/lemmas.hpp"
#include "fourlin/bench/sweeps.hpp"
#include "fourlin/error.hpp"
#include "fourlin/estimator.hpp"
#include "fourlin/io.hpp"

namespace fourlin::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestFormat = "fourlin-dataset";

void prepare(Config& cfg, const fs::path& out, const std::string& command) {
  cfg.reject_unused();
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) fail(ErrorKind::io, "cannot create output directory '" + out.string() + "': " + ec.message());
  write_file_atomic(out / ("resolved_" + command + ".ini"), cfg.resolved_text());
}

std::size_t positive_count(Config& cfg, const std::string& key, std::int64_t fallback) {
  const auto v = cfg.get_int(key, fallback);
  if (v < 1) throw ConfigError("'" + key + "' must be at least 1, got " + std::to_string(v));
  return static_cast<std::size_t>(v);
}

struct LoadedDataset {
  Dataset data;
  json manifest;
};

LoadedDataset load_manifest(const fs::path& path) {
  json m;
  try {
    m = json::parse(read_file(path));
  } catch (const json::exception& e) {
    fail(ErrorKind::format, "manifest '" + path.string() + "' is not valid JSON: " + e.what());
  }
  try {
    if (m.at("format").get<std::string>() != kManifestFormat) {
      fail(ErrorKind::format, "manifest '" + path.string() + "' has an unknown format tag");
    }
    const fs::path dir = path.parent_path();
    LoadedDataset out;
    out.data.spec = GridSpec(m.at("d").get<int>(), m.at("N").get<std::int64_t>());
    const auto& inputs = m.at("inputs");
    const auto& outputs = m.at("outputs");
    if (inputs.size() != outputs.size() || inputs.size() != m.at("n").get<std::size_t>()) {
      fail(ErrorKind::format, "manifest '" + path.string() + "' lists mismatched input/output counts");
    }
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      out.data.inputs.push_back(read_field(dir / inputs[i].get<std::string>()));
      out.data.outputs.push_back(read_field(dir / outputs[i].get<std::string>()));
      if (out.data.inputs.back().spec() != out.data.spec || out.data.outputs.back().spec() != out.data.spec) {
        fail(ErrorKind::format, "pair " + std::to_string(i) + " does not match the manifest grid");
      }
    }
    out.manifest = std::move(m);
    return out;
  } catch (const json::exception& e) {
    fail(ErrorKind::format, "manifest '" + path.string() + "' is missing fields: " + e.what());
  }
}

FitMethod parse_method(const std::string& s) {
  if (s == "closed_form") return FitMethod::closed_form;
  if (s == "projected_sgd") return FitMethod::projected_sgd;
  throw ConfigError("'fit.method' must be closed_form or projected_sgd, got '" + s + "'");
}

}  // namespace

int cmd_generate(Config& cfg, const fs::path& out) {
  const int d = static_cast<int>(cfg.get_int("data.d", 1));
  const std::int64_t N = cfg.get_int("data.N", 8);
  const std::size_t n = positive_count(cfg, "data.n", 2);
  GrfConfig grf;
  grf.spec = GridSpec(d, N);
  grf.gamma = cfg.get_double("data.gamma", 2.0);
  grf.sigma = cfg.get_double("data.sigma", 1.0);
  grf.zero_mean = cfg.get_bool("data.zero_mean", false);
  const bool noise = cfg.get_bool("data.noise", true);
  const std::uint64_t seed = cfg.get_uint("data.seed", 0);

  const std::string op_file = cfg.get_string("operator.file", "");
  DiagonalOperator target;
  if (op_file.empty()) {
    std::int64_t K = cfg.get_int("operator.K", -1);
    if (K < 0) K = bench::max_resolvable_K(N);
    target = synthesize_random_operator(d, K, cfg.get_double("operator.bound", 2.0), cfg.get_uint("operator.seed", 1),
                                        cfg.get_bool("operator.real", true));
  } else {
    target = read_operator(op_file);
  }
  prepare(cfg, out, "generate");

  const Dataset data = generate_dataset(target, grf, noise, n, seed);
  write_operator(out / "target.fop", target);
  json m;
  m["format"] = kManifestFormat;
  m["version"] = 1;
  m["n"] = n;
  m["d"] = d;
  m["N"] = N;
  m["seed"] = seed;
  m["target"] = "target.fop";
  m["grf"] = {{"gamma", grf.gamma}, {"sigma", grf.sigma}, {"zero_mean", grf.zero_mean}};
  m["noise"] = noise;
  m["inputs"] = json::array();
  m["outputs"] = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const std::string v = "v_" + std::to_string(i) + ".flf";
    const std::string w = "w_" + std::to_string(i) + ".flf";
    write_field(out / v, data.inputs[i]);
    write_field(out / w, data.outputs[i]);
    m["inputs"].push_back(v);
    m["outputs"].push_back(w);
  }
  write_file_atomic(out / "manifest.json", m.dump(2) + "\n");
  std::cout << "wrote " << n << " pairs to " << out.string() << "\n";
  return kExitOk;
}

int cmd_fit(Config& cfg, const fs::path& out) {
  const std::string manifest = cfg.get_string("fit.manifest", "");
  FitConfig fc;
  const std::int64_t K = cfg.get_int("fit.K", -1);
  fc.C = cfg.get_double("fit.C", 2.0);
  fc.method = parse_method(cfg.get_string("fit.method", "closed_form"));
  fc.sgd.step_size = cfg.get_double("sgd.step_size", fc.sgd.step_size);
  fc.sgd.batch_size = positive_count(cfg, "sgd.batch_size", static_cast<std::int64_t>(fc.sgd.batch_size));
  fc.sgd.epochs = positive_count(cfg, "sgd.epochs", static_cast<std::int64_t>(fc.sgd.epochs));
  fc.sgd.seed = cfg.get_uint("sgd.seed", fc.sgd.seed);
  fc.sgd.tolerance = cfg.get_double("sgd.tolerance", fc.sgd.tolerance);
  fc.sgd.min_step = cfg.get_double("sgd.min_step", fc.sgd.min_step);
  prepare(cfg, out, "fit");
  if (manifest.empty()) throw ConfigError("'fit.manifest' is required");

  const LoadedDataset loaded = load_manifest(manifest);
  fc.K = K < 0 ? bench::max_resolvable_K(loaded.data.spec.side()) : K;
  const FitResult r = fit(loaded.data, fc);
  write_operator(out / "operator.fop", r.op);

  json summary;
  summary["kind"] = "summary";
  summary["method"] = fc.method == FitMethod::closed_form ? "closed_form" : "projected_sgd";
  summary["n"] = loaded.data.size();
  summary["K"] = fc.K;
  summary["C"] = fc.C;
  summary["objective"] = r.objective;
  summary["modes_clipped"] = r.diagnostics.modes_clipped;
  summary["modes_degenerate"] = r.diagnostics.modes_degenerate;
  summary["epochs_run"] = r.diagnostics.epochs_run;
  summary["final_step"] = r.diagnostics.final_step;
  std::string lines = summary.dump() + "\n";
  for (std::size_t e = 0; e < r.diagnostics.epoch_losses.size(); ++e) {
    lines += json{{"kind", "epoch"}, {"epoch", e + 1}, {"loss", r.diagnostics.epoch_losses[e]}}.dump() + "\n";
  }
  write_file_atomic(out / "fit_diagnostics.jsonl", lines);
  std::cout << "objective " << format_double(r.objective) << "\n";
  return kExitOk;
}

int cmd_eval(Config& cfg, const fs::path& out) {
  const std::string op_path = cfg.get_string("eval.operator", "");
  const std::string manifest = cfg.get_string("eval.manifest", "");
  const bool squared = cfg.get_bool("eval.squared_denominator", false);
  std::string csv = cfg.get_string("eval.csv", "");
  prepare(cfg, out, "eval");
  if (op_path.empty() || manifest.empty()) throw ConfigError("'eval.operator' and 'eval.manifest' are required");
  if (csv.empty()) csv = (out / "eval.csv").string();

  const DiagonalOperator T = read_operator(op_path);
  const LoadedDataset test = load_manifest(manifest);
  if (T.dim() != test.data.spec.dim()) {
    fail(ErrorKind::format, "schema mismatch: operator is " + std::to_string(T.dim()) + "-d, test data " +
                                std::to_string(test.data.spec.dim()) + "-d");
  }
  const double err = relative_mse(T, test.data, squared);

  const std::string header = "config_hash,n,N,K,rel_mse";
  if (fs::exists(csv)) {
    const std::string existing = read_file(csv);
    if (existing.compare(0, header.size(), header) != 0) {
      fail(ErrorKind::format, "schema mismatch: '" + csv + "' does not start with the eval header");
    }
  } else {
    write_file_atomic(csv, header + "\n");
  }
  append_line_atomic(csv, fnv1a_hex(cfg.resolved_text()) + "," + std::to_string(test.data.size()) + "," +
                              std::to_string(test.data.spec.side()) + "," + std::to_string(T.K()) + "," +
                              format_double(err));
  std::cout << "rel_mse " << format_double(err) << "\n";
  return kExitOk;
}

int cmd_sweep(Config& cfg, const fs::path& out, const std::string& kind_arg) {
  if (!kind_arg.empty()) cfg.set_override("sweep.kind=" + kind_arg);
  const std::string kind = cfg.get_string("sweep.kind", "statistical");
  if (kind != "statistical" && kind != "truncation" && kind != "discretization") {
    throw ConfigError("'sweep.kind' must be statistical, truncation or discretization, got '" + kind + "'");
  }
  bench::ExperimentConfig e;
  std::vector<std::int64_t> default_values;
  if (kind == "statistical") {
    default_values = {10, 50, 100, 500};
  } else if (kind == "truncation") {
    e.N = 128;
    default_values = {1, 2, 4, 8, 16, 32, 63};
  } else {
    e.N = 512;
    default_values = {8, 16, 32, 64, 128, 256, 512};
  }
  e.d = static_cast<int>(cfg.get_int("experiment.d", e.d));
  e.N = cfg.get_int("experiment.N", e.N);
  e.K = cfg.get_int("experiment.K", bench::max_resolvable_K(e.N));
  e.K_star = cfg.get_int("experiment.K_star", e.K_star);
  e.gamma = cfg.get_double("experiment.gamma", e.gamma);
  e.sigma = cfg.get_double("experiment.sigma", e.sigma);
  e.lambda_bound = cfg.get_double("experiment.lambda_bound", e.lambda_bound);
  e.C = cfg.get_double("experiment.C", e.C);
  e.noise = cfg.get_bool("experiment.noise", e.noise);
  e.zero_mean = cfg.get_bool("experiment.zero_mean", e.zero_mean);
  e.n_train = positive_count(cfg, "experiment.n_train", static_cast<std::int64_t>(e.n_train));
  e.n_test = positive_count(cfg, "experiment.n_test", static_cast<std::int64_t>(e.n_test));
  e.n_seeds = positive_count(cfg, "experiment.n_seeds", static_cast<std::int64_t>(e.n_seeds));
  e.seed = cfg.get_uint("experiment.seed", e.seed);
  e.redraw_operator = cfg.get_bool("experiment.redraw_operator", e.redraw_operator);
  e.squared_denominator = cfg.get_bool("experiment.squared_denominator", e.squared_denominator);
  const auto values = cfg.get_int_list("sweep.values", default_values);
  prepare(cfg, out, "sweep");

  bench::ErrorCurve curve;
  if (kind == "statistical") {
    std::vector<std::size_t> n_list;
    for (auto v : values) {
      if (v < 1) throw ConfigError("'sweep.values' must be positive sample sizes");
      n_list.push_back(static_cast<std::size_t>(v));
    }
    curve = bench::sweep_statistical(e, n_list);
  } else if (kind == "truncation") {
    curve = bench::sweep_truncation(e, values);
  } else {
    curve = bench::sweep_discretization(e, values);
  }
  write_file_atomic(out / (kind + ".csv"), bench::to_csv(curve));
  for (const auto& p : curve.points) {
    std::cout << curve.parameter_name << "=" << format_double(p.value) << " mean=" << format_double(p.mean)
              << " std=" << format_double(p.stddev) << "\n";
  }
  return kExitOk;
}

int cmd_verify(Config& cfg, const fs::path& out) {
  bench::LemmaSuiteConfig suite;
  suite.draws = positive_count(cfg, "verify.draws", static_cast<std::int64_t>(suite.draws));
  suite.gamma = cfg.get_double("verify.gamma", suite.gamma);
  suite.s = static_cast<int>(cfg.get_int("verify.s", suite.s));
  suite.seed = cfg.get_uint("verify.seed", suite.seed);
  suite.N_coarse = cfg.get_int("verify.N_coarse", suite.N_coarse);
  suite.counterexample_K = cfg.get_int("verify.counterexample_K", suite.counterexample_K);
  suite.dims.clear();
  for (auto d : cfg.get_int_list("verify.dims", {1, 2})) suite.dims.push_back(static_cast<int>(d));
  const std::string fault = cfg.get_string("verify.inject_fault", "none");
  if (fault != "none" && fault != "dft_normalization") {
    throw ConfigError("'verify.inject_fault' must be none or dft_normalization, got '" + fault + "'");
  }
  suite.broken_dft_normalization = fault == "dft_normalization";

  const bool lower = cfg.get_bool("lower_bound.enabled", true);
  const std::size_t lb_n = positive_count(cfg, "lower_bound.n", 4);
  const std::int64_t lb_N = cfg.get_int("lower_bound.N", 8);
  const std::int64_t lb_K = cfg.get_int("lower_bound.K", 2);
  const int lb_s = static_cast<int>(cfg.get_int("lower_bound.s", 1));
  const double lb_B = cfg.get_double("lower_bound.B", 1.0);
  const std::size_t lb_trials = positive_count(cfg, "lower_bound.trials", 200);
  const std::uint64_t lb_seed = cfg.get_uint("lower_bound.seed", 11);
  prepare(cfg, out, "verify");

  std::string lines;
  bool ok = true;
  for (const auto& r : bench::run_lemma_suite(suite)) {
    lines += bench::to_json_line(r) + "\n";
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << " cases=" << r.cases << "\n";
    if (!r.passed()) {
      ok = false;
      std::cerr << "violation in " << r.name << ": " << r.witness << "\n";
    }
  }
  if (lower) {
    const auto r = bench::verify_lower_bound(lb_n, lb_N, lb_K, lb_s, lb_B, lb_trials, lb_seed);
    const bool passed = r.mean_excess >= r.bound;
    json j{{"name", "lower_bound"},          {"passed", passed},     {"mean_excess", r.mean_excess},
           {"stderr_excess", r.stderr_excess}, {"min_excess", r.min_excess}, {"bound", r.bound},
           {"trials", r.trials}};
    lines += j.dump() + "\n";
    std::cout << (passed ? "PASS " : "FAIL ") << "lower_bound mean=" << format_double(r.mean_excess)
              << " bound=" << format_double(r.bound) << "\n";
    if (!passed) {
      ok = false;
      std::cerr << "violation in lower_bound: mean excess " << format_double(r.mean_excess) << " below "
                << format_double(r.bound) << "\n";
    }
  }
  write_file_atomic(out / "verify.jsonl", lines);
  return ok ? kExitOk : kExitVerification;
}

}  // namespace fourlin::cli
