#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "commands.hpp"
#include "config.hpp"
#include "fourlin/error.hpp"

namespace {

using namespace fourlin::cli;

int exit_code_for(fourlin::ErrorKind kind) {
  switch (kind) {
    case fourlin::ErrorKind::invalid_argument:
    case fourlin::ErrorKind::resolution_too_coarse:
    case fourlin::ErrorKind::oracle_size:
      return kExitConfig;
    case fourlin::ErrorKind::io:
    case fourlin::ErrorKind::format:
      return kExitIo;
    default:
      return kExitVerification;
  }
}

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string out = "fourlin_out";
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& about, Common& c) {
  auto* sub = app.add_subcommand(name, about);
  sub->add_option("-c,--config", c.config, "Config file (key = value under [section] headers)");
  sub->add_option("-s,--set", c.sets, "Override one key: section.key=value (repeatable)");
  sub->add_option("-o,--out", c.out, "Output directory")->capture_default_str();
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn Fourier-diagonal linear operators from sampled function pairs"};
  app.require_subcommand(1);
  Common c;
  std::string kind;
  auto* gen = add_command(app, "generate", "Draw a dataset of input/output pairs", c);
  auto* fit = add_command(app, "fit", "Fit an operator to a dataset", c);
  auto* eval = add_command(app, "eval", "Score an operator on a test dataset", c);
  auto* sweep = add_command(app, "sweep", "Run an error sweep and write its curve", c);
  sweep->add_option("kind", kind, "statistical, truncation or discretization");
  auto* verify = add_command(app, "verify", "Run the numerical inequality checks", c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    Config cfg = c.config.empty() ? Config{} : Config::load(c.config);
    for (const auto& s : c.sets) cfg.set_override(s);
    if (gen->parsed()) return cmd_generate(cfg, c.out);
    if (fit->parsed()) return cmd_fit(cfg, c.out);
    if (eval->parsed()) return cmd_eval(cfg, c.out);
    if (sweep->parsed()) return cmd_sweep(cfg, c.out, kind);
    if (verify->parsed()) return cmd_verify(cfg, c.out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fourlin::Error& e) {
    std::cerr << fourlin::to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitConfig;
}
