// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "msec/errors.hpp"
#include "msec/sweep.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kUsage = 2, kNumerical = 3 };

std::uint64_t parse_seed(const std::string& s, const char* origin) {
  std::size_t pos = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size() || s[0] == '-')
    throw msec::UsageError(std::string("bad seed from ") + origin + ": '" + s + "'");
  return v;
}

int run(int argc, char** argv) {
  CLI::App app{"Multi-cell massive MIMO secrecy simulator: closed-form bounds and Monte-Carlo"};
  std::string config_path, sweep_text, quantities, out, figure;
  std::optional<int> trials;
  std::optional<std::string> seed_text;
  double r0 = 1.0;
  int threads = 0;
  bool optimize_phi = false, pilot_follows_users = false, do_compare = false;

  app.add_option("--config", config_path, "scenario config file (key = value)");
  app.add_option("--sweep", sweep_text, "VAR=start:stop:steps (Nt, beta, phi, alpha, rho, R0, tau, lambda, ptau)");
  app.add_option("--quantities", quantities, "comma-separated quantities for --sweep");
  app.add_option("--out", out, "output CSV (sweep), directory (figure) or report (compare)");
  app.add_option("--figure", figure, "figure preset: fig0 fig2 fig3 fig4 fig5 fig6 fig7 fig8");
  app.add_option("--trials", trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed_text, "master seed (u64); falls back to MIMO_SECRECY_SEED");
  app.add_option("--r0", r0, "target secrecy rate for outage rows")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  app.add_flag("--optimize-phi", optimize_phi, "evaluate secrecy rows at phi*");
  app.add_flag("--pilot-follows-users", pilot_follows_users, "set tau = K and p_tau = P/K at each point");
  app.add_flag("--compare", do_compare, "closed form vs Monte-Carlo report for the config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const int modes = int(!sweep_text.empty()) + int(!figure.empty()) + int(do_compare);
  if (modes != 1) throw msec::UsageError("choose exactly one of --sweep, --figure, --compare");

  msec::SystemConfig cfg;
  if (!config_path.empty()) cfg = msec::load_config(config_path);

  msec::RunOptions opt;
  opt.trials = trials.value_or(cfg.trials);
  opt.threads = threads;
  opt.seed = cfg.seed;
  if (seed_text) {
    opt.seed = parse_seed(*seed_text, "--seed");
  } else if (const char* env = std::getenv("MIMO_SECRECY_SEED")) {
    opt.seed = parse_seed(env, "MIMO_SECRECY_SEED");
  }

  if (!figure.empty()) {
    msec::reproduce_figure(figure, out.empty() ? figure : out, opt);
    return kOk;
  }

  // validate the scenario up front so a bad config is a config error
  msec::validate_config(cfg);

  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) throw msec::UsageError("cannot write '" + out + "'");
  }
  std::ostream& os = out.empty() ? std::cout : file;

  if (do_compare) return msec::compare(cfg, opt, os) ? kOk : kNumerical;

  if (quantities.empty()) throw msec::UsageError("--sweep needs --quantities");
  msec::SweepSpec spec = msec::parse_sweep(sweep_text);
  spec.quantities = msec::parse_quantities(quantities);
  spec.R0 = r0;
  spec.reoptimize_phi = optimize_phi;
  spec.pilot_follows_users = pilot_follows_users;
  msec::run_sweep(cfg, spec, opt, os);
  os.flush();
  if (!os) throw msec::UsageError("write failed for '" + out + "'");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const msec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const msec::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}
