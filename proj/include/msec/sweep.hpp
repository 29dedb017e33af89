// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "msec/config.hpp"

namespace msec {

enum class SweepVar { Nt, beta, phi, alpha, rho, R0, tau, lambda, ptau };

enum class Quantity {
  rate_lb,
  secrecy_lb_I,
  secrecy_lb_II,
  eve_cap,
  eve_cap_ub,
  outage_ub,
  mc_rate,
  mc_eve_cap,
  mc_outage,
  mc_secrecy,
  phi_opt,
  alpha_sec,
  net_secrecy,
};

const char* to_string(SweepVar v);
const char* to_string(Quantity q);
SweepVar parse_sweep_var(const std::string& s);
Quantity parse_quantity(const std::string& s);
std::vector<Quantity> parse_quantities(const std::string& csv);
bool is_monte_carlo(Quantity q);

struct SweepSpec {
  SweepVar variable = SweepVar::phi;
  std::vector<double> grid;
  std::vector<Quantity> quantities;
  double R0 = 1.0;              // used by outage rows unless R0 is the variable
  bool reoptimize_phi = false;  // secrecy rows evaluated at phi*
  bool pilot_follows_users = false;  // tau = K and p_tau = P/K at every point
};

// "VAR=start:stop:steps", steps points inclusive of both ends.
SweepSpec parse_sweep(const std::string& text);
void check_sweep(const SweepSpec& spec, const SystemConfig& base);

struct RunOptions {
  int trials = 3000;
  std::uint64_t seed = 1;
  int threads = 0;
};

inline constexpr const char* kCsvHeader =
    "variable,value,quantity,an_method,training,estimate,stderr,trials,seed";

// Applies one grid value to a base config (may throw ConfigError).
SystemConfig apply_point(const SystemConfig& base, const SweepSpec& spec, double value);

void run_sweep(const SystemConfig& base, const SweepSpec& spec, const RunOptions& opt,
               std::ostream& csv);

void reproduce_figure(const std::string& id, const std::string& out_dir, const RunOptions& opt);
std::vector<std::string> figure_ids();

// Writes the report; returns true when every check passes.
bool compare(const SystemConfig& cfg, const RunOptions& opt, std::ostream& report);

std::string format_number(double v);

}  // namespace msec
