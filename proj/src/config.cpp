// SPDX-License-Identifier: Apache-2.0
#include "msec/config.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "msec/errors.hpp"

namespace msec {

const char* to_string(Training t) {
  return t == Training::Perfect ? "perfect" : "contaminated";
}

const char* to_string(AnMethod m) { return m == AnMethod::NullSpace ? "null" : "random"; }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double lambda_of(double pilot_energy, double a) {
  return pilot_energy / (1.0 + pilot_energy * a);
}

ValidatedConfig validate_config(const SystemConfig& c) {
  if (c.M < 1 || c.Nt < 1 || c.Ne < 1 || c.K < 1 || c.tau < 1 || c.T_coh < 1)
    throw ConfigError(ConfigIssue::NonPositiveCount, "counts must be positive integers");
  if (c.K >= c.Nt) throw ConfigError(ConfigIssue::UsersNotBelowAntennas, "K must be < N_t");
  if (!(c.rho >= 0.0 && c.rho <= 1.0))
    throw ConfigError(ConfigIssue::RhoOutOfRange, "rho must lie in [0,1]");
  if (!(c.phi > 0.0 && c.phi <= 1.0))
    throw ConfigError(ConfigIssue::PhiOutOfRange, "phi must lie in (0,1]");
  if (!(c.P > 0.0) || !(c.p_tau > 0.0) || !(c.sigma_mt_sq > 0.0) || !std::isfinite(c.P) ||
      !std::isfinite(c.p_tau))
    throw ConfigError(ConfigIssue::NonPositivePower, "powers must be positive");
  if (c.training == Training::PilotContamination && c.tau < c.K)
    throw ConfigError(ConfigIssue::PilotTooShort, "tau >= K required under pilot contamination");
  if (c.training == Training::PilotContamination && c.tau >= c.T_coh)
    throw ConfigError(ConfigIssue::CoherenceTooShort, "tau must be < coherence length");
  return ValidatedConfig(c);
}

DerivedParams derive_params(const ValidatedConfig& vc) {
  const SystemConfig& c = vc.get();
  DerivedParams d{};
  const double Mm1 = c.M - 1;
  d.a = 1.0 + c.rho * Mm1;
  d.b = Mm1 * c.rho + 1.0 / c.P;
  d.c = 1.0 + c.rho * c.rho * Mm1;
  d.alpha = double(c.Ne) / c.Nt;
  d.beta = double(c.K) / c.Nt;
  d.zeta = d.a * d.beta / d.alpha - d.beta * d.c / (d.a * (1.0 - d.beta));
  d.lambda = lambda_of(c.p_tau * c.tau, d.a);
  d.p = c.phi * c.P / c.K;
  d.q = (1.0 - c.phi) * c.P / (c.Nt - c.K);
  d.eta = d.q / d.p;
  return d;
}

Scenario make_scenario(const SystemConfig& cfg) {
  ValidatedConfig v = validate_config(cfg);
  return Scenario{v.get(), derive_params(v)};
}

PathLossModel build_path_loss(const ValidatedConfig& vc) {
  const SystemConfig& c = vc.get();
  PathLossModel pl;
  pl.mode = PathLossModel::Mode::Simplified;
  pl.l_user = Eigen::MatrixXd::Constant(c.M, c.K, c.rho);
  pl.l_user.row(0).setOnes();
  pl.l_eve.assign(c.M, c.rho);
  pl.l_eve[0] = 1.0;
  return pl;
}

PathLossModel explicit_path_loss(const Eigen::MatrixXd& l_user, const std::vector<double>& l_eve) {
  auto in_range = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (Eigen::Index i = 0; i < l_user.size(); ++i)
    if (!in_range(l_user.data()[i]))
      throw ConfigError(ConfigIssue::PathLossOutOfRange, "path loss entries must lie in [0,1]");
  for (double v : l_eve)
    if (!in_range(v))
      throw ConfigError(ConfigIssue::PathLossOutOfRange, "path loss entries must lie in [0,1]");
  if (static_cast<Eigen::Index>(l_eve.size()) != l_user.rows())
    throw ConfigError(ConfigIssue::PathLossOutOfRange, "l_eve needs one entry per cell");
  PathLossModel pl;
  pl.mode = PathLossModel::Mode::Explicit;
  pl.l_user = l_user;
  pl.l_eve = l_eve;
  return pl;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long long to_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size())
    throw ConfigError(ConfigIssue::Parse, "bad integer for " + key + ": '" + v + "'");
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size())
    throw ConfigError(ConfigIssue::Parse, "bad number for " + key + ": '" + v + "'");
  return out;
}

}  // namespace

SystemConfig parse_config(std::istream& in) {
  SystemConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(ConfigIssue::Parse, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "cells") c.M = int(to_int(key, val));
    else if (key == "bs_antennas") c.Nt = int(to_int(key, val));
    else if (key == "eve_antennas") c.Ne = int(to_int(key, val));
    else if (key == "users") c.K = int(to_int(key, val));
    else if (key == "rho") c.rho = to_real(key, val);
    else if (key == "power_db") c.P = db_to_linear(to_real(key, val));
    else if (key == "phi") c.phi = to_real(key, val);
    else if (key == "pilot_power_db") c.p_tau = db_to_linear(to_real(key, val));
    else if (key == "pilot_length") c.tau = int(to_int(key, val));
    else if (key == "coherence") c.T_coh = int(to_int(key, val));
    else if (key == "trials") c.trials = int(to_int(key, val));
    else if (key == "seed") {
      std::size_t pos = 0;
      try {
        c.seed = std::stoull(val, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != val.size() || val[0] == '-')
        throw ConfigError(ConfigIssue::Parse, "bad seed: '" + val + "'");
      c.seed_set = true;
    } else if (key == "training") {
      if (val == "perfect") c.training = Training::Perfect;
      else if (val == "contaminated") c.training = Training::PilotContamination;
      else throw ConfigError(ConfigIssue::Parse, "training must be perfect|contaminated");
    } else if (key == "an_method") {
      if (val == "null") c.an_method = AnMethod::NullSpace;
      else if (val == "random") c.an_method = AnMethod::Random;
      else throw ConfigError(ConfigIssue::Parse, "an_method must be null|random");
    } else {
      throw ConfigError(ConfigIssue::Parse, "unknown key '" + key + "'");
    }
  }
  if (c.trials < 1) throw ConfigError(ConfigIssue::NonPositiveCount, "trials must be positive");
  return c;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(ConfigIssue::Io, "cannot read config '" + path + "'");
  return parse_config(f);
}

}  // namespace msec
