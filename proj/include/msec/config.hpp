// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace msec {

enum class Training { Perfect, PilotContamination };
enum class AnMethod { NullSpace, Random };

const char* to_string(Training t);
const char* to_string(AnMethod m);

// Powers are linear. The config file carries dB and is converted on load.
struct SystemConfig {
  int M = 7;
  int Nt = 100;
  int Ne = 10;
  int K = 10;
  double rho = 0.3;
  double P = 10.0;
  double phi = 0.75;
  double p_tau = 1.0;
  int tau = 10;
  int T_coh = 100;
  Training training = Training::Perfect;
  AnMethod an_method = AnMethod::NullSpace;
  double sigma_mt_sq = 1.0;

  // run controls, not part of the scenario
  int trials = 3000;
  std::uint64_t seed = 1;
  bool seed_set = false;
};

class ValidatedConfig {
 public:
  const SystemConfig& get() const { return cfg_; }
  const SystemConfig* operator->() const { return &cfg_; }

 private:
  explicit ValidatedConfig(const SystemConfig& c) : cfg_(c) {}
  friend ValidatedConfig validate_config(const SystemConfig&);
  SystemConfig cfg_;
};

struct DerivedParams {
  double a, b, c;
  double zeta;
  double lambda;
  double eta;
  double alpha, beta;
  double p, q;
};

struct PathLossModel {
  enum class Mode { Simplified, Explicit };
  Mode mode = Mode::Simplified;
  Eigen::MatrixXd l_user;   // (cell m, user k): BS m -> local-cell user k
  std::vector<double> l_eve;
};

struct Scenario {
  SystemConfig cfg;
  DerivedParams dp;
};

ValidatedConfig validate_config(const SystemConfig& cfg);
DerivedParams derive_params(const ValidatedConfig& cfg);
Scenario make_scenario(const SystemConfig& cfg);

PathLossModel build_path_loss(const ValidatedConfig& cfg);
PathLossModel explicit_path_loss(const Eigen::MatrixXd& l_user, const std::vector<double>& l_eve);

double db_to_linear(double db);
double lambda_of(double pilot_energy, double a);

SystemConfig parse_config(std::istream& in);
SystemConfig load_config(const std::string& path);

}  // namespace msec
