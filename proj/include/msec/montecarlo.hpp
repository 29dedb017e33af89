// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/random/normal_distribution.hpp>

#include "msec/config.hpp"

namespace msec {

// Counter-based substream: one engine per (seed, trial, attempt).
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t trial, std::uint64_t attempt = 0);
  double normal() { return nd_(eng_); }
  template <class Dist>
  double draw(Dist& d) { return d(eng_); }
  std::complex<double> cn();  // CN(0,1)
  void fill_cn(Eigen::Ref<Eigen::MatrixXcd, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>> m);

 private:
  std::mt19937_64 eng_;
  boost::random::normal_distribution<double> nd_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct ChannelRealization {
  // Per BS m, small-scale rows to every user: row p*K + k is user k of cell p.
  std::vector<Eigen::MatrixXcd> g;
  // Per BS m, estimates of its own K users (small-scale), and the errors.
  std::vector<Eigen::MatrixXcd> h_hat;
  std::vector<Eigen::MatrixXcd> err;
  // Per BS m, eavesdropper small-scale Ne x Nt (empty if not sampled).
  std::vector<Eigen::MatrixXcd> h_eve;
};

// Path loss from BS m to user k of cell p: the local-cell table relabelled so
// cell m plays the local role.
double link_loss(const PathLossModel& pl, int m, int p, int k);

ChannelRealization sample_channels(const Scenario& s, const PathLossModel& pl, Rng& rng,
                                   bool with_eve = true);

// Explicit N_t x (N_t - K) shaping matrix with unit-norm columns.
Eigen::MatrixXcd build_an(const Eigen::MatrixXcd& h_hat, AnMethod m, Rng& rng);

// R * V for the random design without forming V (same distribution).
Eigen::MatrixXcd random_projection(const Eigen::MatrixXcd& R, Eigen::Index cols, Rng& rng);

struct McOptions {
  int threads = 0;  // 0: hardware concurrency
};

struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  int rejected = 0;
};

struct McLink {
  McEstimate rate;
  bool eve_available = false;
  McEstimate eve;
  McEstimate secrecy;
  std::vector<McEstimate> outage;  // one per requested R0
};

// One pass over the trials producing every per-link quantity.
// outage uses the closed-form rate bound as R_lb.
McLink mc_link(const Scenario& s, const PathLossModel& pl, AnMethod m, int trials,
               std::uint64_t seed, const std::vector<double>& R0 = {},
               const McOptions& opt = {});

McEstimate mc_user_rate(const Scenario& s, const PathLossModel& pl, AnMethod m, int trials,
                        std::uint64_t seed, const McOptions& opt = {});
McEstimate mc_eve_capacity(const Scenario& s, const PathLossModel& pl, AnMethod m, int trials,
                           std::uint64_t seed, const McOptions& opt = {});
McEstimate mc_secrecy(const Scenario& s, const PathLossModel& pl, AnMethod m, int trials,
                      std::uint64_t seed, const McOptions& opt = {});
McEstimate mc_outage(const Scenario& s, const PathLossModel& pl, AnMethod m, double R0, int trials,
                     std::uint64_t seed, const McOptions& opt = {});

// Per-trial eavesdropper SINR draws (accepted trials only, trial order).
std::vector<double> mc_eve_sinr_samples(const Scenario& s, const PathLossModel& pl, AnMethod m,
                                        int trials, std::uint64_t seed,
                                        const McOptions& opt = {});

// Absolute powers (p and q applied), matching the terms of the SINR.
struct McSinrComponents {
  McEstimate desired;       // |E[sqrt(p) h w]|^2
  McEstimate leakage;       // var[sqrt(p) h w]
  McEstimate an;            // sum E|sqrt(q) h v|^2
  McEstimate interference;  // sum E|sqrt(p) h w_other|^2
  McEstimate local_an_per_column;  // E|h_local v|^2 averaged over local AN columns
};
McSinrComponents mc_sinr_components(const Scenario& s, const PathLossModel& pl, AnMethod m,
                                    int trials, std::uint64_t seed, const McOptions& opt = {});

// Mean and standard error with order-fixed compensated summation.
McEstimate summarize(const std::vector<double>& xs, std::uint64_t seed);

}  // namespace msec
