// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "msec/config.hpp"
#include "msec/special_functions.hpp"

namespace msec {

struct TailDistribution {
  std::vector<LogSigned> coeffs;  // lambda_i, i = 0..Ne-1
  PoleSet poles;

  double operator()(double x) const { return eval_tail_log(x, coeffs, poles); }
  int denominator_degree() const;
};

TailDistribution eve_tail(const Scenario& s);
// Same, from raw dimensions (used by tests with synthetic eta).
TailDistribution eve_tail(int M, int Nt, int K, int Ne, double rho, double eta);

double eve_capacity_series(const TailDistribution& t);
double eve_capacity_quadrature(const TailDistribution& t, double* abs_err = nullptr);
double eve_capacity_series(const Scenario& s);
double eve_capacity_quadrature(const Scenario& s);
// Series when the multiplicities are small and the series passes its checks,
// quadrature otherwise.
double eve_capacity(const Scenario& s);

struct WishartMatch {
  double xi;
  double dof;
  bool applicable;  // dof - Ne > 1
};
WishartMatch wishart_match(const Scenario& s);

bool eve_ub_applicable(const Scenario& s);
double eve_capacity_ub(const Scenario& s);
double eve_capacity_ub_phi_form(const Scenario& s);

// Finite-N_t SINR terms, normalised by the data power p (sigma^2/p for noise).
struct SinrTerms {
  double desired;       // |E[h w]|^2
  double leakage;       // var[h w]
  double an;            // eta * sum E|h v|^2
  double interference;  // sum over other beams E|h w|^2
  double noise;         // K sigma^2 / (phi P)
  double sinr() const { return desired / (leakage + an + interference + noise); }
};

double chi_mean(int Nt);  // E[x] with x^2 ~ chi^2_{2 Nt} / 2

SinrTerms sinr_terms(const Scenario& s, const PathLossModel& pl, AnMethod m);

// Perfect training; finite = false gives the large-N_t form.
double user_sinr(const Scenario& s, const PathLossModel& pl, AnMethod m, bool finite);
double user_sinr_pc(const Scenario& s, const PathLossModel& pl, AnMethod m, bool finite);

// gamma(phi) = L phi / (B + C phi) for the simplified model, large N_t.
struct SinrShape {
  double B, C, L;
  double at(double phi) const { return L * phi / (B + C * phi); }
};
SinrShape sinr_shape(const Scenario& s, AnMethod m);

double sinr_asymptotic(const Scenario& s, AnMethod m);
double rate_lb(const Scenario& s, AnMethod m);

enum class Flavor { BoundI, BoundII };

struct SecrecyBounds {
  double rate_lb;
  double eve_capacity;
  double secrecy_lb;
  Flavor flavor;
};

SecrecyBounds secrecy_lb(const Scenario& s, AnMethod m, Flavor f);
// BoundII written as a ratio of polynomials in phi (before log2 and clipping).
double secrecy_ratio_poly(const Scenario& s, AnMethod m);

double alpha_sec(const Scenario& s, AnMethod m);

struct PhiCrossings {
  double phi0;
  double phi1;
};
PhiCrossings phi_crossings(const Scenario& s, AnMethod m);
double phi_opt(const Scenario& s, AnMethod m);
// Root of the stationarity quadratic, valid for any (B, C, L) shape.
double phi_opt_generic(const Scenario& s, AnMethod m);

// BoundII at phi*; zero when alpha >= alpha_sec.
double secrecy_lb_opt(const Scenario& s, AnMethod m);

double outage_ub(const Scenario& s, AnMethod m, double R0);

Scenario with_tau(const Scenario& s, int tau);
double net_secrecy(const Scenario& s, AnMethod m, int tau, bool reoptimize_phi = true);

struct TauChoice {
  int tau;
  double net_rate;
};
TauChoice optimize_tau(const Scenario& s, AnMethod m);

}  // namespace msec
