// SPDX-License-Identifier: Apache-2.0
#include "msec/closed_form.hpp"

#include <algorithm>
#include <cmath>

#include "msec/errors.hpp"

namespace msec {

namespace {

bool contaminated(const Scenario& s) { return s.cfg.training == Training::PilotContamination; }

Scenario with_phi(const Scenario& s, double phi) {
  SystemConfig c = s.cfg;
  c.phi = phi;
  return make_scenario(c);
}

double noise_over_p(const Scenario& s) { return s.cfg.K * s.cfg.sigma_mt_sq / (s.cfg.phi * s.cfg.P); }

SinrTerms terms_impl(const Scenario& s, const PathLossModel& pl, AnMethod m, bool pc,
                     double ex, double ex2) {
  const auto& c = s.cfg;
  const double eta = s.dp.eta;
  const double var = ex2 - ex * ex;
  const int AN = c.Nt - c.K;
  SinrTerms t{};
  t.noise = noise_over_p(s);

  double S = 0.0;
  for (int mm = 0; mm < c.M; ++mm) S += pl.l_user(mm, 0);
  const double l0 = pl.l_user(0, 0);

  if (!pc) {
    t.desired = l0 * ex * ex;
    t.leakage = l0 * var;
    const double an_sum = (m == AnMethod::Random) ? S : S - l0;
    t.an = eta * AN * an_sum;
    t.interference = c.K * S - l0;
    return t;
  }
  const double E = c.p_tau * c.tau;
  const double den = 1.0 + E * S;
  auto lam = [&](int mm) { double l = pl.l_user(mm, 0); return E * l * l / den; };
  auto mu = [&](int mm) { double l = pl.l_user(mm, 0); return l * (1.0 + E * (S - l)) / den; };

  t.desired = lam(0) * ex * ex;
  t.leakage = lam(0) * var + mu(0);
  double an_sum = (m == AnMethod::NullSpace) ? mu(0) : l0;
  double interf = (c.K - 1) * S;
  for (int mm = 1; mm < c.M; ++mm) {
    an_sum += pl.l_user(mm, 0);
    interf += lam(mm) * ex2 + mu(mm);
  }
  t.an = eta * AN * an_sum;
  t.interference = interf;
  return t;
}

}  // namespace

double chi_mean(int Nt) { return std::exp(std::lgamma(Nt + 0.5) - std::lgamma(double(Nt))); }

SinrTerms sinr_terms(const Scenario& s, const PathLossModel& pl, AnMethod m) {
  const double ex = chi_mean(s.cfg.Nt);
  return terms_impl(s, pl, m, contaminated(s), ex, s.cfg.Nt);
}

double user_sinr(const Scenario& s, const PathLossModel& pl, AnMethod m, bool finite) {
  const double Nt = s.cfg.Nt;
  if (finite) return terms_impl(s, pl, m, false, chi_mean(s.cfg.Nt), Nt).sinr();
  if (pl.mode == PathLossModel::Mode::Explicit) {
    SinrTerms t = terms_impl(s, pl, m, false, std::sqrt(Nt), Nt);
    return t.sinr();
  }
  const auto& d = s.dp;
  const double Mm1 = s.cfg.M - 1, rho = s.cfg.rho;
  const double an_gain = (m == AnMethod::NullSpace) ? Mm1 * rho : Mm1 * rho + 1.0;
  const double noise = d.beta * s.cfg.sigma_mt_sq / (s.cfg.phi * s.cfg.P);
  return 1.0 / (an_gain * (1.0 - d.beta) * d.eta + Mm1 * d.beta * rho + d.beta + noise);
}

double user_sinr_pc(const Scenario& s, const PathLossModel& pl, AnMethod m, bool finite) {
  const double Nt = s.cfg.Nt;
  if (finite) return terms_impl(s, pl, m, true, chi_mean(s.cfg.Nt), Nt).sinr();
  if (pl.mode == PathLossModel::Mode::Explicit)
    return terms_impl(s, pl, m, true, std::sqrt(Nt), Nt).sinr();
  const auto& d = s.dp;
  const double lam = d.lambda;
  const double an_gain = (m == AnMethod::NullSpace) ? d.a - lam : d.a;
  const double noise = d.beta * s.cfg.sigma_mt_sq / (s.cfg.phi * s.cfg.P);
  return lam / (an_gain * (1.0 - d.beta) * d.eta + d.a * d.beta + (d.c - 1.0) * lam + noise);
}

SinrShape sinr_shape(const Scenario& s, AnMethod m) {
  const auto& d = s.dp;
  const double b = d.a - 1.0 + s.cfg.sigma_mt_sq / s.cfg.P;
  const double be = d.beta;
  if (!contaminated(s)) {
    if (m == AnMethod::NullSpace) return {be * b, be, 1.0};
    return {be * (b + 1.0), 0.0, 1.0};
  }
  const double lam = d.lambda;
  if (m == AnMethod::NullSpace) return {be * (b + 1.0 - lam), (be + d.c - 1.0) * lam, lam};
  return {be * (b + 1.0), (d.c - 1.0) * lam, lam};
}

double sinr_asymptotic(const Scenario& s, AnMethod m) { return sinr_shape(s, m).at(s.cfg.phi); }

double rate_lb(const Scenario& s, AnMethod m) { return std::log2(1.0 + sinr_asymptotic(s, m)); }

WishartMatch wishart_match(const Scenario& s) {
  const auto& d = s.dp;
  if (!(d.q > 0.0)) throw NotApplicable("no AN power");
  WishartMatch w;
  w.xi = d.q * d.c / d.a;
  w.dof = (s.cfg.Nt - s.cfg.K) * d.a * d.a / d.c;
  w.applicable = w.dof - s.cfg.Ne > 1.0;
  return w;
}

bool eve_ub_applicable(const Scenario& s) {
  const auto& d = s.dp;
  return d.eta > 0.0 && d.beta < 1.0 - d.c * d.alpha / (d.a * d.a);
}

double eve_capacity_ub(const Scenario& s) {
  if (!eve_ub_applicable(s)) throw NotApplicable("upper bound not applicable (beta >= 1 - c alpha / a^2 or no AN)");
  const auto& d = s.dp;
  return std::log2(1.0 + d.alpha / (d.eta * d.a * (1.0 - d.beta) - d.c * d.eta * d.alpha / d.a));
}

double eve_capacity_ub_phi_form(const Scenario& s) {
  if (!eve_ub_applicable(s)) throw NotApplicable("upper bound not applicable (beta >= 1 - c alpha / a^2 or no AN)");
  const double z = s.dp.zeta, phi = s.cfg.phi;
  return std::log2(((1.0 - z) * phi + z) / (z - z * phi));
}

double secrecy_ratio_poly(const Scenario& s, AnMethod m) {
  const auto& d = s.dp;
  const double b = d.b, be = d.beta, z = d.zeta, c = d.c, lam = d.lambda, f = s.cfg.phi;
  double n0, n1, n2, d0, d1, d2;
  if (!contaminated(s)) {
    if (m == AnMethod::NullSpace) {
      n0 = b * be * z;
      n1 = (be + 1.0 - b * be) * z;
      n2 = -(be + 1.0) * z;
      d0 = b * be * z;
      d1 = b * be * (1.0 - z) + be * z;
      d2 = be * (1.0 - z);
    } else {
      n0 = (b + 1.0) * be * z;
      n1 = (1.0 - (b + 1.0) * be) * z;
      n2 = -z;
      d0 = (b + 1.0) * be * z;
      d1 = (b + 1.0) * be * (1.0 - z);
      d2 = 0.0;
    }
  } else if (m == AnMethod::NullSpace) {
    const double g = b + 1.0 - lam;
    n0 = g * be * z;
    n1 = ((be + c) * lam - g * be) * z;
    n2 = -z * (be + c) * lam;
    d0 = g * be * z;
    d1 = (be + c - 1.0) * lam * z + g * be * (1.0 - z);
    d2 = (1.0 - z) * (be + c - 1.0) * lam;
  } else {
    const double g = b + 1.0;
    n0 = g * be * z;
    n1 = (c * lam - g * be) * z;
    n2 = -z * c * lam;
    d0 = g * be * z;
    d1 = (c - 1.0) * lam * z + g * be * (1.0 - z);
    d2 = (1.0 - z) * (c - 1.0) * lam;
  }
  return (n0 + n1 * f + n2 * f * f) / (d0 + d1 * f + d2 * f * f);
}

SecrecyBounds secrecy_lb(const Scenario& s, AnMethod m, Flavor f) {
  SecrecyBounds r{};
  r.flavor = f;
  r.rate_lb = rate_lb(s, m);
  if (f == Flavor::BoundI) {
    r.eve_capacity = eve_capacity(s);
    r.secrecy_lb = std::max(0.0, r.rate_lb - r.eve_capacity);
  } else {
    r.eve_capacity = eve_capacity_ub(s);
    r.secrecy_lb = std::max(0.0, std::log2(secrecy_ratio_poly(s, m)));
  }
  return r;
}

double alpha_sec(const Scenario& s, AnMethod m) {
  const auto& d = s.dp;
  const double a = d.a, b = d.b, c = d.c, be = d.beta, lam = d.lambda;
  if (!(be < 1.0)) throw NotApplicable("beta must be < 1");
  if (!contaminated(s)) {
    if (m == AnMethod::NullSpace) return a * a * (1 - be) / (a * b * (1 - be) + c);
    return a * a * (1 - be) / (a * (b + 1) * (1 - be) + c);
  }
  if (m == AnMethod::NullSpace) return a * a * (1 - be) * lam / (a * (1 - be) * (1 + b - lam) + c * lam);
  return a * a * (1 - be) * lam / (a * (1 - be) * (1 + b) + c * lam);
}

namespace {
void require_positive_secrecy(const Scenario& s, AnMethod m) {
  if (!(s.dp.alpha < alpha_sec(s, m)))
    throw NotApplicable("alpha >= alpha_sec: no positive-secrecy interval");
}
}  // namespace

PhiCrossings phi_crossings(const Scenario& s, AnMethod m) {
  require_positive_secrecy(s, m);
  const auto& d = s.dp;
  const double a = d.a, b = d.b, c = d.c, be = d.beta, al = d.alpha, lam = d.lambda;
  double phi1;
  if (!contaminated(s)) {
    const double num = al * a * (1 - be) * (b + 1);
    if (m == AnMethod::NullSpace)
      phi1 = 1 - num / (a * a * (1 - be) * (1 + al / a) - c * al);
    else
      phi1 = 1 - num / (a * a * (1 - be) - c * al);
  } else {
    const double num = al * a * (be - 1) * ((b + 1) * be + lam * (c - 1));
    double den;
    if (m == AnMethod::NullSpace)
      den = lam * (a * (a + al) * be * be + (-a * a + al * (c - 2) * a + c * al) * be - a * al * (c - 1));
    else
      den = lam * (a * a * be * be + (-a * a + a * al * (c - 1) + c * al) * be - a * al * (c - 1));
    phi1 = 1 - num / den;
  }
  return {0.0, phi1};
}

double phi_opt_generic(const Scenario& s, AnMethod m) {
  require_positive_secrecy(s, m);
  const SinrShape sh = sinr_shape(s, m);
  const double z = s.dp.zeta, B = sh.B, C = sh.C, L = sh.L;
  const double A2 = C * (C + L) + L * B * (1 - z);
  const double A1 = 2 * B * (C + L * z);
  const double A0 = B * (B - L * z);
  if (std::fabs(A2) < 1e-14 * std::fabs(A1)) return -A0 / A1;
  const double disc = std::max(0.0, A1 * A1 - 4 * A2 * A0);
  // numerically stable root selection
  const double sq = std::sqrt(disc);
  if (A1 > 0) return (2 * (-A0)) / (A1 + sq);
  return (-A1 + sq) / (2 * A2);
}

double phi_opt(const Scenario& s, AnMethod m) {
  require_positive_secrecy(s, m);
  const auto& d = s.dp;
  const double b = d.b, c = d.c, be = d.beta, z = d.zeta, lam = d.lambda;
  double num, den;
  if (!contaminated(s)) {
    if (m == AnMethod::NullSpace) {
      num = -(b * be + b * z) + std::sqrt(std::max(0.0, b * (b + 1) * (z - b * be + be * z + b * be * z)));
      den = 1 + b + be - b * z;
    } else {
      num = -z + std::sqrt(std::max(0.0, z - be - b * be + z * be + b * be * z));
      den = 1 - z;
    }
  } else if (m == AnMethod::NullSpace) {
    const double rad = (b + 1 - lam) * ((c - 1) * lam + (b + 1) * be) * be *
                       ((be + c * z) * lam + (z - 1) * be * (b + 1)) * lam;
    num = -std::sqrt(std::max(0.0, rad)) + (-lam * lam + (b + 1) * lam) * be * be +
          ((-c - z + 1) * lam * lam + ((z - 1 + c) * b + z - 1 + c) * lam) * be;
    den = (-lam * be * be + ((2 - 2 * c - z) * lam + (z - 1) * (b + 1)) * be - c * lam * (c - 1)) * lam;
  } else {
    const double rad = lam * ((c - 1) * lam + (b + 1) * be) * (b + 1) * (c * z * lam + (z - 1) * be * (b + 1)) * be;
    num = -std::sqrt(std::max(0.0, rad)) + ((z - 1 + c) * b + z - 1 + c) * lam * be;
    den = lam * ((z - 1) * be * (b + 1) - c * lam * (c - 1));
  }
  // Removable singularity (e.g. zeta = 1 for the R form): use the quadratic root.
  if (std::fabs(den) < 1e-9 * (1.0 + std::fabs(num))) return phi_opt_generic(s, m);
  return num / den;
}

double secrecy_lb_opt(const Scenario& s, AnMethod m) {
  if (!(s.dp.alpha < alpha_sec(s, m))) return 0.0;
  const double phi = std::clamp(phi_opt(s, m), 1e-12, 1.0);
  return secrecy_lb(with_phi(s, phi), m, Flavor::BoundII).secrecy_lb;
}

double outage_ub(const Scenario& s, AnMethod m, double R0) {
  if (R0 < 0.0) throw std::invalid_argument("R0 must be nonnegative");
  const TailDistribution t = eve_tail(s);
  const double thr = std::exp2(rate_lb(s, m) - R0) - 1.0;
  if (thr <= 0.0) return 1.0;
  return t(thr);
}

Scenario with_tau(const Scenario& s, int tau) {
  SystemConfig c = s.cfg;
  c.tau = tau;
  return make_scenario(c);
}

double net_secrecy(const Scenario& s, AnMethod m, int tau, bool reoptimize_phi) {
  if (!contaminated(s)) throw NotApplicable("net secrecy rate needs pilot-contamination training");
  if (tau < s.cfg.K || tau >= s.cfg.T_coh) throw NotApplicable("tau outside [K, T)");
  const Scenario st = with_tau(s, tau);
  double sec;
  if (reoptimize_phi) {
    sec = secrecy_lb_opt(st, m);
  } else {
    sec = secrecy_lb(st, m, Flavor::BoundII).secrecy_lb;
  }
  return (1.0 - double(tau) / s.cfg.T_coh) * sec;
}

TauChoice optimize_tau(const Scenario& s, AnMethod m) {
  if (!contaminated(s)) throw NotApplicable("net secrecy rate needs pilot-contamination training");
  if (s.cfg.K >= s.cfg.T_coh) throw NotApplicable("empty training range [K, T)");
  TauChoice best{s.cfg.K, net_secrecy(s, m, s.cfg.K)};
  for (int tau = s.cfg.K + 1; tau < s.cfg.T_coh; ++tau) {
    const double v = net_secrecy(s, m, tau);
    if (v > best.net_rate) best = {tau, v};
  }
  return best;
}

}  // namespace msec
