// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "msec/closed_form.hpp"
#include "msec/errors.hpp"

namespace msec {

int TailDistribution::denominator_degree() const {
  int d = 0;
  for (const auto& p : poles) d += p.mult;
  return d;
}

TailDistribution eve_tail(int M, int Nt, int K, int Ne, double rho, double eta) {
  if (!(eta > 0.0)) throw NotApplicable("no AN power: eavesdropper capacity is unbounded");
  const long long b1 = Nt - K;
  const long long b2 = static_cast<long long>(M - 1) * (Nt - K);
  if (b1 + b2 < Ne) throw NotApplicable("M(N_t-K) < N_e: AN covariance at the eavesdropper is singular");

  TailDistribution t;
  if (M == 1 || rho == 0.0)
    t.poles = {{eta, int(b1)}};
  else if (rho == 1.0)
    t.poles = {{eta, int(b1 + b2)}};
  else
    t.poles = {{eta, int(b1)}, {rho * eta, int(b2)}};

  // lambda_i = [x^i] prod_j (1 + mu_j x)^{b_j}
  const int L = t.denominator_degree();
  t.coeffs.resize(Ne);
  for (int i = 0; i < Ne; ++i) {
    if (t.poles.size() == 1) {
      t.coeffs[i] = {log_binomial(L, i).log_mag + i * std::log(t.poles[0].mu), 1};
      continue;
    }
    std::vector<LogSigned> parts;
    const double l1 = std::log(t.poles[0].mu), l2 = std::log(t.poles[1].mu);
    for (int k = 0; k <= i; ++k) {
      if (k > t.poles[0].mult || i - k > t.poles[1].mult) continue;
      parts.push_back({log_binomial(t.poles[0].mult, k).log_mag + k * l1 +
                           log_binomial(t.poles[1].mult, i - k).log_mag + (i - k) * l2,
                       1});
    }
    t.coeffs[i] = log_sum(parts);
  }
  return t;
}

TailDistribution eve_tail(const Scenario& s) {
  const auto& c = s.cfg;
  return eve_tail(c.M, c.Nt, c.K, c.Ne, c.rho, s.dp.eta);
}

double eve_capacity_series(const TailDistribution& t) {
  const auto& poles = t.poles;
  double log_mu0 = 0.0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& p : poles) {
    log_mu0 += p.mult * std::log(p.mu);
    lo = std::min(lo, 1.0 / p.mu);
    hi = std::max(hi, 1.0 / p.mu);
  }
  std::vector<double> xs;
  for (int k = 0; k < 8; ++k) xs.push_back(0.01 * lo * std::pow(1e4 * hi / lo, k / 7.0));

  std::vector<LogSigned> terms;
  for (std::size_t i = 0; i < t.coeffs.size(); ++i) {
    if (t.coeffs[i].sign == 0) continue;
    std::vector<std::vector<LogSigned>> w(poles.size());
    for (std::size_t j = 0; j < poles.size(); ++j) w[j] = pf_weights(int(i), poles, j);
    if (pf_recombination_error(int(i), poles, w, xs) > 1e-8)
      throw NumericalError("partial-fraction series failed its recombination check; use eve_capacity_quadrature");
    for (std::size_t j = 0; j < poles.size(); ++j) {
      const double a = 1.0 / poles[j].mu;
      for (std::size_t l = 1; l <= w[j].size(); ++l) {
        const LogSigned& om = w[j][l - 1];
        if (om.sign == 0) continue;
        terms.push_back({t.coeffs[i].log_mag - log_mu0 + om.log_mag + log_integral_I(a, int(l)),
                         t.coeffs[i].sign * om.sign});
      }
    }
  }
  double cond = 0.0;
  const LogSigned sum = log_sum(terms, &cond);
  if (!(cond * 1e-16 < 1e-9))
    throw NumericalError("partial-fraction series lost too many digits; use eve_capacity_quadrature");
  const double v = sum.value() / std::numbers::ln2;
  if (v < -1e-12) throw NumericalError("negative series capacity; use eve_capacity_quadrature");
  return std::max(v, 0.0);
}

double eve_capacity_quadrature(const TailDistribution& t, double* abs_err) {
  using boost::math::quadrature::gauss_kronrod;
  const int L = t.denominator_degree();
  double log_mu0 = 0.0, slope = 0.0, mu_max = 0.0;
  for (const auto& p : t.poles) {
    log_mu0 += p.mult * std::log(p.mu);
    slope += p.mult * p.mu;
    mu_max = std::max(mu_max, p.mu);
  }

  // int_X^inf T(x)/(1+x) dx <= sum_i lambda_i X^{i-L} / (mu0 (L-i))
  auto log_tail_bound = [&](double X) {
    std::vector<LogSigned> parts;
    for (std::size_t i = 0; i < t.coeffs.size(); ++i) {
      if (t.coeffs[i].sign == 0) continue;
      parts.push_back({t.coeffs[i].log_mag + (double(i) - L) * std::log(X) - log_mu0 -
                           std::log(double(L) - double(i)),
                       1});
    }
    return log_sum(parts).log_mag;
  };
  const double target = std::log(1e-12);
  double X = 1.0 / mu_max;
  while (log_tail_bound(X) > target) {
    X *= 2.0;
    if (X > 1e300) throw NumericalError("quadrature: tail bound does not decay");
  }

  auto f = [&](double x) { return std::exp(log_tail(x, t.coeffs, t.poles)) / (1.0 + x); };
  double total = 0.0, err_total = std::exp(log_tail_bound(X));
  double a = 0.0, b = std::min(1e-2 / slope, X);
  while (a < X) {
    double err = 0.0;
    total += gauss_kronrod<double, 31>::integrate(f, a, b, 6, 1e-13, &err);
    err_total += err;
    a = b;
    b = std::min(2.0 * b, X);
  }
  if (err_total > 1e-8 * std::max(1.0, total))
    throw NumericalError("quadrature did not converge, estimated error " + std::to_string(err_total));
  if (abs_err) *abs_err = err_total / std::numbers::ln2;
  return total / std::numbers::ln2;
}

double eve_capacity_series(const Scenario& s) { return eve_capacity_series(eve_tail(s)); }
double eve_capacity_quadrature(const Scenario& s) { return eve_capacity_quadrature(eve_tail(s)); }

double eve_capacity(const Scenario& s) {
  const TailDistribution t = eve_tail(s);
  bool small = true;
  for (const auto& p : t.poles) small = small && p.mult < 50;
  if (small) {
    try {
      return eve_capacity_series(t);
    } catch (const NumericalError&) {
    }
  }
  return eve_capacity_quadrature(t);
}

}  // namespace msec
