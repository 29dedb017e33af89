// SPDX-License-Identifier: Apache-2.0
#include "msec/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "msec/errors.hpp"

namespace msec {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

LogSigned LogSigned::from(double v) {
  if (v == 0.0) return {kNegInf, 0};
  return {std::log(std::fabs(v)), v > 0 ? 1 : -1};
}

double LogSigned::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }

LogSigned operator*(LogSigned x, LogSigned y) {
  if (x.sign == 0 || y.sign == 0) return {kNegInf, 0};
  return {x.log_mag + y.log_mag, x.sign * y.sign};
}

LogSigned operator/(LogSigned x, LogSigned y) {
  if (y.sign == 0) throw std::domain_error("division by zero");
  if (x.sign == 0) return x;
  return {x.log_mag - y.log_mag, x.sign * y.sign};
}

LogSigned log_sum(const std::vector<LogSigned>& terms, double* cond) {
  double top = kNegInf;
  for (const auto& t : terms)
    if (t.sign != 0) top = std::max(top, t.log_mag);
  if (top == kNegInf) {
    if (cond) *cond = 1.0;
    return {kNegInf, 0};
  }
  // Neumaier summation of the scaled terms
  double s = 0.0, comp = 0.0, abs_sum = 0.0;
  for (const auto& t : terms) {
    if (t.sign == 0) continue;
    const double v = t.sign * std::exp(t.log_mag - top);
    abs_sum += std::fabs(v);
    const double u = s + v;
    if (std::fabs(s) >= std::fabs(v))
      comp += (s - u) + v;
    else
      comp += (v - u) + s;
    s = u;
  }
  s += comp;
  if (cond) *cond = s == 0.0 ? std::numeric_limits<double>::infinity() : abs_sum / std::fabs(s);
  if (s == 0.0) return {kNegInf, 0};
  return {top + std::log(std::fabs(s)), s > 0 ? 1 : -1};
}

void check_poles(const PoleSet& poles) {
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (!(poles[i].mu > 0.0) || poles[i].mult < 1)
      throw std::invalid_argument("poles need mu > 0 and multiplicity >= 1");
    for (std::size_t j = 0; j < i; ++j) {
      const double scale = std::max(poles[i].mu, poles[j].mu);
      if (std::fabs(poles[i].mu - poles[j].mu) <= 1e-12 * scale)
        throw NumericalError("coincident poles: merge the pole groups");
    }
  }
}

double log_integral_I(double a, int n) {
  if (!(a > 0.0) || n < 1) throw std::invalid_argument("I(a,n) needs a > 0 and n >= 1");
  constexpr double tol = 1e-17;
  if (std::fabs(a - 1.0) < 1e-8) return -std::log(double(n));

  if (a < 1.0) {
    // a^{1-n} sum_k (1-a)^k k!(n-1)!/(n+k)!, all terms positive
    const double u = 1.0 - a;
    long double t = 1.0L / n, sum = t;
    for (long k = 0;; ++k) {
      t *= u * (k + 1.0L) / (n + k + 1.0L);
      sum += t;
      if (t < tol * sum * a) break;
      if (k > 200'000'000) throw NumericalError("I(a,n): series did not converge");
    }
    return (1.0 - n) * std::log(a) + double(std::log(sum));
  }

  const double r = (a - 1.0) / a;
  if (40.0 * a <= 5e6) {
    // a^{-n} sum_k r^k / (n+k)
    long double pw = 1.0L, sum = 0.0L;
    for (long k = 0;; ++k) {
      const long double t = pw / (n + k);
      sum += t;
      if (t < tol * sum * (1.0 - r)) break;
      pw *= r;
    }
    return -n * std::log(a) + double(std::log(sum));
  }
  // Large a: (a-1)^{-n} [ln a - sum_{j<n} r^j / j]
  long double head = 0.0L, pw = 1.0L;
  for (int j = 1; j < n; ++j) {
    pw *= r;
    head += pw / j;
  }
  const long double la = std::log((long double)a);
  const long double rest = la - head;
  if (!(rest > 1e-6L * la)) throw NumericalError("I(a,n): cancellation at large a");
  return -n * std::log(a - 1.0) + double(std::log(rest));
}

double integral_I(double a, int n) { return std::exp(log_integral_I(a, n)); }

LogSigned log_binomial(long long n, long long k) {
  if (n < 0 || k < 0 || k > n) throw std::invalid_argument("log_binomial needs 0 <= k <= n");
  k = std::min(k, n - k);
  if (k <= 64) {
    long double v = 1.0L;
    for (long long i = 1; i <= k; ++i) v = v * (long double)(n - k + i) / (long double)i;
    return {double(std::log(v)), 1};
  }
  const long double v = std::lgamma((long double)n + 1.0L) - std::lgamma((long double)k + 1.0L) -
                       std::lgamma((long double)(n - k) + 1.0L);
  return {double(v), 1};
}

std::vector<LogSigned> pf_weights(int i, const PoleSet& poles, std::size_t j) {
  check_poles(poles);
  if (j >= poles.size()) throw std::out_of_range("pole index");
  int total = 0;
  for (const auto& p : poles) total += p.mult;
  if (i < 0 || i >= total) throw std::invalid_argument("pf_weights needs 0 <= i < sum of multiplicities");

  const int N = poles[j].mult;
  const long double pj = -1.0L / poles[j].mu;

  // (pj + t)^i = |pj|^i * sum_m C(i,m) sgn(pj)^{i-m} |pj|^{-m} t^m
  long double log_scale = i * std::log(std::fabs(pj));
  int sign = (i % 2 == 0) ? 1 : -1;  // sgn(pj)^i with pj < 0
  std::vector<long double> c(N, 0.0L);
  {
    long double coef = 1.0L;  // C(i,m) * (1/pj)^m
    for (int m = 0; m < N && m <= i; ++m) {
      c[m] = coef;
      coef *= (long double)(i - m) / (m + 1) / pj;
    }
  }

  std::vector<long double> e(N), tmp(N);
  for (std::size_t s = 0; s < poles.size(); ++s) {
    if (s == j) continue;
    const long double ps = -1.0L / poles[s].mu;
    const long double d = pj - ps;
    const int b = poles[s].mult;
    // (d + t)^{-b} = d^{-b} sum_m C(b+m-1,m) (-t/d)^m
    log_scale -= b * std::log(std::fabs(d));
    if (d < 0 && (b % 2 == 1)) sign = -sign;
    e[0] = 1.0L;
    for (int m = 1; m < N; ++m) e[m] = e[m - 1] * (long double)(b + m - 1) / m * (-1.0L / d);
    for (int m = 0; m < N; ++m) {
      long double acc = 0.0L;
      for (int r = 0; r <= m; ++r) acc += c[r] * e[m - r];
      tmp[m] = acc;
    }
    c.swap(tmp);
  }

  std::vector<LogSigned> w(N);
  for (int l = 1; l <= N; ++l) {
    const long double v = c[N - l];
    if (!std::isfinite((double)v)) throw NumericalError("pf_weights: series overflow");
    if (v == 0.0L) {
      w[l - 1] = {kNegInf, 0};
    } else {
      w[l - 1] = {double(std::log(std::fabs(v)) + log_scale), (v > 0 ? 1 : -1) * sign};
    }
  }
  return w;
}

double log_rational(double x, int i, const PoleSet& poles) {
  double v = 0.0;
  if (i > 0) v = (x > 0.0) ? i * std::log(x) : kNegInf;
  for (const auto& p : poles) v -= p.mult * std::log(x + 1.0 / p.mu);
  return v;
}

double pf_recombination_error(int i, const PoleSet& poles,
                              const std::vector<std::vector<LogSigned>>& weights,
                              const std::vector<double>& xs) {
  double worst = 0.0;
  std::vector<LogSigned> terms;
  for (double x : xs) {
    terms.clear();
    for (std::size_t j = 0; j < poles.size(); ++j) {
      const double lx = std::log(x + 1.0 / poles[j].mu);
      for (std::size_t l = 1; l <= weights[j].size(); ++l) {
        const LogSigned& w = weights[j][l - 1];
        if (w.sign != 0) terms.push_back({w.log_mag - double(l) * lx, w.sign});
      }
    }
    double cond = 1.0;
    const LogSigned r = log_sum(terms, &cond);
    const double direct = log_rational(x, i, poles);
    // scale by sum |terms| so ill-conditioned x points do not mask accurate weights
    const double scale = std::max(r.sign == 0 ? kNegInf : r.log_mag + std::log(cond), direct);
    const double got = r.sign == 0 ? 0.0 : r.sign * std::exp(r.log_mag - scale);
    const double err = std::fabs(got - std::exp(direct - scale));
    worst = std::max(worst, err);
  }
  return worst;
}

double log_tail(double x, const std::vector<LogSigned>& coeffs, const PoleSet& poles) {
  if (x < 0.0) throw std::invalid_argument("tail needs x >= 0");
  std::vector<LogSigned> terms;
  terms.reserve(coeffs.size());
  const double lx = x > 0.0 ? std::log(x) : kNegInf;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].sign == 0) continue;
    if (i == 0)
      terms.push_back(coeffs[i]);
    else if (x > 0.0)
      terms.push_back({coeffs[i].log_mag + double(i) * lx, coeffs[i].sign});
  }
  const LogSigned num = log_sum(terms);
  if (num.sign < 0) throw NumericalError("tail numerator negative");
  if (num.sign == 0) return kNegInf;
  double den = 0.0;
  for (const auto& p : poles) den += p.mult * std::log1p(p.mu * x);
  return num.log_mag - den;
}

double eval_tail_log(double x, const std::vector<LogSigned>& coeffs, const PoleSet& poles) {
  const double v = std::exp(log_tail(x, coeffs, poles));
  if (v < -1e-9 || v > 1.0 + 1e-9)
    throw NumericalError("tail value " + std::to_string(v) + " outside [0,1]");
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace msec
