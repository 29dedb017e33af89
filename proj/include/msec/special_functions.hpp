// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace msec {

// sign * exp(log_mag); sign == 0 means exactly zero.
struct LogSigned {
  double log_mag = 0.0;
  int sign = 0;

  static LogSigned from(double v);
  static LogSigned from_log(double log_mag, int sign = 1) { return {log_mag, sign}; }
  double value() const;
};

LogSigned operator*(LogSigned x, LogSigned y);
LogSigned operator/(LogSigned x, LogSigned y);

// Sum with scaling by the largest magnitude. cond receives
// sum|terms| / |sum| (infinity if the sum cancels to zero).
LogSigned log_sum(const std::vector<LogSigned>& terms, double* cond = nullptr);

struct Pole {
  double mu;
  int mult;
};
using PoleSet = std::vector<Pole>;

void check_poles(const PoleSet& poles);

// I(a,n) = int_0^inf dx / ((x+1)(x+a)^n)
double log_integral_I(double a, int n);
double integral_I(double a, int n);

LogSigned log_binomial(long long n, long long k);

// Partial-fraction weights omega_{j,l}, l = 1..b_j, of
// x^i / prod_s (x + 1/mu_s)^{b_s} at the pole x = -1/mu_j.
std::vector<LogSigned> pf_weights(int i, const PoleSet& poles, std::size_t j);

// log of x^i / prod_s (x + 1/mu_s)^{b_s} for x >= 0 (sign is +)
double log_rational(double x, int i, const PoleSet& poles);

// Mismatch between the recombined partial fractions and the direct rational
// function, relative to the larger of the value and the sum of |terms|;
// maximised over the given points.
double pf_recombination_error(int i, const PoleSet& poles,
                              const std::vector<std::vector<LogSigned>>& weights,
                              const std::vector<double>& xs);

// sum_i coeffs[i] x^i / prod_j (1 + mu_j x)^{b_j}
double log_tail(double x, const std::vector<LogSigned>& coeffs, const PoleSet& poles);
double eval_tail_log(double x, const std::vector<LogSigned>& coeffs, const PoleSet& poles);

}  // namespace msec
