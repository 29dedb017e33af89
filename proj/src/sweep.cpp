// SPDX-License-Identifier: Apache-2.0
#include "msec/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "msec/closed_form.hpp"
#include "msec/errors.hpp"
#include "msec/montecarlo.hpp"

namespace msec {

namespace {

const std::pair<SweepVar, const char*> kVars[] = {
    {SweepVar::Nt, "Nt"},   {SweepVar::beta, "beta"}, {SweepVar::phi, "phi"},
    {SweepVar::alpha, "alpha"}, {SweepVar::rho, "rho"}, {SweepVar::R0, "R0"},
    {SweepVar::tau, "tau"}, {SweepVar::lambda, "lambda"}, {SweepVar::ptau, "ptau"},
};

const std::pair<Quantity, const char*> kQuantities[] = {
    {Quantity::rate_lb, "rate_lb"},         {Quantity::secrecy_lb_I, "secrecy_lb_I"},
    {Quantity::secrecy_lb_II, "secrecy_lb_II"}, {Quantity::eve_cap, "eve_cap"},
    {Quantity::eve_cap_ub, "eve_cap_ub"},   {Quantity::outage_ub, "outage_ub"},
    {Quantity::mc_rate, "mc_rate"},         {Quantity::mc_eve_cap, "mc_eve_cap"},
    {Quantity::mc_outage, "mc_outage"},     {Quantity::mc_secrecy, "mc_secrecy"},
    {Quantity::phi_opt, "phi_opt"},         {Quantity::alpha_sec, "alpha_sec"},
    {Quantity::net_secrecy, "net_secrecy"},
};

bool integer_var(SweepVar v) { return v == SweepVar::Nt || v == SweepVar::tau; }

Scenario at_phi(const Scenario& s, double phi) {
  SystemConfig c = s.cfg;
  c.phi = phi;
  return make_scenario(c);
}

}  // namespace

const char* to_string(SweepVar v) {
  for (const auto& [k, name] : kVars)
    if (k == v) return name;
  return "?";
}

const char* to_string(Quantity q) {
  for (const auto& [k, name] : kQuantities)
    if (k == q) return name;
  return "?";
}

SweepVar parse_sweep_var(const std::string& s) {
  for (const auto& [k, name] : kVars)
    if (s == name) return k;
  throw UsageError("unknown sweep variable '" + s + "'");
}

Quantity parse_quantity(const std::string& s) {
  for (const auto& [k, name] : kQuantities)
    if (s == name) return k;
  throw UsageError("unknown quantity '" + s + "'");
}

std::vector<Quantity> parse_quantities(const std::string& csv) {
  std::vector<Quantity> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_quantity(item));
  if (out.empty()) throw UsageError("no quantities requested");
  return out;
}

bool is_monte_carlo(Quantity q) {
  return q == Quantity::mc_rate || q == Quantity::mc_eve_cap || q == Quantity::mc_outage ||
         q == Quantity::mc_secrecy;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

SweepSpec parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw UsageError("sweep must look like VAR=start:stop:steps");
  SweepSpec spec;
  spec.variable = parse_sweep_var(text.substr(0, eq));
  std::vector<std::string> parts;
  std::stringstream ss(text.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw UsageError("sweep must look like VAR=start:stop:steps");
  double start, stop;
  long steps;
  try {
    std::size_t p1, p2, p3;
    start = std::stod(parts[0], &p1);
    stop = std::stod(parts[1], &p2);
    steps = std::stol(parts[2], &p3);
    if (p1 != parts[0].size() || p2 != parts[1].size() || p3 != parts[2].size()) throw 0;
  } catch (...) {
    throw UsageError("malformed sweep range '" + text + "'");
  }
  if (steps < 1 || steps > 1'000'000) throw UsageError("sweep steps must be in [1, 1e6]");
  if (steps == 1) {
    spec.grid = {start};
  } else {
    for (long i = 0; i < steps; ++i) {
      double v = start + (stop - start) * double(i) / double(steps - 1);
      if (i == steps - 1) v = stop;
      spec.grid.push_back(v);
    }
  }
  return spec;
}

void check_sweep(const SweepSpec& spec, const SystemConfig& base) {
  if (spec.grid.empty()) throw UsageError("empty sweep grid");
  std::vector<double> g = spec.grid;
  if (integer_var(spec.variable))
    for (double& v : g) v = std::round(v);
  const bool up = g.size() > 1 && g[1] > g[0];
  for (std::size_t i = 1; i < g.size(); ++i)
    if (up ? !(g[i] > g[i - 1]) : !(g[i] < g[i - 1]))
      throw UsageError("sweep grid must be strictly monotone");
  if (spec.quantities.empty()) throw UsageError("no quantities requested");
  if (!(spec.R0 >= 0.0)) throw UsageError("R0 must be nonnegative");
  if (spec.variable == SweepVar::R0 && *std::min_element(g.begin(), g.end()) < 0.0)
    throw UsageError("R0 must be nonnegative");
  const bool pc = base.training == Training::PilotContamination;
  for (Quantity q : spec.quantities)
    if (q == Quantity::net_secrecy && !pc)
      throw UsageError("net_secrecy requires training = contaminated");
  if (!pc && (spec.variable == SweepVar::lambda || spec.variable == SweepVar::ptau ||
              spec.variable == SweepVar::tau))
    throw UsageError(std::string("sweeping ") + to_string(spec.variable) +
                     " requires training = contaminated");
}

SystemConfig apply_point(const SystemConfig& base, const SweepSpec& spec, double v) {
  SystemConfig c = base;
  switch (spec.variable) {
    case SweepVar::Nt: {
      const double alpha = double(base.Ne) / base.Nt;
      c.Nt = int(std::lround(v));
      c.Ne = std::max(1, int(std::lround(alpha * c.Nt)));
      break;
    }
    case SweepVar::beta: c.K = int(std::lround(v * c.Nt)); break;
    case SweepVar::phi: c.phi = v; break;
    case SweepVar::alpha: c.Ne = int(std::lround(v * c.Nt)); break;
    case SweepVar::rho: c.rho = v; break;
    case SweepVar::tau: c.tau = int(std::lround(v)); break;
    case SweepVar::R0:
    case SweepVar::lambda:
    case SweepVar::ptau: break;
  }
  if (spec.pilot_follows_users) {
    c.tau = c.K;
    c.p_tau = c.P / c.K;
  }
  if (spec.variable == SweepVar::ptau) c.p_tau = db_to_linear(v);
  if (spec.variable == SweepVar::lambda) {
    const double a = 1.0 + c.rho * (c.M - 1);
    if (!(v > 0.0 && v * a < 1.0))
      throw ConfigError(ConfigIssue::NonPositivePower, "lambda must lie in (0, 1/a)");
    c.p_tau = v / (1.0 - v * a) / c.tau;
  }
  return c;
}

namespace {

struct Row {
  double estimate = std::nan("");
  bool mc = false;
  McEstimate e;
};

double secrecy_closed(const Scenario& s, AnMethod m, Flavor f, bool reopt) {
  if (!reopt) return secrecy_lb(s, m, f).secrecy_lb;
  if (!(s.dp.alpha < alpha_sec(s, m))) return 0.0;
  const double phi = std::clamp(phi_opt(s, m), 1e-12, 1.0);
  return secrecy_lb(at_phi(s, phi), m, f).secrecy_lb;
}

Row closed_row(Quantity q, const Scenario& s, AnMethod m, double R0, bool reopt) {
  Row r;
  switch (q) {
    case Quantity::rate_lb: r.estimate = rate_lb(s, m); break;
    case Quantity::secrecy_lb_I: r.estimate = secrecy_closed(s, m, Flavor::BoundI, reopt); break;
    case Quantity::secrecy_lb_II: r.estimate = secrecy_closed(s, m, Flavor::BoundII, reopt); break;
    case Quantity::eve_cap: r.estimate = eve_capacity(s); break;
    case Quantity::eve_cap_ub: r.estimate = eve_capacity_ub(s); break;
    case Quantity::outage_ub: r.estimate = outage_ub(s, m, R0); break;
    case Quantity::phi_opt: r.estimate = phi_opt(s, m); break;
    case Quantity::alpha_sec: r.estimate = alpha_sec(s, m); break;
    case Quantity::net_secrecy: r.estimate = net_secrecy(s, m, s.cfg.tau, true); break;
    default: break;
  }
  return r;
}

}  // namespace

void run_sweep(const SystemConfig& base, const SweepSpec& spec, const RunOptions& opt,
               std::ostream& csv) {
  check_sweep(spec, base);
  const McOptions mco{opt.threads};
  bool need_eve_mc = false, need_mc = false;
  for (Quantity q : spec.quantities) {
    need_mc = need_mc || is_monte_carlo(q);
    need_eve_mc = need_eve_mc || (is_monte_carlo(q) && q != Quantity::mc_rate);
  }

  csv << kCsvHeader << '\n';
  const AnMethod methods[] = {AnMethod::NullSpace, AnMethod::Random};
  for (double v : spec.grid) {
    const double R0 = spec.variable == SweepVar::R0 ? v : spec.R0;
    std::optional<Scenario> s;
    try {
      s = make_scenario(apply_point(base, spec, v));
    } catch (const ConfigError&) {
    }
    std::map<AnMethod, McLink> links;
    if (s && need_mc) {
      const PathLossModel pl = build_path_loss(validate_config(s->cfg));
      for (AnMethod m : methods) {
        if (need_eve_mc && s->dp.q > 0.0)
          links[m] = mc_link(*s, pl, m, opt.trials, opt.seed, {R0}, mco);
        else {
          McLink l;
          l.rate = mc_user_rate(*s, pl, m, opt.trials, opt.seed, mco);
          links[m] = l;
        }
      }
    }
    for (Quantity q : spec.quantities) {
      for (AnMethod m : methods) {
        Row r;
        if (s) {
          if (is_monte_carlo(q)) {
            const McLink& l = links[m];
            r.mc = true;
            if (q == Quantity::mc_rate) r.e = l.rate;
            else if (!l.eve_available) r.mc = false;
            else if (q == Quantity::mc_eve_cap) r.e = l.eve;
            else if (q == Quantity::mc_secrecy) r.e = l.secrecy;
            else r.e = l.outage.at(0);
            if (r.mc) r.estimate = r.e.mean;
          } else {
            try {
              r = closed_row(q, *s, m, R0, spec.reoptimize_phi);
            } catch (const NotApplicable&) {
            }
          }
        }
        csv << to_string(spec.variable) << ',' << format_number(v) << ',' << to_string(q) << ','
            << to_string(m) << ',' << to_string(base.training) << ',' << format_number(r.estimate)
            << ',';
        if (r.mc) csv << format_number(r.e.std_err) << ',' << r.e.trials << ',' << r.e.seed;
        else csv << ",,";
        csv << '\n';
      }
    }
  }
}

}  // namespace msec
