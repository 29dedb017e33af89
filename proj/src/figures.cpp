// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "msec/closed_form.hpp"
#include "msec/errors.hpp"
#include "msec/sweep.hpp"

namespace msec {

namespace {

namespace fs = std::filesystem;

class FigureWriter {
 public:
  FigureWriter(const std::string& dir, const std::string& id) : dir_(dir), id_(id) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw UsageError("cannot create output directory '" + dir + "'");
    manifest_.open(fs::path(dir_) / "manifest.csv");
    if (!manifest_) throw UsageError("cannot write into '" + dir + "'");
    manifest_ << "figure,curve,file,description\n";
  }

  std::ofstream open(const std::string& curve, const std::string& what) {
    const std::string file = id_ + "_" + curve + ".csv";
    std::ofstream f(fs::path(dir_) / file);
    if (!f) throw UsageError("cannot write '" + file + "'");
    manifest_ << id_ << ',' << curve << ',' << file << ',' << what << '\n';
    return f;
  }

  void sweep(const std::string& curve, const std::string& what, const SystemConfig& base,
             const SweepSpec& spec, const RunOptions& opt) {
    std::ofstream f = open(curve, what);
    run_sweep(base, spec, opt, f);
  }

 private:
  std::string dir_, id_;
  std::ofstream manifest_;
};

SystemConfig base_config(double P_db, double rho, int Nt, int K, int Ne, double phi, Training t) {
  SystemConfig c;
  c.M = 7;
  c.P = db_to_linear(P_db);
  c.rho = rho;
  c.Nt = Nt;
  c.K = K;
  c.Ne = Ne;
  c.phi = phi;
  c.training = t;
  c.tau = K;
  c.p_tau = c.P / K;
  c.T_coh = 100;
  return c;
}

SweepSpec make_spec(const std::string& text, std::vector<Quantity> q) {
  SweepSpec s = parse_sweep(text);
  s.quantities = std::move(q);
  return s;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void marker_row(std::ostream& o, const char* var, double value, const char* quantity, AnMethod m,
                Training t, double estimate) {
  o << var << ',' << format_number(value) << ',' << quantity << ',' << to_string(m) << ','
    << to_string(t) << ',' << format_number(estimate) << ",,,\n";
}

constexpr AnMethod kMethods[] = {AnMethod::NullSpace, AnMethod::Random};

void fig0(FigureWriter& w, const RunOptions& opt) {
  for (double rho : {0.1, 0.3}) {
    for (int Ne : {5, 10}) {
      const SystemConfig base = base_config(10, rho, 100, 10, Ne, 0.75, Training::Perfect);
      const std::string tag = "rho" + fmt("%g", rho) + "_alpha" + fmt("%g", Ne / 100.0);
      w.sweep(tag + "_bounds", "eavesdropper capacity and upper bound vs beta", base,
              make_spec("beta=0.01:0.99:99", {Quantity::eve_cap, Quantity::eve_cap_ub}), opt);
      w.sweep(tag + "_mc", "Monte-Carlo eavesdropper capacity vs beta", base,
              make_spec("beta=0.05:0.85:9", {Quantity::mc_eve_cap}), opt);
      std::ofstream f = w.open(tag + "_markers", "bound minimiser and applicability limit in beta");
      f << kCsvHeader << '\n';
      const Scenario s = make_scenario(base);
      const double a = s.dp.a, c = s.dp.c, al = s.dp.alpha;
      for (AnMethod m : kMethods) {
        marker_row(f, "beta", 1.0 - std::sqrt(c * al) / a, "beta_ub_min", m, base.training,
                   1.0 - std::sqrt(c * al) / a);
        marker_row(f, "beta", 1.0 - c * al / (a * a), "beta_ub_limit", m, base.training,
                   1.0 - c * al / (a * a));
      }
    }
  }
}

void fig23(FigureWriter& w, const RunOptions& opt, bool pc) {
  const Training t = pc ? Training::PilotContamination : Training::Perfect;
  const SystemConfig base = base_config(10, pc ? 0.1 : 0.3, 100, 10, 10, 0.75, t);
  SweepSpec a = make_spec("Nt=32:256:8", {Quantity::rate_lb, Quantity::secrecy_lb_I,
                                          Quantity::secrecy_lb_II, Quantity::mc_rate,
                                          Quantity::mc_secrecy});
  a.pilot_follows_users = pc;
  w.sweep("secrecy_vs_Nt", "ergodic secrecy rate bounds and Monte-Carlo vs N_t", base, a, opt);
  SweepSpec b = make_spec("R0=0:3:13", {Quantity::outage_ub, Quantity::mc_outage});
  b.pilot_follows_users = pc;
  w.sweep("outage_vs_R0", "secrecy outage bound and Monte-Carlo vs R0 at N_t = 100", base, b, opt);
}

void fig45(FigureWriter& w, const RunOptions& opt, bool pc) {
  const Training t = pc ? Training::PilotContamination : Training::Perfect;
  std::ofstream markers = w.open("markers", "optimal phi per curve");
  markers << kCsvHeader << '\n';
  for (double beta : {0.1, 0.2}) {
    for (double alpha : {0.1, 0.2, 0.3, 0.4}) {
      const int K = int(std::lround(beta * 100));
      const SystemConfig base =
          base_config(pc ? 20 : 10, 0.1, 100, K, int(std::lround(alpha * 100)), 0.75, t);
      const std::string tag = "beta" + fmt("%g", beta) + "_alpha" + fmt("%g", alpha);
      w.sweep(tag, "secrecy rate bounds vs phi", base,
              make_spec("phi=0.01:0.99:99", {Quantity::secrecy_lb_I, Quantity::secrecy_lb_II}), opt);
      w.sweep(tag + "_mc", "Monte-Carlo secrecy rate vs phi", base,
              make_spec("phi=0.1:0.9:9", {Quantity::mc_secrecy}), opt);
      const Scenario s = make_scenario(base);
      for (AnMethod m : kMethods) {
        try {
          const double ph = phi_opt(s, m);
          SystemConfig c = base;
          c.phi = ph;
          marker_row(markers, "phi", ph, ("phi_opt_" + tag).c_str(), m, t,
                     secrecy_lb(make_scenario(c), m, Flavor::BoundII).secrecy_lb);
        } catch (const NotApplicable&) {
          marker_row(markers, "phi", std::nan(""), ("phi_opt_" + tag).c_str(), m, t, 0.0);
        }
      }
    }
  }
}

void fig6(FigureWriter& w, const RunOptions& opt) {
  for (Training t : {Training::Perfect, Training::PilotContamination}) {
    const SystemConfig base = base_config(10, 0.1, 100, 10, 30, 0.75, t);
    SweepSpec s = make_spec("beta=0.01:0.99:99", {Quantity::secrecy_lb_II, Quantity::phi_opt});
    s.reoptimize_phi = true;
    s.pilot_follows_users = t == Training::PilotContamination;
    w.sweep(to_string(t), "secrecy rate at phi* and phi* vs beta", base, s, opt);
  }
}

void fig7(FigureWriter& w, const RunOptions& opt) {
  const SystemConfig base = base_config(20, 0.1, 100, 10, 10, 0.75, Training::PilotContamination);
  SweepSpec s = make_spec("beta=0.01:0.99:99", {Quantity::alpha_sec});
  s.pilot_follows_users = true;
  w.sweep("alpha_sec_vs_beta", "alpha_sec vs beta with p_tau = P/K", base, s, opt);
  for (double beta : {0.05, 0.5}) {
    SystemConfig b = base;
    b.K = int(std::lround(beta * 100));
    b.tau = b.K;
    w.sweep("alpha_sec_vs_ptau_beta" + fmt("%g", beta), "alpha_sec vs p_tau (dB)", b,
            make_spec("ptau=-10:30:41", {Quantity::alpha_sec}), opt);
  }
}

void fig8(FigureWriter& w, const RunOptions& opt) {
  std::ofstream markers = w.open("markers", "optimal tau and lambda per curve");
  markers << kCsvHeader << '\n';
  for (int K : {5, 20}) {
    for (int T : {100, 500}) {
      SystemConfig base = base_config(10, 0.1, 100, K, 10, 0.75, Training::PilotContamination);
      base.p_tau = 1.0;
      base.T_coh = T;
      const std::string tag = "K" + std::to_string(K) + "_T" + std::to_string(T);
      w.sweep(tag, "net secrecy rate at phi* vs tau", base,
              make_spec("tau=" + std::to_string(K) + ":" + std::to_string(T - 1) + ":" +
                            std::to_string(T - K),
                        {Quantity::net_secrecy}),
              opt);
      const Scenario s = make_scenario(base);
      for (AnMethod m : kMethods) {
        const TauChoice best = optimize_tau(s, m);
        marker_row(markers, "tau", best.tau, ("tau_opt_" + tag).c_str(), m, base.training,
                   best.net_rate);
        marker_row(markers, "lambda", lambda_of(base.p_tau * best.tau, s.dp.a),
                   ("lambda_opt_" + tag).c_str(), m, base.training, best.net_rate);
      }
    }
  }
}

}  // namespace

std::vector<std::string> figure_ids() {
  return {"fig0", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"};
}

void reproduce_figure(const std::string& id, const std::string& out_dir, const RunOptions& opt) {
  bool known = false;
  for (const auto& f : figure_ids()) known = known || f == id;
  if (!known) throw UsageError("unknown figure '" + id + "'");
  FigureWriter w(out_dir, id);
  if (id == "fig0") fig0(w, opt);
  else if (id == "fig2") fig23(w, opt, false);
  else if (id == "fig3") fig23(w, opt, true);
  else if (id == "fig4") fig45(w, opt, false);
  else if (id == "fig5") fig45(w, opt, true);
  else if (id == "fig6") fig6(w, opt);
  else if (id == "fig7") fig7(w, opt);
  else fig8(w, opt);
}

}  // namespace msec
