// SPDX-License-Identifier: Apache-2.0
#include "msec/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <boost/random/gamma_distribution.hpp>

#include "msec/closed_form.hpp"
#include "msec/errors.hpp"

namespace msec {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t trial, std::uint64_t attempt)
    : eng_(splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ (attempt * 0xd1b54a32d192ed03ULL))) {}

std::complex<double> Rng::cn() {
  constexpr double s = 0.70710678118654752440;
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

void Rng::fill_cn(Eigen::Ref<Eigen::MatrixXcd, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>> m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = cn();
}

double link_loss(const PathLossModel& pl, int m, int p, int k) {
  const int r = (p == m) ? 0 : (p == 0 ? m : p);
  return pl.l_user(r, k);
}

ChannelRealization sample_channels(const Scenario& s, const PathLossModel& pl, Rng& rng,
                                   bool with_eve) {
  const auto& c = s.cfg;
  const int M = c.M, K = c.K, Nt = c.Nt;
  const bool pc = c.training == Training::PilotContamination;
  ChannelRealization cr;
  cr.g.resize(M);
  cr.h_hat.resize(M);
  cr.err.resize(M);

  for (int m = 0; m < M; ++m) {
    Eigen::MatrixXcd& g = cr.g[m];
    g = Eigen::MatrixXcd::Zero(M * K, Nt);
    if (pc) {
      for (Eigen::Index r = 0; r < g.rows(); ++r) rng.fill_cn(g.row(r));
    } else {
      // only the own users and the local observed user are ever used
      if (m != 0) rng.fill_cn(g.row(0));
      for (int k = 0; k < K; ++k) rng.fill_cn(g.row(m * K + k));
    }
  }

  const double E = c.p_tau * c.tau;
  for (int m = 0; m < M; ++m) {
    const Eigen::MatrixXcd own = cr.g[m].middleRows(m * K, K);
    if (!pc) {
      cr.h_hat[m] = own;
      cr.err[m] = Eigen::MatrixXcd::Zero(K, Nt);
      continue;
    }
    Eigen::MatrixXcd noise(K, Nt);
    rng.fill_cn(noise);
    Eigen::MatrixXcd hh(K, Nt);
    for (int k = 0; k < K; ++k) {
      double S = 0.0;
      Eigen::RowVectorXcd obs = noise.row(k);
      for (int p = 0; p < M; ++p) {
        const double l = link_loss(pl, m, p, k);
        S += l;
        obs += std::sqrt(E * l) * cr.g[m].row(p * K + k);
      }
      hh.row(k) = std::sqrt(E * link_loss(pl, m, m, k)) / (1.0 + E * S) * obs;
    }
    cr.err[m] = own - hh;
    cr.h_hat[m] = std::move(hh);
  }

  if (with_eve) {
    cr.h_eve.resize(M);
    for (int m = 0; m < M; ++m) {
      cr.h_eve[m].resize(c.Ne, Nt);
      rng.fill_cn(cr.h_eve[m]);
    }
  }
  return cr;
}

namespace {

Eigen::MatrixXcd row_space_basis(const Eigen::MatrixXcd& h_hat, Eigen::HouseholderQR<Eigen::MatrixXcd>& qr) {
  const Eigen::Index K = h_hat.rows(), Nt = h_hat.cols();
  qr.compute(h_hat.adjoint());
  const auto diag = qr.matrixQR().diagonal().cwiseAbs();
  if (diag.minCoeff() <= 1e-12 * diag.maxCoeff())
    throw NumericalError("estimated channel matrix is rank deficient");
  return qr.householderQ() * Eigen::MatrixXcd::Identity(Nt, K);
}

Eigen::MatrixXcd random_shaping(Eigen::Index Nt, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXcd V(Nt, cols);
  rng.fill_cn(V);
  V.colwise().normalize();
  return V;
}

// AN seen through the rows that matter: the observed user (row 0) and the
// eavesdropper (remaining rows).
struct AnView {
  double leak = 0.0;
  Eigen::MatrixXcd gram;
  int columns = 0;
};

AnView an_view(const Eigen::MatrixXcd& h_hat, const Eigen::RowVectorXcd& h, const Eigen::MatrixXcd* eve,
               AnMethod m, Rng& rng) {
  const Eigen::Index K = h_hat.rows(), Nt = h_hat.cols();
  AnView v;
  v.columns = int(Nt - K);
  if (m == AnMethod::NullSpace) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr;
    const Eigen::MatrixXcd B = row_space_basis(h_hat, qr);
    v.leak = std::max(0.0, h.squaredNorm() - (h * B).squaredNorm());
    if (eve) {
      const Eigen::MatrixXcd P = *eve * B;
      v.gram = *eve * eve->adjoint() - P * P.adjoint();
    }
    return v;
  }
  const Eigen::Index ne = eve ? eve->rows() : 0;
  Eigen::MatrixXcd R(1 + ne, Nt);
  R.row(0) = h;
  if (eve) R.bottomRows(ne) = *eve;
  const Eigen::MatrixXcd P = random_projection(R, Nt - K, rng);
  v.leak = P.row(0).squaredNorm();
  if (eve) v.gram = P.bottomRows(ne) * P.bottomRows(ne).adjoint();
  return v;
}

struct TrialOut {
  double rate = 0.0;
  double gamma_eve = 0.0;
  std::complex<double> hw;
  double an = 0.0;  // sum over BSs of |h v|^2, without q
  double interference = 0.0;  // without p
  double local_an_col = 0.0;
  int rejected = 0;
};

TrialOut run_trial(const Scenario& s, const PathLossModel& pl, AnMethod method, bool with_eve,
                   std::uint64_t seed, std::uint64_t trial) {
  const auto& c = s.cfg;
  const double p = s.dp.p, q = s.dp.q;
  constexpr int kMaxRetries = 10;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    Rng rng(seed, trial, attempt);
    const ChannelRealization cr = sample_channels(s, pl, rng, with_eve);

    TrialOut out;
    out.rejected = attempt;
    std::vector<AnView> views;
    views.reserve(c.M);
    Eigen::RowVectorXcd w00;
    for (int m = 0; m < c.M; ++m) {
      const Eigen::RowVectorXcd h = std::sqrt(pl.l_user(m, 0)) * cr.g[m].row(0);
      const Eigen::VectorXd norms = cr.h_hat[m].rowwise().norm();
      const Eigen::VectorXcd hw = (cr.h_hat[m].conjugate() * h.transpose()).cwiseQuotient(norms.cast<std::complex<double>>());
      for (int l = 0; l < c.K; ++l) {
        if (m == 0 && l == 0)
          out.hw = hw(0);
        else
          out.interference += std::norm(hw(l));
      }
      views.push_back(an_view(cr.h_hat[m], h, with_eve ? &cr.h_eve[m] : nullptr, method, rng));
      const double leak = q > 0.0 ? views.back().leak : 0.0;
      out.an += leak;
      if (m == 0) {
        out.local_an_col = views[0].leak / views[0].columns;
        w00 = cr.h_hat[0].row(0) / norms(0);
      }
    }
    const double sinr = p * std::norm(out.hw) / (q * out.an + p * out.interference + c.sigma_mt_sq);
    out.rate = std::log2(1.0 + sinr);

    if (!with_eve) return out;

    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(c.Ne, c.Ne);
    for (int m = 0; m < c.M; ++m) X += (q * pl.l_eve[m]) * views[m].gram;
    X = 0.5 * (X + X.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(X, Eigen::EigenvaluesOnly);
    const double ev_min = es.eigenvalues().minCoeff(), ev_max = es.eigenvalues().maxCoeff();
    if (!(ev_min > 0.0) || ev_max / ev_min > 1e12) continue;
    const Eigen::VectorXcd g = std::sqrt(pl.l_eve[0]) * (cr.h_eve[0] * w00.adjoint());
    const Eigen::VectorXcd y = X.ldlt().solve(g);
    out.gamma_eve = p * std::max(0.0, g.dot(y).real());
    return out;
  }
  throw NumericalError("eavesdropper covariance ill-conditioned on every retry");
}

template <class F>
void parallel_for(int n, int threads, F&& fn) {
  if (threads <= 0) threads = int(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(mu);
          if (!err) err = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

std::vector<TrialOut> run_trials(const Scenario& s, const PathLossModel& pl, AnMethod m,
                                 bool with_eve, int trials, std::uint64_t seed,
                                 const McOptions& opt) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (pl.l_user.rows() != s.cfg.M || pl.l_user.cols() < 1 ||
      static_cast<int>(pl.l_eve.size()) != s.cfg.M)
    throw std::invalid_argument("path-loss model does not match the scenario");
  std::vector<TrialOut> out(trials);
  parallel_for(trials, opt.threads,
               [&](int i) { out[i] = run_trial(s, pl, m, with_eve, seed, std::uint64_t(i)); });
  return out;
}

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

int total_rejected(const std::vector<TrialOut>& v) {
  int r = 0;
  for (const auto& t : v) r += t.rejected;
  return r;
}

void require_an(const Scenario& s) {
  if (!(s.dp.q > 0.0)) throw NotApplicable("no AN power: eavesdropper covariance is singular");
}

}  // namespace

// R * V for V = [z_i / |z_i|], z_i ~ CN(0, I): with R^H = Q T (thin QR),
// R z = T^H u and |z|^2 = |u|^2 + Gamma(Nt - r), u ~ CN(0, I_r).
Eigen::MatrixXcd random_projection(const Eigen::MatrixXcd& R, Eigen::Index cols, Rng& rng) {
  const Eigen::Index r = R.rows(), Nt = R.cols();
  if (r >= Nt) return R * random_shaping(Nt, cols, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(R.adjoint());
  const Eigen::MatrixXcd T = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  Eigen::MatrixXcd U(r, cols);
  rng.fill_cn(U);
  boost::random::gamma_distribution<double> rest(double(Nt - r), 1.0);
  for (Eigen::Index i = 0; i < cols; ++i) U.col(i) /= std::sqrt(U.col(i).squaredNorm() + rng.draw(rest));
  return T.adjoint() * U;
}

Eigen::MatrixXcd build_an(const Eigen::MatrixXcd& h_hat, AnMethod m, Rng& rng) {
  const Eigen::Index K = h_hat.rows(), Nt = h_hat.cols();
  if (K >= Nt) throw std::invalid_argument("build_an needs K < N_t");
  if (m == AnMethod::Random) return random_shaping(Nt, Nt - K, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr;
  row_space_basis(h_hat, qr);
  const Eigen::MatrixXcd Q = qr.householderQ();
  return Q.rightCols(Nt - K);
}

McEstimate summarize(const std::vector<double>& xs, std::uint64_t seed) {
  McEstimate e;
  e.trials = int(xs.size());
  e.seed = seed;
  if (xs.empty()) return e;
  Neumaier s;
  for (double x : xs) s.add(x);
  e.mean = s.value() / double(xs.size());
  if (xs.size() > 1) {
    Neumaier v;
    for (double x : xs) v.add((x - e.mean) * (x - e.mean));
    e.std_err = std::sqrt(v.value() / double(xs.size() - 1) / double(xs.size()));
  }
  return e;
}

McLink mc_link(const Scenario& s, const PathLossModel& pl, AnMethod m, int trials,
               std::uint64_t seed, const std::vector<double>& R0, const McOptions& opt) {
  const bool eve = s.dp.q > 0.0;
  const auto out = run_trials(s, pl, m, eve, trials, seed, opt);
  McLink r;
  std::vector<double> v(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) v[i] = out[i].rate;
  r.rate = summarize(v, seed);
  r.rate.rejected = total_rejected(out);
  r.eve_available = eve;
  if (!eve) return r;

  std::vector<double> ce(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    ce[i] = std::log2(1.0 + out[i].gamma_eve);
    v[i] = out[i].rate - ce[i];
  }
  r.eve = summarize(ce, seed);
  r.secrecy = summarize(v, seed);
  r.secrecy.mean = std::max(0.0, r.secrecy.mean);
  r.eve.rejected = r.secrecy.rejected = r.rate.rejected;

  const double rlb = rate_lb(s, m);
  for (double r0 : R0) {
    for (std::size_t i = 0; i < out.size(); ++i) v[i] = (rlb - ce[i] <= r0) ? 1.0 : 0.0;
    McEstimate e = summarize(v, seed);
    e.rejected = r.rate.rejected;
    r.outage.push_back(e);
  }
  return r;
}

McEstimate mc_user_rate(const Scenario& s, const PathLossModel& pl, AnMethod m, int trials,
                        std::uint64_t seed, const McOptions& opt) {
  const auto out = run_trials(s, pl, m, false, trials, seed, opt);
  std::vector<double> v(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) v[i] = out[i].rate;
  return summarize(v, seed);
}

McEstimate mc_eve_capacity(const Scenario& s, const PathLossModel& pl, AnMethod m, int trials,
                           std::uint64_t seed, const McOptions& opt) {
  require_an(s);
  return mc_link(s, pl, m, trials, seed, {}, opt).eve;
}

McEstimate mc_secrecy(const Scenario& s, const PathLossModel& pl, AnMethod m, int trials,
                      std::uint64_t seed, const McOptions& opt) {
  require_an(s);
  return mc_link(s, pl, m, trials, seed, {}, opt).secrecy;
}

McEstimate mc_outage(const Scenario& s, const PathLossModel& pl, AnMethod m, double R0, int trials,
                     std::uint64_t seed, const McOptions& opt) {
  require_an(s);
  return mc_link(s, pl, m, trials, seed, {R0}, opt).outage.at(0);
}

std::vector<double> mc_eve_sinr_samples(const Scenario& s, const PathLossModel& pl, AnMethod m,
                                        int trials, std::uint64_t seed, const McOptions& opt) {
  require_an(s);
  const auto out = run_trials(s, pl, m, true, trials, seed, opt);
  std::vector<double> v(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) v[i] = out[i].gamma_eve;
  return v;
}

McSinrComponents mc_sinr_components(const Scenario& s, const PathLossModel& pl, AnMethod m,
                                    int trials, std::uint64_t seed, const McOptions& opt) {
  const auto out = run_trials(s, pl, m, false, trials, seed, opt);
  const std::size_t n = out.size();
  const double sp = std::sqrt(s.dp.p);
  McSinrComponents r;

  Neumaier re, im;
  for (const auto& t : out) {
    re.add(sp * t.hw.real());
    im.add(sp * t.hw.imag());
  }
  const std::complex<double> mean(re.value() / n, im.value() / n);
  const double amp = std::abs(mean);
  const std::complex<double> dir = amp > 0 ? std::conj(mean) / amp : 1.0;

  std::vector<double> proj(n), dev(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> x = sp * out[i].hw;
    proj[i] = (dir * x).real();
    dev[i] = std::norm(x - mean);
  }
  const McEstimate pe = summarize(proj, seed);
  r.desired = pe;
  r.desired.mean = amp * amp;
  r.desired.std_err = 2.0 * amp * pe.std_err;
  r.leakage = summarize(dev, seed);
  if (n > 1) r.leakage.mean *= double(n) / double(n - 1);

  for (std::size_t i = 0; i < n; ++i) v[i] = s.dp.q * out[i].an;
  r.an = summarize(v, seed);
  for (std::size_t i = 0; i < n; ++i) v[i] = s.dp.p * out[i].interference;
  r.interference = summarize(v, seed);
  for (std::size_t i = 0; i < n; ++i) v[i] = out[i].local_an_col;
  r.local_an_per_column = summarize(v, seed);
  return r;
}

}  // namespace msec
