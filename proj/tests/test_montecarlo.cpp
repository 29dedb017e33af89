// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "msec/closed_form.hpp"
#include "msec/errors.hpp"
#include "msec/montecarlo.hpp"

using namespace msec;

namespace {

SystemConfig small(Training t) {
  SystemConfig c;
  c.M = 3;
  c.rho = 0.3;
  c.Nt = 32;
  c.K = 4;
  c.Ne = 4;
  c.P = 10.0;
  c.phi = 0.6;
  c.p_tau = 2.0;
  c.tau = 4;
  c.T_coh = 40;
  c.training = t;
  return c;
}

PathLossModel loss(const Scenario& s) { return build_path_loss(validate_config(s.cfg)); }

// mean and standard error of a sample
McEstimate stats(const std::vector<double>& v) { return summarize(v, 0); }

const AnMethod kMethods[] = {AnMethod::NullSpace, AnMethod::Random};
const Training kTrainings[] = {Training::Perfect, Training::PilotContamination};

}  // namespace

TEST_CASE("rng substreams are reproducible and distinct") {
  Rng a(1, 5), b(1, 5), c(1, 6), d(2, 5), e(1, 5, 1);
  const double x = a.normal();
  CHECK(x == b.normal());
  CHECK(x != c.normal());
  CHECK(x != d.normal());
  CHECK(x != e.normal());
  CHECK(splitmix64(0) != splitmix64(1));
}

TEST_CASE("small-scale fading statistics") {
  SystemConfig c = small(Training::Perfect);
  c.M = 1;
  c.Nt = 16;
  const Scenario s = make_scenario(c);
  const auto pl = loss(s);
  const int draws = 4000;
  std::vector<double> nrm;
  for (int i = 0; i < draws; ++i) {
    Rng rng(9, i);
    const auto cr = sample_channels(s, pl, rng, false);
    CHECK(cr.h_hat[0] == cr.g[0].middleRows(0, c.K));
    CHECK(cr.err[0].norm() == 0.0);
    for (int k = 0; k < c.K; ++k) nrm.push_back(cr.g[0].row(k).squaredNorm() / c.Nt);
  }
  CHECK(std::fabs(stats(nrm).mean - 1.0) < 4.0 / std::sqrt(double(nrm.size()) * c.Nt));
}

TEST_CASE("pilot-contaminated estimates: variances and orthogonality") {
  for (int M : {1, 3}) {
    SystemConfig c = small(Training::PilotContamination);
    c.M = M;
    c.K = 1;
    c.tau = 1;
    c.p_tau = 10.0;
    c.Nt = 4;
    const Scenario s = make_scenario(c);
    const auto pl = loss(s);
    const double E = 10.0, S = 1.0 + (M - 1) * c.rho;
    std::vector<double> vh, ve, cre, cim;
    for (int i = 0; i < 10000; ++i) {
      Rng rng(21, i);
      const auto cr = sample_channels(s, pl, rng, false);
      for (int n = 0; n < c.Nt; ++n) {
        const auto h = cr.h_hat[0](0, n), e = cr.err[0](0, n);
        vh.push_back(std::norm(h));
        ve.push_back(std::norm(e));
        const auto x = h * std::conj(e);
        cre.push_back(x.real());
        cim.push_back(x.imag());
      }
    }
    INFO("M=" << M);
    const auto eh = stats(vh), ee = stats(ve), er = stats(cre), ei = stats(cim);
    CHECK(std::fabs(eh.mean - E / (1 + E * S)) < 3 * eh.std_err);
    CHECK(std::fabs(ee.mean - (1 + E * (S - 1)) / (1 + E * S)) < 3 * ee.std_err);
    CHECK(std::fabs(er.mean) < 3 * er.std_err);
    CHECK(std::fabs(ei.mean) < 3 * ei.std_err);
  }
}

TEST_CASE("AN shaping matrices") {
  const int Nt = 24, K = 5;
  Rng rng(3, 0);
  Eigen::MatrixXcd h(K, Nt);
  rng.fill_cn(h);

  const auto V = build_an(h, AnMethod::NullSpace, rng);
  CHECK(V.cols() == Nt - K);
  for (int k = 0; k < K; ++k) CHECK((h.row(k) * V).norm() <= 1e-10 * h.row(k).norm());
  CHECK((V.adjoint() * V - Eigen::MatrixXcd::Identity(Nt - K, Nt - K)).norm() < 1e-10);
  const Eigen::RowVectorXcd w = h.row(0).conjugate() / h.row(0).norm();
  CHECK((w.conjugate() * V).norm() < 1e-10);

  std::vector<double> inner;
  for (int t = 0; t < 200; ++t) {
    Rng r(4, t);
    const auto R = build_an(h, AnMethod::Random, r);
    CHECK(R.cols() == Nt - K);
    CHECK((R.colwise().norm().array() - 1.0).abs().maxCoeff() < 1e-12);
    for (int i = 0; i + 1 < R.cols(); i += 2) inner.push_back(std::norm(R.col(i).dot(R.col(i + 1))));
  }
  const auto e = stats(inner);
  CHECK(std::fabs(e.mean - 1.0 / Nt) < 3 * e.std_err);

  Eigen::MatrixXcd bad(2, Nt);
  bad.row(0) = h.row(0);
  bad.row(1) = 2.0 * h.row(0);
  CHECK_THROWS_AS(build_an(bad, AnMethod::NullSpace, rng), NumericalError);
  CHECK_THROWS(build_an(Eigen::MatrixXcd::Ones(Nt, Nt), AnMethod::NullSpace, rng));
}

TEST_CASE("random projection matches unit-sphere moments") {
  const int Nt = 20, cols = 50;
  Rng rng(5, 0);
  Eigen::MatrixXcd R(3, Nt);
  rng.fill_cn(R);
  std::vector<std::vector<double>> m2(3), m4(3);
  for (int t = 0; t < 400; ++t) {
    Rng r(6, t);
    const auto P = random_projection(R, cols, r);
    REQUIRE(P.rows() == 3);
    REQUIRE(P.cols() == cols);
    for (int row = 0; row < 3; ++row)
      for (int i = 0; i < cols; ++i) {
        const double a = std::norm(P(row, i));
        m2[row].push_back(a);
        m4[row].push_back(a * a);
      }
  }
  for (int row = 0; row < 3; ++row) {
    const double n2 = R.row(row).squaredNorm();
    const auto e2 = stats(m2[row]), e4 = stats(m4[row]);
    CHECK(std::fabs(e2.mean - n2 / Nt) < 4 * e2.std_err);
    CHECK(std::fabs(e4.mean - 2 * n2 * n2 / (Nt * (Nt + 1.0))) < 4 * e4.std_err);
  }
  // full-rank request falls back to the explicit construction
  Eigen::MatrixXcd wide(Nt, Nt);
  rng.fill_cn(wide);
  CHECK(random_projection(wide, 3, rng).cols() == 3);
}

TEST_CASE("single-user rate hardens to log2(1 + P Nt)") {
  SystemConfig c = small(Training::Perfect);
  c.M = 1;
  c.K = 1;
  c.Nt = 200;
  c.Ne = 1;
  c.phi = 1.0;
  const Scenario s = make_scenario(c);
  for (AnMethod m : kMethods) {
    const auto e = mc_user_rate(s, loss(s), m, 2000, 7);
    CHECK(e.mean == doctest::Approx(std::log2(1 + 10.0 * 200)).epsilon(0.05));
    CHECK(e.trials == 2000);
    CHECK(e.seed == 7);
  }
}

TEST_CASE("SINR components match the finite-Nt closed forms") {
  for (Training t : kTrainings)
    for (AnMethod m : kMethods) {
      const Scenario s = make_scenario(small(t));
      const auto pl = loss(s);
      const auto mc = mc_sinr_components(s, pl, m, 4000, 11);
      const auto cf = sinr_terms(s, pl, m);
      const double p = s.dp.p;
      INFO("training=" << to_string(t) << " method=" << to_string(m));
      CHECK(std::fabs(mc.desired.mean - p * cf.desired) < 3 * mc.desired.std_err);
      CHECK(std::fabs(mc.leakage.mean - p * cf.leakage) < 3 * mc.leakage.std_err);
      CHECK(std::fabs(mc.interference.mean - p * cf.interference) < 3 * mc.interference.std_err);
      if (t == Training::PilotContamination && m == AnMethod::NullSpace) {
        // the closed form counts l_m for the other cells' AN; the exact value is smaller
        CHECK(mc.an.mean < p * cf.an + 3 * mc.an.std_err);
        const double E = s.cfg.p_tau * s.cfg.tau, S = 1 + (s.cfg.M - 1) * s.cfg.rho;
        const double mu0 = (1 + E * (S - 1)) / (1 + E * S);
        CHECK(std::fabs(mc.local_an_per_column.mean - mu0) < 3 * mc.local_an_per_column.std_err);
      } else {
        CHECK(std::fabs(mc.an.mean - p * cf.an) < 3 * mc.an.std_err);
      }
      if (t == Training::Perfect && m == AnMethod::NullSpace) CHECK(mc.local_an_per_column.mean < 1e-10);
    }
}

TEST_CASE("Monte-Carlo rate respects the closed-form lower bound") {
  for (Training t : kTrainings)
    for (int Nt : {64, 128}) {
      SystemConfig c = small(t);
      c.M = 7;
      c.rho = 0.3;
      c.K = 10;
      c.tau = 10;
      c.p_tau = 1.0;
      c.Nt = Nt;
      c.Ne = Nt / 10;
      c.phi = 0.75;
      const Scenario s = make_scenario(c);
      const auto pl = loss(s);
      const auto eN = mc_user_rate(s, pl, AnMethod::NullSpace, 300, 3);
      const auto eR = mc_user_rate(s, pl, AnMethod::Random, 300, 3);
      INFO("training=" << to_string(t) << " Nt=" << Nt);
      CHECK(eN.mean >= rate_lb(s, AnMethod::NullSpace) - 3 * eN.std_err);
      CHECK(eR.mean >= rate_lb(s, AnMethod::Random) - 3 * eR.std_err);
      CHECK(eN.mean >= eR.mean - 3 * eR.std_err);
    }
}

TEST_CASE("results do not depend on the thread count") {
  const Scenario s = make_scenario(small(Training::PilotContamination));
  const auto pl = loss(s);
  for (AnMethod m : kMethods) {
    const auto a = mc_link(s, pl, m, 64, 99, {0.5, 1.0}, {1});
    const auto b = mc_link(s, pl, m, 64, 99, {0.5, 1.0}, {3});
    CHECK(a.rate.mean == b.rate.mean);
    CHECK(a.rate.std_err == b.rate.std_err);
    CHECK(a.eve.mean == b.eve.mean);
    CHECK(a.secrecy.mean == b.secrecy.mean);
    CHECK(a.outage[1].mean == b.outage[1].mean);
    const auto c = mc_link(s, pl, m, 64, 100, {0.5}, {1});
    CHECK(c.rate.mean != a.rate.mean);
  }
}

TEST_CASE("eavesdropper estimates") {
  SystemConfig c = small(Training::Perfect);
  c.phi = 1.0;
  Scenario s = make_scenario(c);
  CHECK_THROWS_AS(mc_eve_capacity(s, loss(s), AnMethod::NullSpace, 10, 1), NotApplicable);
  CHECK_THROWS_AS(mc_outage(s, loss(s), AnMethod::NullSpace, 1.0, 10, 1), NotApplicable);
  const auto link = mc_link(s, loss(s), AnMethod::NullSpace, 10, 1);
  CHECK_FALSE(link.eve_available);

  c = small(Training::Perfect);
  c.Nt = 64;
  c.K = 8;
  for (AnMethod m : kMethods) {
    double prev = 0.0;
    for (int Ne : {2, 5, 10}) {
      c.Ne = Ne;
      s = make_scenario(c);
      const auto e = mc_eve_capacity(s, loss(s), m, 300, 5);
      CHECK(e.mean > prev);
      prev = e.mean;
    }
    s = make_scenario(c);
    const double R = rate_lb(s, m);
    CHECK(mc_outage(s, loss(s), m, R, 50, 5).mean == 1.0);
    CHECK(mc_outage(s, loss(s), m, R + 0.5, 50, 5).mean == 1.0);
  }
}

TEST_CASE("eavesdropper SINR draws for the exact small setting") {
  SystemConfig c;
  c.M = 1;
  c.Nt = 8;
  c.K = 4;
  c.Ne = 2;
  c.phi = 0.5;  // eta = 1
  c.P = 10.0;
  const Scenario s = make_scenario(c);
  REQUIRE(s.dp.eta == doctest::Approx(1.0));
  const auto g = mc_eve_sinr_samples(s, loss(s), AnMethod::NullSpace, 20000, 13);
  REQUIRE(g.size() == 20000);
  const auto t = eve_tail(s);
  for (double x : {0.1, 0.5, 1.0, 2.0}) {
    std::vector<double> ind;
    for (double v : g) ind.push_back(v > x ? 1.0 : 0.0);
    const auto e = stats(ind);
    INFO("x=" << x);
    CHECK(std::fabs(e.mean - t(x)) < 3 * e.std_err);
  }
}

TEST_CASE("chi moments and channel hardening") {
  for (int Nt : {8, 32, 256}) {
    std::vector<double> x, x2;
    for (int i = 0; i < 20000; ++i) {
      Rng rng(17, i);
      Eigen::MatrixXcd h(1, Nt);
      rng.fill_cn(h);
      x2.push_back(h.squaredNorm());
      x.push_back(std::sqrt(h.squaredNorm()));
    }
    const auto ex = stats(x), ex2 = stats(x2);
    INFO("Nt=" << Nt);
    CHECK(std::fabs(ex2.mean - Nt) < 3 * ex2.std_err);
    CHECK(std::fabs(ex.mean - chi_mean(Nt)) < 3 * ex.std_err);
    if (Nt == 256) {
      CHECK(std::fabs(ex.mean * ex.mean / Nt - 1.0) < 0.02);
      const double var = ex2.mean - ex.mean * ex.mean;
      CHECK(var / Nt < 0.01);
    }
  }
}

TEST_CASE("summaries") {
  const auto e = summarize({1.0, 2.0, 3.0, 4.0}, 42);
  CHECK(e.mean == 2.5);
  CHECK(e.std_err == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(e.seed == 42);
  CHECK(e.trials == 4);
  CHECK(summarize({}, 1).trials == 0);
}
