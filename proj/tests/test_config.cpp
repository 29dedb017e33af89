// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "msec/config.hpp"
#include "msec/errors.hpp"

using namespace msec;

namespace {

SystemConfig reference() {
  SystemConfig c;
  c.M = 7;
  c.Nt = 100;
  c.Ne = 10;
  c.K = 10;
  c.rho = 0.1;
  c.P = 10.0;
  c.phi = 0.75;
  c.p_tau = 1.0;
  c.tau = 10;
  return c;
}

ConfigIssue issue_of(const SystemConfig& c) {
  try {
    validate_config(c);
  } catch (const ConfigError& e) {
    return e.issue;
  }
  FAIL("expected a config error");
  return ConfigIssue::Parse;
}

}  // namespace

TEST_CASE("valid reference scenario is accepted unchanged") {
  const SystemConfig c = reference();
  const ValidatedConfig v = validate_config(c);
  CHECK(std::memcmp(&v.get().rho, &c.rho, sizeof c.rho) == 0);
  CHECK(v->K == 10);
}

TEST_CASE("each violated invariant has its own error") {
  SystemConfig c = reference();
  c.K = 100;
  CHECK(issue_of(c) == ConfigIssue::UsersNotBelowAntennas);
  try {
    validate_config(c);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()) == "K must be < N_t");
  }

  c = reference();
  c.training = Training::PilotContamination;
  c.tau = 5;
  CHECK(issue_of(c) == ConfigIssue::PilotTooShort);

  c = reference();
  c.phi = 0.0;
  CHECK(issue_of(c) == ConfigIssue::PhiOutOfRange);
  c.phi = 1.5;
  CHECK(issue_of(c) == ConfigIssue::PhiOutOfRange);

  c = reference();
  c.P = 0.0;
  CHECK(issue_of(c) == ConfigIssue::NonPositivePower);
  c = reference();
  c.p_tau = -1.0;
  CHECK(issue_of(c) == ConfigIssue::NonPositivePower);

  c = reference();
  c.rho = 1.2;
  CHECK(issue_of(c) == ConfigIssue::RhoOutOfRange);

  c = reference();
  c.Ne = 0;
  CHECK(issue_of(c) == ConfigIssue::NonPositiveCount);

  c = reference();
  c.phi = 1.0;
  CHECK_NOTHROW(validate_config(c));
}

TEST_CASE("derived parameters at the reference point") {
  const DerivedParams d = derive_params(validate_config(reference()));
  CHECK(d.a == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(d.b == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(d.c == doctest::Approx(1.06).epsilon(1e-14));
  CHECK(d.alpha == doctest::Approx(0.1));
  CHECK(d.beta == doctest::Approx(0.1));
  CHECK(d.eta == doctest::Approx(1.0 / 27.0).epsilon(1e-14));
  CHECK(d.zeta == doctest::Approx(1.5263889).epsilon(1e-7));
  CHECK(d.lambda == doctest::Approx(10.0 / 17.0).epsilon(1e-14));
  CHECK(d.p == doctest::Approx(0.75));
  CHECK(d.q == doctest::Approx(2.5 / 90.0));
}

TEST_CASE("single cell and no-AN degeneracies") {
  SystemConfig c = reference();
  c.M = 1;
  c.rho = 0.7;
  DerivedParams d = derive_params(validate_config(c));
  CHECK(d.a == 1.0);
  CHECK(d.b == doctest::Approx(0.1));
  CHECK(d.c == 1.0);

  c = reference();
  c.phi = 1.0;
  d = derive_params(validate_config(c));
  CHECK(d.q == 0.0);
  CHECK(d.eta == 0.0);
}

TEST_CASE("derived parameter invariants on random configs") {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int it = 0; it < 500; ++it) {
    SystemConfig c;
    c.M = 1 + int(u(g) * 9);
    c.Nt = 20 + int(u(g) * 200);
    c.K = 1 + int(u(g) * (c.Nt - 1));
    c.Ne = 1 + int(u(g) * 40);
    c.rho = u(g);
    c.P = std::pow(10.0, 3 * u(g) - 1);
    c.phi = 0.01 + 0.99 * u(g);
    c.p_tau = std::pow(10.0, 3 * u(g) - 1);
    c.tau = 1 + int(u(g) * 50);
    const auto v = validate_config(c);
    const DerivedParams d = derive_params(v);
    const DerivedParams d2 = derive_params(v);
    CHECK(std::memcmp(&d, &d2, sizeof d) == 0);
    CHECK(d.a >= 1.0);
    CHECK(d.c >= 1.0);
    CHECK(d.c <= d.a + 1e-15);
    CHECK(d.b >= d.a - 1.0);
    CHECK(d.eta == doctest::Approx(d.beta * (1 / c.phi - 1) / (1 - d.beta)).epsilon(1e-12));
    CHECK(d.lambda > 0.0);
    CHECK(d.lambda <= 1.0 / d.a);
    CHECK((d.zeta > 0) == (d.alpha < d.a * d.a * (1 - d.beta) / d.c));
  }
}

TEST_CASE("lambda is increasing in pilot energy and decreasing in a") {
  double prev = 0.0;
  for (double e = 0.01; e < 1e4; e *= 1.7) {
    const double l = lambda_of(e, 1.6);
    CHECK(l > prev);
    prev = l;
  }
  CHECK(lambda_of(1e12, 1.6) == doctest::Approx(1 / 1.6).epsilon(1e-9));
  prev = 2.0;
  for (double a = 1.0; a < 10.0; a += 0.25) {
    const double l = lambda_of(10.0, a);
    CHECK(l < prev);
    prev = l;
  }
}

TEST_CASE("simplified and explicit path loss") {
  SystemConfig c = reference();
  c.M = 2;
  c.rho = 0.3;
  PathLossModel pl = build_path_loss(validate_config(c));
  REQUIRE(pl.l_user.rows() == 2);
  for (int k = 0; k < c.K; ++k) {
    CHECK(pl.l_user(0, k) == 1.0);
    CHECK(pl.l_user(1, k) == 0.3);
  }
  CHECK(pl.l_eve == std::vector<double>{1.0, 0.3});

  c.M = 1;
  pl = build_path_loss(validate_config(c));
  CHECK(pl.l_user.rows() == 1);
  CHECK(pl.l_user(0, 0) == 1.0);

  Eigen::MatrixXd L = Eigen::MatrixXd::Random(7, 10).cwiseAbs();
  std::vector<double> le(7, 0.5);
  pl = explicit_path_loss(L, le);
  CHECK(pl.mode == PathLossModel::Mode::Explicit);
  CHECK(pl.l_user == L);
  L(3, 3) = 1.5;
  CHECK_THROWS_AS(explicit_path_loss(L, le), ConfigError);
}

TEST_CASE("config file parsing converts dB once") {
  std::istringstream in(
      "# scenario\n"
      "cells = 3\n"
      "bs_antennas = 64\n"
      "eve_antennas = 4\n"
      "users = 8   # per cell\n"
      "rho = 0.2\n"
      "power_db = 20\n"
      "phi = 0.5\n"
      "pilot_power_db = 0\n"
      "pilot_length = 8\n"
      "coherence = 200\n"
      "training = contaminated\n"
      "an_method = random\n"
      "trials = 500\n"
      "seed = 42\n");
  const SystemConfig c = parse_config(in);
  CHECK(c.M == 3);
  CHECK(c.Nt == 64);
  CHECK(c.Ne == 4);
  CHECK(c.K == 8);
  CHECK(c.P == doctest::Approx(100.0));
  CHECK(c.p_tau == doctest::Approx(1.0));
  CHECK(c.training == Training::PilotContamination);
  CHECK(c.an_method == AnMethod::Random);
  CHECK(c.trials == 500);
  CHECK(c.seed == 42u);
  CHECK(c.seed_set);
}

TEST_CASE("config file errors") {
  auto parse = [](const char* text) {
    std::istringstream in(text);
    return parse_config(in);
  };
  CHECK_THROWS_AS(parse("unknown_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("cells = three\n"), ConfigError);
  CHECK_THROWS_AS(parse("cells 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("training = partial\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/dir/cfg.txt"), ConfigError);
}
