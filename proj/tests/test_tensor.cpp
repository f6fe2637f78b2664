#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "spintrace/numeric.hpp"
#include "spintrace/tensor.hpp"

using namespace spintrace;

TEST_CASE("metric contraction rules", "[tensor]") {
  Idx mu = free_idx("tmu"), nu = free_idx("tnu"), rho = free_idx("trho"), sig = free_idx("tsig");

  // eta^{mu nu} eta_{mu nu} = 4
  TensorExpr e = TensorExpr::eta(mu, nu) * TensorExpr::eta(mu, nu);
  CHECK(e == TensorExpr::scalar(grat(4)));

  // eta chain collapses
  TensorExpr chain = TensorExpr::eta(mu, nu) * TensorExpr::eta(nu, rho) *
                     TensorExpr::eta(rho, sig);
  CHECK(chain == TensorExpr::eta(mu, sig));

  // eps contracted with a symmetric pair annihilates
  Idx n1 = free_idx("tn1"), n2 = free_idx("tn2"), n3 = free_idx("tn3"), n4 = free_idx("tn4");
  TensorExpr eps_eta = TensorExpr::epsilon(n1, n2, n3, n4) * TensorExpr::eta(n1, n2);
  CHECK(eps_eta.is_zero());

  // a free name used three times is malformed
  TensorExpr bad = TensorExpr::eta(mu, nu);
  TensorTerm t;
  t.coeff = grat(1);
  t.etas.push_back({mu, rho});
  t.etas.push_back({mu, sig});
  t.etas.push_back({mu, n1});
  bad.push_term(t);
  CHECK_THROWS(contract(bad));
}

TEST_CASE("angular averages of xi monomials", "[tensor][angular]") {
  // <1> = 1
  CHECK(angular_average(TensorExpr::scalar(grat(1))) == TensorExpr::scalar(grat(1)));

  // <xi xi> = eta / 4
  Idx a = free_idx("aa"), b = free_idx("ab");
  TensorExpr two = TensorExpr::eta(xi_slot(fresh_xi_slot()), a) *
                   TensorExpr::eta(xi_slot(fresh_xi_slot()), b);
  TensorExpr expect = TensorExpr::eta(a, b);
  expect.scale(GaussianRational(rat(1, 4)));
  CHECK(angular_average(two) == expect);

  // odd counts vanish
  TensorExpr three = TensorExpr::eta(xi_slot(fresh_xi_slot()), a) *
                     TensorExpr::eta(xi_slot(fresh_xi_slot()), b) *
                     TensorExpr::eta(xi_slot(fresh_xi_slot()), free_idx("ac"));
  CHECK(angular_average(three).is_zero());

  // four-fold: 1/24 times the three pairings
  Idx c = free_idx("ac2"), d = free_idx("ad");
  TensorExpr four = TensorExpr::eta(xi_slot(fresh_xi_slot()), a) *
                    TensorExpr::eta(xi_slot(fresh_xi_slot()), b) *
                    TensorExpr::eta(xi_slot(fresh_xi_slot()), c) *
                    TensorExpr::eta(xi_slot(fresh_xi_slot()), d);
  TensorExpr pairings = TensorExpr::eta(a, b) * TensorExpr::eta(c, d) +
                        TensorExpr::eta(a, c) * TensorExpr::eta(b, d) +
                        TensorExpr::eta(a, d) * TensorExpr::eta(b, c);
  pairings.scale(GaussianRational(rat(1, 24)));
  CHECK(angular_average(four) == pairings);
}

TEST_CASE("full-contraction identity <(xi.xi)^m> = 1", "[tensor][angular]") {
  for (int m = 1; m <= 4; ++m) {
    TensorExpr e = TensorExpr::scalar(grat(1));
    for (int p = 0; p < m; ++p) {
      Idx nm = free_idx("fcp" + std::to_string(p));
      e = e * (TensorExpr::eta(xi_slot(fresh_xi_slot()), nm) *
               TensorExpr::eta(xi_slot(fresh_xi_slot()), nm));
    }
    CHECK(angular_average(e) == TensorExpr::scalar(grat(1)));
  }
}

TEST_CASE("six-fold coefficient is 1/192 and pairings sum to 192", "[tensor][angular]") {
  CHECK(angular_pairing_constant(3) == rat(1, 192));
  // the full contraction splits as (sum over 15 pairings, each contracted)
  // * c_3 = 1; so the contracted pairing sum equals 192
  Rational c3 = angular_pairing_constant(3);
  CHECK(Rational(1) / c3 == 192);
}

TEST_CASE("angular average agrees with sphere quadrature", "[tensor][angular][oracle]") {
  numeric::SphereGrid grid(8);
  // all tuples for 2m <= 6, a deterministic sample for 2m = 8
  for (int k = 2; k <= 6; k += 2) {
    long total = 1;
    for (int i = 0; i < k; ++i) total *= 4;
    for (long t = 0; t < total; ++t) {
      std::vector<int> comps;
      long x = t;
      for (int i = 0; i < k; ++i) {
        comps.push_back(static_cast<int>(x % 4) + 1);
        x /= 4;
      }
      TensorExpr e = TensorExpr::scalar(grat(1));
      for (int cc : comps) e = e * TensorExpr::eta(xi_slot(fresh_xi_slot()), concrete(cc));
      double sym = angular_average(e).evaluate({}).re_double();
      double num = grid.moment(comps);
      REQUIRE(std::abs(sym - num) < 1e-10);
    }
  }
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> comps;
    for (int i = 0; i < 8; ++i) comps.push_back(1 + static_cast<int>(rng() % 4));
    TensorExpr e = TensorExpr::scalar(grat(1));
    for (int cc : comps) e = e * TensorExpr::eta(xi_slot(fresh_xi_slot()), concrete(cc));
    double sym = angular_average(e).evaluate({}).re_double();
    REQUIRE(std::abs(sym - grid.moment(comps)) < 1e-10);
  }
}

TEST_CASE("angular average commutes with eta contraction on spectator indices",
          "[tensor][angular]") {
  Idx a = free_idx("sp1"), b = free_idx("sp2");
  uint32_t s1 = fresh_xi_slot(), s2 = fresh_xi_slot();
  TensorExpr e = TensorExpr::eta(xi_slot(s1), a) * TensorExpr::eta(xi_slot(s2), b);
  // contract a with b after averaging vs before
  TensorExpr avg_then = angular_average(e) * TensorExpr::eta(a, b);
  TensorExpr contract_then = angular_average(e * TensorExpr::eta(a, b));
  CHECK(avg_then == contract_then);
}

TEST_CASE("rank-4 decomposition", "[tensor]") {
  std::array<Idx, 4> nus = {free_idx("rv1"), free_idx("rv2"), free_idx("rv3"),
                            free_idx("rv4")};

  TensorExpr four_eps = TensorExpr::epsilon(nus[0], nus[1], nus[2], nus[3]);
  four_eps.scale(grat(4));
  auto d1 = decompose_rank4(four_eps, nus);
  CHECK(d1.A == grat(0));
  CHECK(d1.B == grat(0));
  CHECK(d1.C == grat(0));
  CHECK(d1.D == grat(4));

  TensorExpr ee = TensorExpr::eta(nus[0], nus[1]) * TensorExpr::eta(nus[2], nus[3]);
  auto d2 = decompose_rank4(ee, nus);
  CHECK(d2.A == grat(1));
  CHECK(d2.B == grat(0));
  CHECK(d2.C == grat(0));
  CHECK(d2.D == grat(0));

  // round trip on a random exact combination
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto rc = [&]() { return GaussianRational(rat(static_cast<long>(rng() % 13) - 6,
                                                  1 + static_cast<long>(rng() % 3))); };
    GaussianRational A = rc(), B = rc(), C = rc(), D = rc();
    TensorExpr e = A * (TensorExpr::eta(nus[0], nus[1]) * TensorExpr::eta(nus[2], nus[3])) +
                   B * (TensorExpr::eta(nus[0], nus[2]) * TensorExpr::eta(nus[1], nus[3])) +
                   C * (TensorExpr::eta(nus[0], nus[3]) * TensorExpr::eta(nus[1], nus[2])) +
                   D * TensorExpr::epsilon(nus[0], nus[1], nus[2], nus[3]);
    auto d = decompose_rank4(e, nus);
    CHECK(d.A == A);
    CHECK(d.B == B);
    CHECK(d.C == C);
    CHECK(d.D == D);
  }

  // something outside the span aborts with a diagnostic
  TensorExpr outside = TensorExpr::eta(nus[0], nus[1]);
  CHECK_THROWS(decompose_rank4(outside, nus));
}
