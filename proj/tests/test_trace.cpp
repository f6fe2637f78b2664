#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "spintrace/trace.hpp"

using namespace spintrace;

namespace {

GammaWord word_from(const std::vector<int>& codes) {  // 1..4 plain, 5 = gamma_5
  GammaWord w;
  for (int c : codes)
    w.letters.push_back(c == 5 ? GammaLetter::five() : GammaLetter::plain(c));
  return w;
}

GaussianRational symbolic_value(const GammaWord& w) { return gamma_trace(w).evaluate({}); }

}  // namespace

TEST_CASE("trace formulas on short symbolic words", "[trace]") {
  Idx mu = free_idx("mu"), nu = free_idx("nu");

  TensorExpr two = gamma_trace(GammaWord({GammaLetter::plain(mu), GammaLetter::plain(nu)}));
  TensorExpr expect = TensorExpr::eta(mu, nu);
  expect.scale(grat(4));
  CHECK(two == expect);

  CHECK(gamma_trace(GammaWord({GammaLetter::plain(mu)})).is_zero());
  CHECK(gamma_trace(GammaWord({GammaLetter::plain(mu), GammaLetter::plain(nu),
                               GammaLetter::plain(free_idx("rho"))}))
            .is_zero());

  // four letters: 4(e12 e34 - e13 e24 + e14 e23) checked at concrete indices
  TensorExpr four = gamma_trace(word_from({1, 1, 2, 2}));
  CHECK(four.evaluate({}) == grat(4));
  CHECK(symbolic_value(word_from({1, 2, 1, 2})) == grat(-4));

  // gamma_5 sector
  CHECK(symbolic_value(word_from({5, 1, 2, 3, 4})) == grat(4));
  CHECK(symbolic_value(word_from({5, 2, 1, 3, 4})) == grat(-4));
  CHECK(gamma_trace(word_from({5})).is_zero());
  CHECK(gamma_trace(word_from({5, 1, 1})).is_zero());
}

TEST_CASE("exhaustive sweep against the matrix oracle, length <= 4", "[trace]") {
  for (int L = 0; L <= 4; ++L) {
    std::vector<int> dig(L, 1);
    while (true) {
      GammaWord w = word_from(dig);
      CHECK(symbolic_value(w) == enum_trace_oracle(w));
      int d = L - 1;
      while (d >= 0 && dig[d] == 5) {
        dig[d] = 1;
        --d;
      }
      if (d < 0) break;
      ++dig[d];
    }
  }
}

TEST_CASE("gamma_5 fit path agrees with the oracle on long words", "[trace]") {
  std::mt19937 rng(777);
  for (int trial = 0; trial < 300; ++trial) {
    int L = 6 + static_cast<int>(rng() % 4);  // 6..9
    std::vector<int> codes;
    for (int i = 0; i < L; ++i) codes.push_back(1 + static_cast<int>(rng() % 5));
    GammaWord w = word_from(codes);
    CHECK(symbolic_value(w) == enum_trace_oracle(w));
  }
}

TEST_CASE("trace is cyclic and reversal-symmetric", "[trace]") {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 120; ++trial) {
    int L = 1 + static_cast<int>(rng() % 8);
    std::vector<int> codes;
    for (int i = 0; i < L; ++i) codes.push_back(1 + static_cast<int>(rng() % 5));
    GammaWord w = word_from(codes);
    GaussianRational base = symbolic_value(w);
    for (int r = 1; r < L; ++r) CHECK(symbolic_value(w.rotated(r)) == base);

    bool has_five = false;
    for (int c : codes) has_five = has_five || c == 5;
    if (!has_five) CHECK(symbolic_value(w.reversed()) == base);
  }
}

TEST_CASE("odd number of non-gamma_5 letters traces to zero", "[trace]") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    int plain = 1 + 2 * static_cast<int>(rng() % 4);  // odd count
    int fives = static_cast<int>(rng() % 3);
    std::vector<int> codes;
    for (int i = 0; i < plain; ++i) codes.push_back(1 + static_cast<int>(rng() % 4));
    for (int i = 0; i < fives; ++i)
      codes.insert(codes.begin() + static_cast<int>(rng() % (codes.size() + 1)), 5);
    CHECK(gamma_trace(word_from(codes)).is_zero());
  }
}

TEST_CASE("free-index contraction matches the summed oracle", "[trace]") {
  // tr(gamma^mu gamma^1 gamma_mu gamma^1) via a repeated name equals the
  // explicit sum over mu = 1..4
  Idx m = free_idx("cm");
  GammaWord w({GammaLetter::plain(m), GammaLetter::plain(1), GammaLetter::plain(m),
               GammaLetter::plain(1)});
  GaussianRational sym = gamma_trace(w).evaluate({});
  GaussianRational sum;
  for (int c = 1; c <= 4; ++c) {
    GammaWord inst({GammaLetter::plain(c), GammaLetter::plain(1), GammaLetter::plain(c),
                    GammaLetter::plain(1)});
    sum += enum_trace_oracle(inst);
  }
  CHECK(sym == sum);
}

TEST_CASE("pinned xi slots reduce to plain letters", "[trace]") {
  GammaWord w({GammaLetter::slashed_xi(), GammaLetter::plain(2), GammaLetter::slashed_xi(),
               GammaLetter::plain(2)});
  TensorExpr pinned = gamma_trace_xi_pinned(w, {1, 1});
  GammaWord inst({GammaLetter::plain(1), GammaLetter::plain(2), GammaLetter::plain(1),
                  GammaLetter::plain(2)});
  CHECK(pinned.evaluate({}) == enum_trace_oracle(inst));
}
