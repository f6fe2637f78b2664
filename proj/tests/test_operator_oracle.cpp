// Independent end-to-end oracle for the operator layer: covariant words are
// applied as honest differential operators to concrete gl_2-valued
// polynomial fields, and the resulting matrix polynomial is compared with
// the symbolic field polynomial evaluated on the same fields.  The gauge
// variation is checked the same way through a nilpotent deformation
// parameter.

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "spintrace/expansion.hpp"
#include "spintrace/ncpoly.hpp"

using namespace spintrace;

namespace {

// polynomials in x1..x4 and a deformation parameter t with t^2 = 0
struct Mono {
  std::array<int, 4> e{};
  int et = 0;
  bool operator<(const Mono& o) const {
    if (e != o.e) return e < o.e;
    return et < o.et;
  }
  bool operator==(const Mono& o) const { return e == o.e && et == o.et; }
};

struct Poly {
  std::map<Mono, GaussianRational> c;

  static Poly constant(const GaussianRational& v) {
    Poly p;
    if (!v.is_zero()) p.c[Mono{}] = v;
    return p;
  }
  Poly& operator+=(const Poly& o) {
    for (auto& [m, v] : o.c) {
      auto& slot = c[m];
      slot += v;
      if (slot.is_zero()) c.erase(m);
    }
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (auto& [ma, va] : a.c)
      for (auto& [mb, vb] : b.c) {
        Mono m;
        for (int i = 0; i < 4; ++i) m.e[i] = ma.e[i] + mb.e[i];
        m.et = ma.et + mb.et;
        if (m.et > 1) continue;  // nilpotent deformation
        auto& slot = r.c[m];
        slot += va * vb;
        if (slot.is_zero()) r.c.erase(m);
      }
    return r;
  }
  Poly scaled(const GaussianRational& v) const {
    Poly r;
    if (v.is_zero()) return r;
    for (auto& [m, w] : c) r.c[m] = w * v;
    return r;
  }
  Poly d(int k) const {  // d/dx_k, k in 0..3
    Poly r;
    for (auto& [m, v] : c) {
      if (m.e[k] == 0) continue;
      Mono n = m;
      n.e[k] -= 1;
      r.c[n] = v * grat(m.e[k]);
    }
    return r;
  }
  Poly t_part() const {  // coefficient of t
    Poly r;
    for (auto& [m, v] : c)
      if (m.et == 1) {
        Mono n = m;
        n.et = 0;
        r.c[n] = v;
      }
    return r;
  }
  bool operator==(const Poly& o) const { return c == o.c; }
};

struct PMat {
  std::array<std::array<Poly, 2>, 2> m;

  static PMat zero() { return PMat{}; }
  static PMat one() {
    PMat r;
    r.m[0][0] = Poly::constant(grat(1));
    r.m[1][1] = Poly::constant(grat(1));
    return r;
  }
  friend PMat operator+(const PMat& a, const PMat& b) {
    PMat r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[i][j] + b.m[i][j];
    return r;
  }
  friend PMat operator*(const PMat& a, const PMat& b) {
    PMat r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) r.m[i][j] += a.m[i][k] * b.m[k][j];
    return r;
  }
  PMat scaled(const GaussianRational& v) const {
    PMat r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j].scaled(v);
    return r;
  }
  PMat d(int k) const {
    PMat r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j].d(k);
    return r;
  }
  PMat t_part() const {
    PMat r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j].t_part();
    return r;
  }
  bool operator==(const PMat& o) const { return m == o.m; }
};

std::mt19937 rng(90210);

GaussianRational random_coeff() {
  long re = static_cast<long>(rng() % 7) - 3;
  long im = static_cast<long>(rng() % 7) - 3;
  return GaussianRational(rat(re), rat(im));
}

// random matrix field, polynomial of degree 2 in x
PMat random_field() {
  PMat f;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Poly p = Poly::constant(random_coeff());
      for (int k = 0; k < 4; ++k) {
        Mono lin;
        lin.e[k] = 1;
        p.c[lin] = random_coeff();
      }
      Mono quad;
      quad.e[static_cast<int>(rng() % 4)] = 2;
      p.c[quad] = random_coeff();
      f.m[i][j] = p;
    }
  return f;
}

struct Background {
  std::array<PMat, 4> V, C;
  PMat lambda;
};

Background random_background() {
  Background b;
  for (int k = 0; k < 4; ++k) {
    b.V[k] = random_field();
    b.C[k] = random_field();
  }
  b.lambda = random_field();
  return b;
}

const GaussianRational I = GaussianRational::unit_i();

PMat commutator_m(const PMat& a, const PMat& b) {
  return a * b + (b * a).scaled(grat(-1));
}

// the covariant word applied as a differential operator to f
PMat act(const std::vector<Generator>& word, const std::map<uint32_t, int>& dummies,
         const Background& bg, PMat f) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    int k;
    if (it->idx.kind() == IdxKind::Concrete)
      k = concrete_value(it->idx) - 1;
    else
      k = dummies.at(it->idx.payload()) - 1;
    if (it->kind == GenKind::C) {
      f = bg.C[k] * f;
    } else {
      f = bg.V[k] * f + f.d(k).scaled(-I);
    }
  }
  return f;
}

PMat act_poly(const CovariantPolynomial& p, const Background& bg) {
  PMat total = PMat::zero();
  for (auto& term : p.terms()) {
    REQUIRE(term.tensor.etas.empty());
    REQUIRE_FALSE(term.tensor.has_eps);
    REQUIRE(term.tensor.pi_pow == 0);
    // sum over assignments of the contracted indices
    std::vector<uint32_t> ds;
    for (auto& g : term.word)
      if (g.idx.kind() == IdxKind::Dummy) {
        if (std::find(ds.begin(), ds.end(), g.idx.payload()) == ds.end())
          ds.push_back(g.idx.payload());
      }
    long combos = 1;
    for (size_t i = 0; i < ds.size(); ++i) combos *= 4;
    for (long a = 0; a < combos; ++a) {
      std::map<uint32_t, int> assign;
      long x = a;
      for (auto d : ds) {
        assign[d] = static_cast<int>(x % 4) + 1;
        x /= 4;
      }
      total = total + act(term.word, assign, bg, PMat::one()).scaled(term.tensor.coeff);
    }
  }
  return total;
}

// evaluate a concrete field letter (with derivatives applied)
PMat eval_letter(const FieldLetter& l, const std::map<uint32_t, int>& dummies,
                 const Background& bg) {
  auto resolve = [&](Idx v) -> int {
    if (v.kind() == IdxKind::Concrete) return concrete_value(v) - 1;
    return dummies.at(v.payload()) - 1;
  };
  PMat f;
  switch (l.kind) {
    case FieldKind::V: f = bg.V[resolve(l.idx)]; break;
    case FieldKind::C: f = bg.C[resolve(l.idx)]; break;
    case FieldKind::Lambda: f = bg.lambda; break;
  }
  for (auto& d : l.derivs) f = f.d(resolve(d));
  return f;
}

PMat eval_poly(const FieldPolynomial& p, const Background& bg) {
  PMat total = PMat::zero();
  for (auto& term : p.terms()) {
    REQUIRE(term.tensor.etas.empty());
    REQUIRE_FALSE(term.tensor.has_eps);
    REQUIRE(term.tensor.pi_pow == 0);
    std::vector<uint32_t> ds;
    auto note = [&](Idx v) {
      if (v.kind() == IdxKind::Dummy &&
          std::find(ds.begin(), ds.end(), v.payload()) == ds.end())
        ds.push_back(v.payload());
    };
    for (auto& l : term.word) {
      for (auto& d : l.derivs) note(d);
      if (l.has_idx) note(l.idx);
    }
    long combos = 1;
    for (size_t i = 0; i < ds.size(); ++i) combos *= 4;
    for (long a = 0; a < combos; ++a) {
      std::map<uint32_t, int> assign;
      long x = a;
      for (auto d : ds) {
        assign[d] = static_cast<int>(x % 4) + 1;
        x /= 4;
      }
      PMat prod = PMat::one();
      for (auto& l : term.word) prod = prod * eval_letter(l, assign, bg);
      total = total + prod.scaled(term.tensor.coeff);
    }
  }
  return total;
}

}  // namespace

TEST_CASE("apply_to_one matches the concrete operator action", "[oracle][ncpoly]") {
  Background bg = random_background();

  // every kind pattern up to length 3, with concrete and contracted indices
  std::vector<CovariantPolynomial> cases;
  for (int len = 1; len <= 3; ++len) {
    for (int mask = 0; mask < (1 << len); ++mask) {
      CovariantPolynomial w = CovariantPolynomial::scalar(grat(1));
      for (int i = 0; i < len; ++i) {
        Idx idx = concrete(1 + (i + mask) % 4);
        w = w * ((mask >> i) & 1 ? Cgen(idx) : Dgen(idx));
      }
      cases.push_back(w);
    }
  }
  // contracted pairs
  cases.push_back(Dgen("om") * Dgen("om"));
  cases.push_back(Dgen("om") * Cgen("om"));
  cases.push_back(Dgen("om") * Dgen("om") * Cgen(concrete(2)));
  cases.push_back(Dgen("om") * Cgen(concrete(3)) * Dgen("om"));
  // and a contracted commutator square (the field-strength building block)
  cases.push_back(commutator(Dgen("om"), Cgen("on")) * commutator(Dgen("om"), Cgen("on")));

  for (auto& w : cases) {
    PMat direct = act_poly(w.canonicalize(false), bg);
    PMat symbolic = eval_poly(apply_to_one(w), bg);
    CHECK(direct == symbolic);
  }
}

TEST_CASE("gauge variation matches a nilpotent concrete deformation", "[oracle][ncpoly]") {
  Background bg = random_background();

  // deformed background: V -> V + t (d lambda + i [V, lambda]),
  //                      C -> C + t i [C, lambda]
  Background deformed = bg;
  Mono t_mono;
  t_mono.et = 1;
  Poly t_poly;
  t_poly.c[t_mono] = grat(1);
  PMat t_mat;
  for (int i = 0; i < 2; ++i) t_mat.m[i][i] = t_poly;
  for (int k = 0; k < 4; ++k) {
    PMat dV = bg.lambda.d(k) + commutator_m(bg.V[k], bg.lambda).scaled(I);
    PMat dC = commutator_m(bg.C[k], bg.lambda).scaled(I);
    deformed.V[k] = bg.V[k] + t_mat * dV;
    deformed.C[k] = bg.C[k] + t_mat * dC;
  }

  std::vector<CovariantPolynomial> cases;
  cases.push_back(Dgen(concrete(1)) * Dgen(concrete(2)));
  cases.push_back(Dgen("gm") * Dgen("gm"));
  cases.push_back(Dgen("gm") * Cgen("gm") * Dgen(concrete(4)));
  cases.push_back(commutator(Dgen("gm"), Dgen("gn")) * commutator(Dgen("gm"), Dgen("gn")));
  cases.push_back(commutator(Cgen("gm"), Dgen("gn")) * commutator(Cgen("gm"), Dgen("gn")));

  for (auto& w : cases) {
    FieldPolynomial f = apply_to_one(w);
    FieldPolynomial var = gauge_variation_vector(f);
    // the t-linear part of the deformed evaluation is the variation
    PMat direct = eval_poly(f, deformed).t_part();
    PMat symbolic = eval_poly(var, bg);
    CHECK(direct == symbolic);
  }
}

TEST_CASE("cyclic canonicalization preserves the pointwise matrix trace",
          "[oracle][ncpoly]") {
  Background bg = random_background();
  // rotating words can reshuffle and merge terms arbitrarily, but the trace
  // of the evaluated field polynomial must not move
  std::vector<FieldPolynomial> cases = {
      apply_to_one(Dgen("tm") * Cgen("tm") * Cgen(concrete(1))),
      apply_to_one(commutator(Dgen("tm"), Cgen("tn")) * commutator(Dgen("tm"), Cgen("tn"))),
      gauge_variation_vector(apply_to_one(Dgen("tm") * Dgen("tm"))),
  };
  for (auto& p : cases) {
    FieldPolynomial q = p.canonicalize(true);
    PMat fp = eval_poly(p, bg);
    PMat fq = eval_poly(q, bg);
    Poly trp = fp.m[0][0] + fp.m[1][1];
    Poly trq = fq.m[0][0] + fq.m[1][1];
    CHECK(trp == trq);
  }
}
