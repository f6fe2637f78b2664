#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spintrace/index.hpp"
#include "spintrace/rational.hpp"
#include "spintrace/tensor.hpp"

namespace spintrace {

// ------------------------------------------------------------------
// Covariant polynomials: noncommutative words over the generators
//   D_nu (covariant derivative)  and  C_nu (axial field),
// with an eta/eps index structure shared between tensor factors and word
// slots.  Contracted pairs are written by repeating a free index name; the
// normalizer promotes them to dummies.

enum class GenKind : uint8_t { D, C };

struct Generator {
  GenKind kind;
  Idx idx;
};

struct CovTerm {
  TensorTerm tensor;  // coeff, pi power, etas, eps
  std::vector<Generator> word;
};

namespace ncdetail {

inline void offset_dummies(TensorTerm& t, std::vector<Idx*> slots, uint32_t off) {
  auto shift = [off](Idx& v) {
    if (v.kind() == IdxKind::Dummy) v = dummy(v.payload() + off);
  };
  for (auto& e : t.etas) {
    shift(e.first);
    shift(e.second);
  }
  if (t.has_eps)
    for (auto& v : t.eps) shift(v);
  for (auto* s : slots) shift(*s);
}

inline uint32_t max_dummy(const TensorTerm& t, const std::vector<const Idx*>& slots) {
  uint32_t m = 0;
  auto upd = [&m](const Idx& v) {
    if (v.kind() == IdxKind::Dummy) m = std::max(m, v.payload() + 1);
  };
  for (auto& e : t.etas) {
    upd(e.first);
    upd(e.second);
  }
  if (t.has_eps)
    for (auto& v : t.eps) upd(v);
  for (auto* s : slots) upd(*s);
  return m;
}

}  // namespace ncdetail

class CovariantPolynomial {
 public:
  CovariantPolynomial() = default;

  static CovariantPolynomial zero() { return {}; }
  static CovariantPolynomial scalar(const GaussianRational& c, int pi_pow = 0) {
    CovariantPolynomial p;
    CovTerm t;
    t.tensor.coeff = c;
    t.tensor.pi_pow = pi_pow;
    p.terms_.push_back(t);
    return p;
  }
  static CovariantPolynomial generator(GenKind k, Idx i) {
    CovariantPolynomial p;
    CovTerm t;
    t.tensor.coeff = grat(1);
    t.word.push_back({k, i});
    p.terms_.push_back(t);
    return p;
  }
  // pure tensor factors (eta / eps) as rank-0 word terms
  static CovariantPolynomial eta_factor(Idx a, Idx b) {
    CovariantPolynomial p;
    CovTerm t;
    t.tensor.coeff = grat(1);
    t.tensor.etas.push_back({a, b});
    p.terms_.push_back(t);
    return p;
  }
  static CovariantPolynomial eps_factor(Idx a, Idx b, Idx c, Idx d) {
    CovariantPolynomial p;
    CovTerm t;
    t.tensor.coeff = grat(1);
    t.tensor.has_eps = true;
    t.tensor.eps = {a, b, c, d};
    p.terms_.push_back(t);
    return p;
  }

  const std::vector<CovTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void push_term(CovTerm t) { terms_.push_back(std::move(t)); }

  CovariantPolynomial& operator+=(const CovariantPolynomial& o) {
    for (auto& t : o.terms_) terms_.push_back(t);
    return *this;
  }
  friend CovariantPolynomial operator+(CovariantPolynomial a, const CovariantPolynomial& b) {
    return a += b;
  }
  friend CovariantPolynomial operator-(CovariantPolynomial a, const CovariantPolynomial& b) {
    CovariantPolynomial nb = b;
    for (auto& t : nb.terms_) t.tensor.coeff = -t.tensor.coeff;
    return a += nb;
  }
  CovariantPolynomial& scale(const GaussianRational& c, int pi_pow = 0) {
    for (auto& t : terms_) {
      t.tensor.coeff *= c;
      t.tensor.pi_pow += pi_pow;
    }
    return *this;
  }
  friend CovariantPolynomial operator*(const GaussianRational& c, CovariantPolynomial p) {
    return p.scale(c);
  }
  friend CovariantPolynomial operator*(const CovariantPolynomial& a,
                                       const CovariantPolynomial& b) {
    CovariantPolynomial r;
    for (auto& x : a.terms_)
      for (auto& y : b.terms_) {
        if (x.tensor.has_eps && y.tensor.has_eps)
          throw std::domain_error("product of two epsilon factors is not supported");
        CovTerm t = x;
        CovTerm ty = y;
        // keep dummy namespaces disjoint
        std::vector<Idx*> slots;
        for (auto& g : ty.word) slots.push_back(&g.idx);
        std::vector<const Idx*> cslots;
        for (auto& g : t.word) cslots.push_back(&g.idx);
        uint32_t off = ncdetail::max_dummy(t.tensor, cslots);
        ncdetail::offset_dummies(ty.tensor, slots, off);
        t.tensor.coeff = x.tensor.coeff * y.tensor.coeff;
        t.tensor.pi_pow = x.tensor.pi_pow + y.tensor.pi_pow;
        t.tensor.etas.insert(t.tensor.etas.end(), ty.tensor.etas.begin(), ty.tensor.etas.end());
        if (ty.tensor.has_eps) {
          t.tensor.has_eps = true;
          t.tensor.eps = ty.tensor.eps;
        }
        t.word.insert(t.word.end(), ty.word.begin(), ty.word.end());
        r.terms_.push_back(std::move(t));
      }
    return r;
  }

  // Unique normal form: contractions resolved, dummies renamed by first use
  // along the word, eps sign-sorted, like terms merged.  With modulo_cyclic
  // every word is rotated to its minimal serialization first, which decides
  // equality under the matrix trace.
  CovariantPolynomial canonicalize(bool modulo_cyclic = false) const {
    std::map<std::vector<uint32_t>, CovTerm> merged;
    for (auto& t0 : terms_) {
      CovTerm t = t0;
      std::vector<Idx*> slots;
      for (auto& g : t.word) slots.push_back(&g.idx);
      if (!detail::normalize_indices(t.tensor, slots)) continue;

      int L = static_cast<int>(t.word.size());
      int rotations = (modulo_cyclic && L > 1) ? L : 1;
      bool have_best = false;
      std::vector<uint32_t> best_key;
      CovTerm best;
      for (int r = 0; r < rotations; ++r) {
        CovTerm cand = t;
        std::rotate(cand.word.begin(), cand.word.begin() + r, cand.word.end());
        canonical_labels(cand);
        auto key = serialize(cand, false);
        if (!have_best || key < best_key) {
          have_best = true;
          best_key = key;
          best = cand;
        }
      }
      if (!have_best) {  // empty word
        CovTerm cand = t;
        canonical_labels(cand);
        best_key = serialize(cand, false);
        best = cand;
      }
      auto it = merged.find(best_key);
      if (it == merged.end())
        merged.emplace(best_key, best);
      else
        it->second.tensor.coeff += best.tensor.coeff;
    }
    CovariantPolynomial out;
    for (auto& [k, t] : merged)
      if (!t.tensor.coeff.is_zero()) out.terms_.push_back(t);
    return out;
  }

  bool equals(const CovariantPolynomial& o, bool modulo_cyclic = false) const {
    return (*this - o).canonicalize(modulo_cyclic).is_zero();
  }

  // drop every term containing a C generator (the pure-vector projection)
  CovariantPolynomial with_axial_zero() const {
    CovariantPolynomial out;
    for (auto& t : terms_) {
      bool has_c = false;
      for (auto& g : t.word)
        if (g.kind == GenKind::C) has_c = true;
      if (!has_c) out.terms_.push_back(t);
    }
    return out;
  }

  std::string str() const;
  std::string latex() const;
  nlohmann::json to_json() const;

 private:
  static void canonical_labels(CovTerm& t) {
    // dummies take sequential names by first occurrence along the word,
    // then through the eps slots
    std::map<uint32_t, uint32_t> ren;
    auto visit = [&ren](Idx& v) {
      if (v.kind() != IdxKind::Dummy) return;
      auto it = ren.find(v.payload());
      uint32_t nid;
      if (it == ren.end()) {
        nid = static_cast<uint32_t>(ren.size());
        ren.emplace(v.payload(), nid);
      } else {
        nid = it->second;
      }
      v = dummy(nid);
    };
    for (auto& g : t.word) visit(g.idx);
    if (t.tensor.has_eps)
      for (auto& v : t.tensor.eps) visit(v);
    // sign-sort eps after renaming
    if (t.tensor.has_eps) {
      auto& e = t.tensor.eps;
      int sign = 1;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j)
          if (e[j + 1] < e[j]) {
            std::swap(e[j], e[j + 1]);
            sign = -sign;
          }
      if (sign < 0) t.tensor.coeff = -t.tensor.coeff;
    }
    for (auto& e : t.tensor.etas)
      if (e.second < e.first) std::swap(e.first, e.second);
    std::sort(t.tensor.etas.begin(), t.tensor.etas.end());
  }

  static std::vector<uint32_t> serialize(const CovTerm& t, bool /*with_coeff*/) {
    std::vector<uint32_t> k;
    k.push_back(static_cast<uint32_t>(t.tensor.pi_pow + 1000));
    k.push_back(static_cast<uint32_t>(t.word.size()));
    for (auto& g : t.word) {
      k.push_back(static_cast<uint32_t>(g.kind));
      k.push_back(g.idx.bits);
    }
    k.push_back(static_cast<uint32_t>(t.tensor.etas.size()));
    for (auto& e : t.tensor.etas) {
      k.push_back(e.first.bits);
      k.push_back(e.second.bits);
    }
    k.push_back(t.tensor.has_eps ? 1u : 0u);
    if (t.tensor.has_eps)
      for (auto& v : t.tensor.eps) k.push_back(v.bits);
    return k;
  }

  std::vector<CovTerm> terms_;
};

inline CovariantPolynomial Dgen(Idx i) { return CovariantPolynomial::generator(GenKind::D, i); }
inline CovariantPolynomial Cgen(Idx i) { return CovariantPolynomial::generator(GenKind::C, i); }
inline CovariantPolynomial Dgen(const std::string& n) { return Dgen(free_idx(n)); }
inline CovariantPolynomial Cgen(const std::string& n) { return Cgen(free_idx(n)); }

inline CovariantPolynomial commutator(const CovariantPolynomial& a,
                                      const CovariantPolynomial& b) {
  return a * b - b * a;
}

inline bool equal_modulo_cyclic(const CovariantPolynomial& a, const CovariantPolynomial& b) {
  return a.equals(b, true);
}

// ------------------------------------------------------------------
// Field polynomials: words over multiplication operators
//   V_nu, C_nu (with derivative multi-indices) and the infinitesimal gauge
// parameter lambda.

enum class FieldKind : uint8_t { V, C, Lambda };

struct FieldLetter {
  FieldKind kind;
  std::vector<Idx> derivs;  // symmetric multi-index, kept sorted
  bool has_idx = false;
  Idx idx{};

  static FieldLetter field(FieldKind k, Idx i) { return {k, {}, true, i}; }
  static FieldLetter lambda() { return {FieldKind::Lambda, {}, false, Idx{}}; }
};

struct FieldTerm {
  TensorTerm tensor;
  std::vector<FieldLetter> word;
};

class FieldPolynomial {
 public:
  FieldPolynomial() = default;

  static FieldPolynomial zero() { return {}; }
  static FieldPolynomial single(FieldTerm t) {
    FieldPolynomial p;
    p.terms_.push_back(std::move(t));
    return p;
  }

  const std::vector<FieldTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void push_term(FieldTerm t) { terms_.push_back(std::move(t)); }

  FieldPolynomial& operator+=(const FieldPolynomial& o) {
    for (auto& t : o.terms_) terms_.push_back(t);
    return *this;
  }
  friend FieldPolynomial operator+(FieldPolynomial a, const FieldPolynomial& b) { return a += b; }
  friend FieldPolynomial operator-(FieldPolynomial a, const FieldPolynomial& b) {
    FieldPolynomial nb = b;
    for (auto& t : nb.terms_) t.tensor.coeff = -t.tensor.coeff;
    return a += nb;
  }
  FieldPolynomial& scale(const GaussianRational& c, int pi_pow = 0) {
    for (auto& t : terms_) {
      t.tensor.coeff *= c;
      t.tensor.pi_pow += pi_pow;
    }
    return *this;
  }

  FieldPolynomial canonicalize(bool modulo_cyclic = false) const {
    std::map<std::vector<uint32_t>, FieldTerm> merged;
    for (auto& t0 : terms_) {
      FieldTerm t = t0;
      std::vector<Idx*> slots;
      for (auto& l : t.word) {
        for (auto& d : l.derivs) slots.push_back(&d);
        if (l.has_idx) slots.push_back(&l.idx);
      }
      if (!detail::normalize_indices(t.tensor, slots)) continue;

      int L = static_cast<int>(t.word.size());
      int rotations = (modulo_cyclic && L > 1) ? L : 1;
      bool have_best = false;
      std::vector<uint32_t> best_key;
      FieldTerm best;
      for (int r = 0; r < rotations; ++r) {
        FieldTerm cand = t;
        std::rotate(cand.word.begin(), cand.word.begin() + r, cand.word.end());
        for (auto& [key, labeled] : label_candidates(cand)) {
          if (!have_best || key < best_key) {
            have_best = true;
            best_key = key;
            best = labeled;
          }
        }
      }
      if (!have_best) {
        for (auto& [key, labeled] : label_candidates(t)) {
          if (!have_best || key < best_key) {
            have_best = true;
            best_key = key;
            best = labeled;
          }
        }
      }
      auto it = merged.find(best_key);
      if (it == merged.end())
        merged.emplace(best_key, best);
      else
        it->second.tensor.coeff += best.tensor.coeff;
    }
    FieldPolynomial out;
    for (auto& [k, t] : merged)
      if (!t.tensor.coeff.is_zero()) out.terms_.push_back(t);
    return out;
  }

  bool equals(const FieldPolynomial& o, bool modulo_cyclic = false) const {
    return (*this - o).canonicalize(modulo_cyclic).is_zero();
  }

  bool contains_lambda() const {
    for (auto& t : terms_)
      for (auto& l : t.word)
        if (l.kind == FieldKind::Lambda) return true;
    return false;
  }

  FieldPolynomial with_axial_zero() const {
    FieldPolynomial out;
    for (auto& t : terms_) {
      bool has_c = false;
      for (auto& l : t.word)
        if (l.kind == FieldKind::C) has_c = true;
      if (!has_c) out.terms_.push_back(t);
    }
    return out;
  }

  // substitute every letter of kind `from` by kind `to` (derivatives kept)
  FieldPolynomial substitute(FieldKind from, FieldKind to,
                             const GaussianRational& factor = grat(1)) const {
    FieldPolynomial out;
    for (auto& t0 : terms_) {
      FieldTerm t = t0;
      for (auto& l : t.word)
        if (l.kind == from) {
          l.kind = to;
          t.tensor.coeff *= factor;
        }
      out.terms_.push_back(t);
    }
    return out;
  }

  // Terms whose whole word is a single derivative of a single letter
  // integrate to zero over R^4; dropping them is the integral normal form
  // used when a result is quoted under the integral sign.
  FieldPolynomial drop_single_letter_derivatives() const {
    FieldPolynomial out;
    for (auto& t : terms_) {
      if (t.word.size() == 1 && !t.word[0].derivs.empty()) continue;
      out.terms_.push_back(t);
    }
    return out;
  }

  std::string str() const;
  std::string latex() const;
  nlohmann::json to_json() const;

 private:
  // Dummy labels by first occurrence; within a letter the derivative
  // multi-index is sorted, which leaves the relative order of dummy derivs
  // ambiguous, so all orderings are tried and the minimal key wins.
  static std::vector<std::pair<std::vector<uint32_t>, FieldTerm>> label_candidates(
      const FieldTerm& t0) {
    // collect, per letter, the positions of dummy derivs
    std::vector<std::pair<std::vector<uint32_t>, FieldTerm>> out;
    std::vector<FieldTerm> stack{t0};
    // presort derivs: non-dummies ascending, dummies kept apart
    for (auto& l : stack[0].word) {
      std::stable_sort(l.derivs.begin(), l.derivs.end(), [](Idx a, Idx b) {
        bool da = a.kind() == IdxKind::Dummy, db = b.kind() == IdxKind::Dummy;
        if (da != db) return !da;
        if (da && db) return false;  // keep dummy order, permuted below
        return a < b;
      });
    }
    // enumerate permutations of the dummy tails letter by letter
    std::function<void(FieldTerm&, size_t)> rec = [&](FieldTerm& t, size_t li) {
      if (li == t.word.size()) {
        FieldTerm cand = t;
        relabel(cand);
        out.push_back({serialize(cand), cand});
        return;
      }
      auto& derivs = t.word[li].derivs;
      size_t first_dummy = derivs.size();
      for (size_t i = 0; i < derivs.size(); ++i)
        if (derivs[i].kind() == IdxKind::Dummy) {
          first_dummy = i;
          break;
        }
      size_t nd = derivs.size() - first_dummy;
      if (nd <= 1) {
        rec(t, li + 1);
        return;
      }
      std::vector<Idx> tail(derivs.begin() + first_dummy, derivs.end());
      std::sort(tail.begin(), tail.end());
      do {
        for (size_t i = 0; i < nd; ++i) derivs[first_dummy + i] = tail[i];
        rec(t, li + 1);
      } while (std::next_permutation(tail.begin(), tail.end()));
    };
    rec(stack[0], 0);
    return out;
  }

  static void relabel(FieldTerm& t) {
    std::map<uint32_t, uint32_t> ren;
    auto visit = [&ren](Idx& v) {
      if (v.kind() != IdxKind::Dummy) return;
      auto it = ren.find(v.payload());
      uint32_t nid;
      if (it == ren.end()) {
        nid = static_cast<uint32_t>(ren.size());
        ren.emplace(v.payload(), nid);
      } else {
        nid = it->second;
      }
      v = dummy(nid);
    };
    for (auto& l : t.word) {
      for (auto& d : l.derivs) visit(d);
      if (l.has_idx) visit(l.idx);
    }
    if (t.tensor.has_eps)
      for (auto& v : t.tensor.eps) visit(v);
    if (t.tensor.has_eps) {
      auto& e = t.tensor.eps;
      int sign = 1;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j)
          if (e[j + 1] < e[j]) {
            std::swap(e[j], e[j + 1]);
            sign = -sign;
          }
      if (sign < 0) t.tensor.coeff = -t.tensor.coeff;
    }
    for (auto& e : t.tensor.etas)
      if (e.second < e.first) std::swap(e.first, e.second);
    std::sort(t.tensor.etas.begin(), t.tensor.etas.end());
  }

  static std::vector<uint32_t> serialize(const FieldTerm& t) {
    std::vector<uint32_t> k;
    k.push_back(static_cast<uint32_t>(t.tensor.pi_pow + 1000));
    k.push_back(static_cast<uint32_t>(t.word.size()));
    for (auto& l : t.word) {
      k.push_back(static_cast<uint32_t>(l.kind));
      k.push_back(static_cast<uint32_t>(l.derivs.size()));
      for (auto& d : l.derivs) k.push_back(d.bits);
      k.push_back(l.has_idx ? l.idx.bits : 0xffffffffu);
    }
    k.push_back(static_cast<uint32_t>(t.tensor.etas.size()));
    for (auto& e : t.tensor.etas) {
      k.push_back(e.first.bits);
      k.push_back(e.second.bits);
    }
    k.push_back(t.tensor.has_eps ? 1u : 0u);
    if (t.tensor.has_eps)
      for (auto& v : t.tensor.eps) k.push_back(v.bits);
    return k;
  }

  std::vector<FieldTerm> terms_;
};

// ------------------------------------------------------------------
// Applying a covariant word to the constant function 1 (Leibniz rule,
// d_nu 1 = 0):  C_nu multiplies, D_nu contributes V_nu plus -i times the
// derivative of everything to its right.

inline FieldPolynomial apply_to_one(const CovariantPolynomial& p) {
  FieldPolynomial result;
  for (auto& ct : p.terms()) {
    FieldTerm seed;
    seed.tensor = ct.tensor;
    FieldPolynomial state = FieldPolynomial::single(seed);
    for (auto it = ct.word.rbegin(); it != ct.word.rend(); ++it) {
      const Generator& g = *it;
      FieldPolynomial next;
      for (auto& ft : state.terms()) {
        // left-multiplication by the field letter
        FieldTerm mul = ft;
        mul.word.insert(mul.word.begin(),
                        FieldLetter::field(g.kind == GenKind::D ? FieldKind::V : FieldKind::C,
                                           g.idx));
        next.push_term(mul);
        if (g.kind == GenKind::D) {
          // -i * d_nu acting on the product
          for (size_t j = 0; j < ft.word.size(); ++j) {
            FieldTerm der = ft;
            der.word[j].derivs.push_back(g.idx);
            std::sort(der.word[j].derivs.begin(), der.word[j].derivs.end());
            der.tensor.coeff *= -GaussianRational::unit_i();
            next.push_term(der);
          }
        }
      }
      state = next;
    }
    result += state;
  }
  return result.canonicalize(false);
}

// ------------------------------------------------------------------
// First-order vector gauge variation
//   delta V_mu = d_mu lambda + i [V_mu, lambda]
//   delta C_mu = i [C_mu, lambda]
// extended to derivative letters by the Leibniz rule.  Input must not
// already contain lambda.

namespace ncdetail {

// sub-multisets of a sorted multi-index together with their multiplicity
inline void submultisets(const std::vector<Idx>& s,
                         std::vector<std::pair<std::vector<Idx>, Rational>>& out) {
  // group equal values
  std::vector<std::pair<Idx, int>> groups;
  for (auto& v : s) {
    if (!groups.empty() && groups.back().first == v)
      groups.back().second++;
    else
      groups.push_back({v, 1});
  }
  std::vector<int> take(groups.size(), 0);
  std::function<void(size_t)> rec = [&](size_t gi) {
    if (gi == groups.size()) {
      std::vector<Idx> sub;
      Rational mult(1);
      for (size_t i = 0; i < groups.size(); ++i) {
        for (int r = 0; r < take[i]; ++r) sub.push_back(groups[i].first);
        mult *= binomial(groups[i].second, take[i]);
      }
      out.push_back({sub, mult});
      return;
    }
    for (int r = 0; r <= groups[gi].second; ++r) {
      take[gi] = r;
      rec(gi + 1);
    }
  };
  rec(0);
}

inline std::vector<Idx> multiset_minus(const std::vector<Idx>& s, const std::vector<Idx>& sub) {
  std::vector<Idx> rest = s;
  for (auto& v : sub) {
    auto it = std::find(rest.begin(), rest.end(), v);
    rest.erase(it);
  }
  return rest;
}

}  // namespace ncdetail

inline bool equal_modulo_cyclic(const FieldPolynomial& a, const FieldPolynomial& b) {
  return a.equals(b, true);
}

// d_nu applied to a product of field letters (Leibniz sum)
inline FieldPolynomial field_derivative(const FieldPolynomial& p, Idx nu) {
  FieldPolynomial out;
  for (auto& t : p.terms()) {
    for (size_t j = 0; j < t.word.size(); ++j) {
      FieldTerm nt = t;
      nt.word[j].derivs.push_back(nu);
      std::sort(nt.word[j].derivs.begin(), nt.word[j].derivs.end());
      out.push_term(nt);
    }
  }
  return out;
}

inline FieldPolynomial gauge_variation_vector(const FieldPolynomial& p) {
  if (p.contains_lambda())
    throw std::domain_error("gauge_variation_vector: input already contains lambda");
  FieldPolynomial out;
  const GaussianRational I = GaussianRational::unit_i();
  for (auto& t : p.terms()) {
    for (size_t j = 0; j < t.word.size(); ++j) {
      const FieldLetter& l = t.word[j];
      // delta(d_S V_nu) = d_S d_nu lambda + i sum_T m(S,T) [d_T V_nu, d_{S\T} lambda]
      // delta(d_S C_nu) =                   i sum_T m(S,T) [d_T C_nu, d_{S\T} lambda]
      auto emit = [&](const std::vector<FieldLetter>& repl, const GaussianRational& f,
                      int /*unused*/) {
        FieldTerm nt = t;
        nt.tensor.coeff *= f;
        nt.word.erase(nt.word.begin() + j);
        nt.word.insert(nt.word.begin() + j, repl.begin(), repl.end());
        out.push_term(nt);
      };
      if (l.kind == FieldKind::V) {
        FieldLetter lam = FieldLetter::lambda();
        lam.derivs = l.derivs;
        lam.derivs.push_back(l.idx);
        std::sort(lam.derivs.begin(), lam.derivs.end());
        emit({lam}, grat(1), 0);
      }
      std::vector<std::pair<std::vector<Idx>, Rational>> subs;
      ncdetail::submultisets(l.derivs, subs);
      for (auto& [sub, mult] : subs) {
        FieldLetter fld = l;
        fld.derivs = sub;
        FieldLetter lam = FieldLetter::lambda();
        lam.derivs = ncdetail::multiset_minus(l.derivs, sub);
        emit({fld, lam}, I * GaussianRational(mult), 0);
        emit({lam, fld}, -I * GaussianRational(mult), 0);
      }
    }
  }
  return out.canonicalize(false);
}

// ------------------------------------------------------------------
// printing / serialization

namespace ncdetail {
inline std::string idx_disp(Idx v) { return idx_name(v); }
}

inline std::string CovariantPolynomial::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto& t : terms_) {
    if (!first) s += " + ";
    first = false;
    s += "(" + t.tensor.coeff.str() + ")";
    if (t.tensor.pi_pow != 0) s += "*pi^" + std::to_string(t.tensor.pi_pow);
    for (auto& e : t.tensor.etas)
      s += "*eta(" + ncdetail::idx_disp(e.first) + "," + ncdetail::idx_disp(e.second) + ")";
    if (t.tensor.has_eps) {
      s += "*eps(";
      for (int i = 0; i < 4; ++i)
        s += ncdetail::idx_disp(t.tensor.eps[i]) + (i < 3 ? "," : ")");
    }
    for (auto& g : t.word)
      s += std::string("*") + (g.kind == GenKind::D ? "D_" : "C_") + ncdetail::idx_disp(g.idx);
  }
  return s;
}

inline nlohmann::json CovariantPolynomial::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (auto& t : terms_) {
    nlohmann::json jt;
    jt["coeff"] = {{"re", t.tensor.coeff.re.get_str()}, {"im", t.tensor.coeff.im.get_str()}};
    jt["pi_pow"] = t.tensor.pi_pow;
    nlohmann::json etas = nlohmann::json::array();
    for (auto& e : t.tensor.etas)
      etas.push_back({idx_name(e.first), idx_name(e.second)});
    jt["etas"] = etas;
    if (t.tensor.has_eps) {
      nlohmann::json eps = nlohmann::json::array();
      for (auto& v : t.tensor.eps) eps.push_back(idx_name(v));
      jt["eps"] = eps;
    } else {
      jt["eps"] = nullptr;
    }
    nlohmann::json word = nlohmann::json::array();
    for (auto& g : t.word)
      word.push_back({{"kind", g.kind == GenKind::D ? "D" : "C"}, {"index", idx_name(g.idx)}});
    jt["word"] = word;
    terms.push_back(jt);
  }
  return nlohmann::json{{"terms", terms}};
}

inline std::string CovariantPolynomial::latex() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto& t : terms_) {
    std::string coeff = t.tensor.coeff.str();
    if (!first) s += " + ";
    first = false;
    s += "\\left(" + coeff + "\\right)";
    if (t.tensor.pi_pow != 0) s += "\\pi^{" + std::to_string(t.tensor.pi_pow) + "}";
    // raised on first occurrence of a dummy, lowered on the second
    std::map<uint32_t, int> seen;
    auto disp = [&](Idx v) {
      std::string nm = "\\" + idx_name(v);
      if (v.kind() == IdxKind::Dummy) nm = "\\mu_{" + std::to_string(v.payload() + 1) + "}";
      if (v.kind() == IdxKind::Concrete) nm = std::to_string(concrete_value(v));
      if (v.kind() == IdxKind::Free) nm = "\\nu_{" + idx_name(v) + "}";
      return nm;
    };
    auto updown = [&](Idx v) -> bool {
      if (v.kind() != IdxKind::Dummy) return false;
      return seen[v.payload()]++ == 0;
    };
    for (auto& e : t.tensor.etas)
      s += "\\eta^{" + disp(e.first) + disp(e.second) + "}";
    if (t.tensor.has_eps) {
      s += "\\epsilon^{";
      for (auto& v : t.tensor.eps) s += disp(v);
      s += "}";
    }
    for (auto& g : t.word) {
      bool up = updown(g.idx);
      s += std::string(g.kind == GenKind::D ? "D" : "C") + (up ? "^{" : "_{") + disp(g.idx) + "}";
    }
  }
  return s;
}

inline std::string FieldPolynomial::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto& t : terms_) {
    if (!first) s += " + ";
    first = false;
    s += "(" + t.tensor.coeff.str() + ")";
    if (t.tensor.pi_pow != 0) s += "*pi^" + std::to_string(t.tensor.pi_pow);
    for (auto& e : t.tensor.etas)
      s += "*eta(" + idx_name(e.first) + "," + idx_name(e.second) + ")";
    if (t.tensor.has_eps) {
      s += "*eps(";
      for (int i = 0; i < 4; ++i) s += idx_name(t.tensor.eps[i]) + (i < 3 ? "," : ")");
    }
    for (auto& l : t.word) {
      s += "*";
      if (!l.derivs.empty()) {
        s += "d[";
        for (size_t i = 0; i < l.derivs.size(); ++i)
          s += idx_name(l.derivs[i]) + (i + 1 < l.derivs.size() ? "," : "");
        s += "]";
      }
      switch (l.kind) {
        case FieldKind::V: s += "V_" + idx_name(l.idx); break;
        case FieldKind::C: s += "C_" + idx_name(l.idx); break;
        case FieldKind::Lambda: s += "lam"; break;
      }
    }
  }
  return s;
}

inline nlohmann::json FieldPolynomial::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (auto& t : terms_) {
    nlohmann::json jt;
    jt["coeff"] = {{"re", t.tensor.coeff.re.get_str()}, {"im", t.tensor.coeff.im.get_str()}};
    jt["pi_pow"] = t.tensor.pi_pow;
    nlohmann::json etas = nlohmann::json::array();
    for (auto& e : t.tensor.etas)
      etas.push_back({idx_name(e.first), idx_name(e.second)});
    jt["etas"] = etas;
    if (t.tensor.has_eps) {
      nlohmann::json eps = nlohmann::json::array();
      for (auto& v : t.tensor.eps) eps.push_back(idx_name(v));
      jt["eps"] = eps;
    } else {
      jt["eps"] = nullptr;
    }
    nlohmann::json word = nlohmann::json::array();
    for (auto& l : t.word) {
      nlohmann::json jl;
      jl["field"] = l.kind == FieldKind::V ? "V" : (l.kind == FieldKind::C ? "C" : "lambda");
      nlohmann::json ds = nlohmann::json::array();
      for (auto& d : l.derivs) ds.push_back(idx_name(d));
      jl["derivs"] = ds;
      jl["index"] = l.has_idx ? nlohmann::json(idx_name(l.idx)) : nlohmann::json(nullptr);
      word.push_back(jl);
    }
    jt["word"] = word;
    terms.push_back(jt);
  }
  return nlohmann::json{{"terms", terms}};
}

inline std::string FieldPolynomial::latex() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto& t : terms_) {
    if (!first) s += " + ";
    first = false;
    s += "\\left(" + t.tensor.coeff.str() + "\\right)";
    for (auto& e : t.tensor.etas)
      s += "\\eta^{" + idx_name(e.first) + idx_name(e.second) + "}";
    for (auto& l : t.word) {
      std::string core;
      switch (l.kind) {
        case FieldKind::V: core = "V"; break;
        case FieldKind::C: core = "C"; break;
        case FieldKind::Lambda: core = "\\lambda"; break;
      }
      if (!l.derivs.empty()) {
        std::string ds;
        for (auto& d : l.derivs) ds += "\\partial_{" + idx_name(d) + "}";
        core = "(" + ds + core + (l.has_idx ? "_{" + idx_name(l.idx) + "}" : "") + ")";
      } else if (l.has_idx) {
        core += "_{" + idx_name(l.idx) + "}";
      }
      s += core;
    }
  }
  return s;
}

}  // namespace spintrace
