#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spintrace/index.hpp"
#include "spintrace/rational.hpp"

namespace spintrace {

inline uint32_t fresh_xi_slot() {
  static std::atomic<uint32_t> counter{0};
  return counter++;
}

// One monomial in the eta/epsilon algebra: coeff * pi^pi_pow * prod eta(a,b)
// * [eps(e0..e3)].  Indices follow index.hpp; an eta side of kind Xi is a
// component of the unit vector xi.
struct TensorTerm {
  GaussianRational coeff;
  int pi_pow = 0;
  std::vector<std::pair<Idx, Idx>> etas;
  bool has_eps = false;
  std::array<Idx, 4> eps{};
};

namespace detail {

// Where an index occurrence lives inside a term.
struct Site {
  int where;  // 0 = eta, 1 = eps, 2 = external (word slot)
  int i;      // eta number / eps position / external position
  int side;   // eta side 0/1
};

inline Idx& site_ref(TensorTerm& t, std::vector<Idx*>& extern_slots, const Site& s) {
  if (s.where == 0) return s.side == 0 ? t.etas[s.i].first : t.etas[s.i].second;
  if (s.where == 1) return t.eps[s.i];
  return *extern_slots[s.i];
}

inline void collect_sites(TensorTerm& t, std::vector<Idx*>& extern_slots,
                          std::vector<Site>& out) {
  out.clear();
  for (int i = 0; i < static_cast<int>(t.etas.size()); ++i) {
    out.push_back({0, i, 0});
    out.push_back({0, i, 1});
  }
  if (t.has_eps)
    for (int i = 0; i < 4; ++i) out.push_back({1, i, 0});
  for (int i = 0; i < static_cast<int>(extern_slots.size()); ++i)
    out.push_back({2, i, 0});
}

inline uint32_t fresh_dummy_id(TensorTerm& t, std::vector<Idx*>& extern_slots) {
  uint32_t next = 0;
  std::vector<Site> sites;
  collect_sites(t, extern_slots, sites);
  for (auto& s : sites) {
    Idx v = site_ref(t, extern_slots, s);
    if (v.kind() == IdxKind::Dummy) next = std::max(next, v.payload() + 1);
  }
  return next;
}

// Resolve all metric contractions in place.  Returns false if the term
// vanished.  extern_slots lets a caller (the operator-polynomial layer) expose
// additional index positions such as generator-word slots.
inline bool normalize_indices(TensorTerm& t, std::vector<Idx*> extern_slots) {
  // Einstein convention: a free name occurring twice marks a contracted pair.
  {
    std::vector<Site> sites;
    collect_sites(t, extern_slots, sites);
    std::map<uint32_t, std::vector<Site>> by_free;
    for (auto& s : sites) {
      Idx v = site_ref(t, extern_slots, s);
      if (v.kind() == IdxKind::Free) by_free[v.payload()].push_back(s);
    }
    uint32_t next_dummy = fresh_dummy_id(t, extern_slots);
    for (auto& [fid, occ] : by_free) {
      if (occ.size() == 1) continue;
      if (occ.size() > 2)
        throw std::domain_error("index '" + idx_name(make_idx(IdxKind::Free, fid)) +
                                "' occurs more than twice in a term");
      Idx d = dummy(next_dummy++);
      site_ref(t, extern_slots, occ[0]) = d;
      site_ref(t, extern_slots, occ[1]) = d;
    }
  }

  // Eliminate etas carrying a dummy or a trivially-resolvable pair.
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t e = 0; e < t.etas.size(); ++e) {
      Idx a = t.etas[e].first;
      Idx b = t.etas[e].second;
      if (a == b) {
        if (a.kind() == IdxKind::Dummy)
          t.coeff *= grat(4);  // eta^mu_mu = 4
        // concrete: eta_cc = 1; xi with itself: |xi|^2 = 1
        t.etas.erase(t.etas.begin() + e);
        changed = true;
        break;
      }
      if (a.kind() == IdxKind::Concrete && b.kind() == IdxKind::Concrete)
        return false;  // distinct concrete values: eta = 0
      if (a.kind() == IdxKind::Xi && b.kind() == IdxKind::Xi) {
        t.etas.erase(t.etas.begin() + e);  // xi.xi = 1 on the unit sphere
        changed = true;
        break;
      }
      if (a.kind() == IdxKind::Dummy || b.kind() == IdxKind::Dummy) {
        if (b.kind() == IdxKind::Dummy && a.kind() != IdxKind::Dummy) std::swap(a, b);
        // a is a dummy; substitute b at a's partner occurrence
        std::vector<Site> sites;
        collect_sites(t, extern_slots, sites);
        bool found = false;
        for (auto& s : sites) {
          if (s.where == 0 && s.i == static_cast<int>(e)) continue;
          Idx& v = site_ref(t, extern_slots, s);
          if (v == a) {
            v = b;
            found = true;
            break;
          }
        }
        if (!found)
          throw std::domain_error("unpaired dummy index in term");
        t.etas.erase(t.etas.begin() + e);
        changed = true;
        break;
      }
    }
  }

  if (t.has_eps) {
    int xi_count = 0;
    for (int i = 0; i < 4; ++i) {
      if (t.eps[i].kind() == IdxKind::Xi) ++xi_count;
      for (int j = i + 1; j < 4; ++j)
        if (t.eps[i] == t.eps[j]) return false;  // antisymmetry
    }
    if (xi_count >= 2) return false;  // xi contracted twice into eps
    // sign-normalize: sort entries, track permutation parity
    std::array<Idx, 4> v = t.eps;
    int sign = 1;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3 - i + 0; ++j)
        if (v[j + 1] < v[j]) {
          std::swap(v[j], v[j + 1]);
          sign = -sign;
        }
    t.eps = v;
    if (sign < 0) t.coeff = -t.coeff;
  }

  for (auto& e : t.etas)
    if (e.second < e.first) std::swap(e.first, e.second);
  std::sort(t.etas.begin(), t.etas.end(), [](auto& x, auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return x.second < y.second;
  });
  return !t.coeff.is_zero();
}

inline std::vector<uint32_t> term_key(const TensorTerm& t) {
  std::vector<uint32_t> k;
  k.push_back(static_cast<uint32_t>(t.pi_pow + 1000));
  k.push_back(static_cast<uint32_t>(t.etas.size()));
  for (auto& e : t.etas) {
    k.push_back(e.first.bits);
    k.push_back(e.second.bits);
  }
  k.push_back(t.has_eps ? 1u : 0u);
  if (t.has_eps)
    for (auto& i : t.eps) k.push_back(i.bits);
  return k;
}

}  // namespace detail

class TensorExpr {
 public:
  TensorExpr() = default;
  explicit TensorExpr(std::vector<TensorTerm> terms) : terms_(std::move(terms)) {
    canonicalize();
  }

  static TensorExpr zero() { return TensorExpr{}; }
  static TensorExpr scalar(const GaussianRational& c, int pi_pow = 0) {
    TensorTerm t;
    t.coeff = c;
    t.pi_pow = pi_pow;
    TensorExpr e;
    e.terms_.push_back(t);
    e.canonicalize();
    return e;
  }
  static TensorExpr eta(Idx a, Idx b) {
    TensorTerm t;
    t.coeff = grat(1);
    t.etas.push_back({a, b});
    TensorExpr e;
    e.terms_.push_back(t);
    e.canonicalize();
    return e;
  }
  static TensorExpr epsilon(Idx a, Idx b, Idx c, Idx d) {
    TensorTerm t;
    t.coeff = grat(1);
    t.has_eps = true;
    t.eps = {a, b, c, d};
    TensorExpr e;
    e.terms_.push_back(t);
    e.canonicalize();
    return e;
  }

  const std::vector<TensorTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void push_term(TensorTerm t) { terms_.push_back(std::move(t)); }

  // Resolves every contraction and merges like monomials; the result is the
  // unique normal form used for equality tests.
  void canonicalize() {
    std::map<std::vector<uint32_t>, TensorTerm> merged;
    for (auto& t : terms_) {
      TensorTerm c = t;
      if (!detail::normalize_indices(c, {})) continue;
      auto key = detail::term_key(c);
      auto it = merged.find(key);
      if (it == merged.end())
        merged.emplace(key, c);
      else
        it->second.coeff += c.coeff;
    }
    terms_.clear();
    for (auto& [k, t] : merged)
      if (!t.coeff.is_zero()) terms_.push_back(t);
  }

  TensorExpr& operator+=(const TensorExpr& o) {
    for (auto& t : o.terms_) terms_.push_back(t);
    canonicalize();
    return *this;
  }
  friend TensorExpr operator+(TensorExpr a, const TensorExpr& b) { return a += b; }
  friend TensorExpr operator-(TensorExpr a, const TensorExpr& b) {
    TensorExpr nb = b;
    for (auto& t : nb.terms_) t.coeff = -t.coeff;
    return a += nb;
  }
  TensorExpr& scale(const GaussianRational& c, int pi_pow = 0) {
    for (auto& t : terms_) {
      t.coeff *= c;
      t.pi_pow += pi_pow;
    }
    canonicalize();
    return *this;
  }
  friend TensorExpr operator*(const GaussianRational& c, TensorExpr e) {
    return e.scale(c);
  }
  friend TensorExpr operator*(const TensorExpr& a, const TensorExpr& b) {
    TensorExpr r;
    for (auto& x : a.terms_)
      for (auto& y : b.terms_) {
        if (x.has_eps && y.has_eps)
          throw std::domain_error("product of two epsilon factors is not supported");
        TensorTerm t;
        t.coeff = x.coeff * y.coeff;
        t.pi_pow = x.pi_pow + y.pi_pow;
        t.etas = x.etas;
        t.etas.insert(t.etas.end(), y.etas.begin(), y.etas.end());
        t.has_eps = x.has_eps || y.has_eps;
        t.eps = x.has_eps ? x.eps : y.eps;
        r.terms_.push_back(t);
      }
    r.canonicalize();
    return r;
  }

  bool operator==(const TensorExpr& o) const {
    TensorExpr d = *this - o;
    return d.is_zero();
  }

  // Exact value under a concrete assignment of the free indices (1..4).
  GaussianRational evaluate(const std::map<uint32_t, int>& free_assign) const {
    GaussianRational sum;
    for (auto& t : terms_) {
      if (t.pi_pow != 0)
        throw std::domain_error("evaluation of a term carrying a pi power");
      auto resolve = [&](Idx i) -> int {
        if (i.kind() == IdxKind::Concrete) return concrete_value(i);
        if (i.kind() == IdxKind::Free) {
          auto it = free_assign.find(i.payload());
          if (it == free_assign.end())
            throw std::domain_error("unassigned free index " + idx_name(i));
          return it->second;
        }
        throw std::domain_error("cannot evaluate index " + idx_name(i));
      };
      bool dead = false;
      for (auto& e : t.etas)
        if (resolve(e.first) != resolve(e.second)) {
          dead = true;
          break;
        }
      if (dead) continue;
      GaussianRational v = t.coeff;
      if (t.has_eps) {
        std::array<int, 4> p{};
        for (int i = 0; i < 4; ++i) p[i] = resolve(t.eps[i]);
        int sign = 1;
        for (int i = 0; i < 4 && sign; ++i)
          for (int j = i + 1; j < 4; ++j) {
            if (p[i] == p[j]) sign = 0;
            else if (p[i] > p[j]) sign = -sign;
          }
        if (sign == 0) continue;
        if (sign < 0) v = -v;
      }
      sum += v;
    }
    return sum;
  }

  std::string str() const;

 private:
  std::vector<TensorTerm> terms_;
};

// Normalization constants <xi...xi> (2m factors) = c_m * sum of pairings.
inline Rational angular_pairing_constant(int m) {
  if (m < 0) throw std::domain_error("negative pairing order");
  Rational pow2(1);
  for (int i = 0; i < m; ++i) pow2 *= 2;
  return Rational(1) / (pow2 * factorial(m + 1));
}

// Integration over the unit sphere in R^4, normalized so <1> = 1.  Odd
// numbers of xi components average to zero; 2m components become the sum of
// all pairings of eta factors times c_m.
inline TensorExpr angular_average(const TensorExpr& expr) {
  TensorExpr out;
  for (auto& t0 : expr.terms()) {
    TensorTerm base = t0;
    // locate xi occurrences
    std::vector<detail::Site> xi_sites;
    for (int i = 0; i < static_cast<int>(base.etas.size()); ++i) {
      if (base.etas[i].first.kind() == IdxKind::Xi) xi_sites.push_back({0, i, 0});
      if (base.etas[i].second.kind() == IdxKind::Xi) xi_sites.push_back({0, i, 1});
    }
    if (base.has_eps)
      for (int i = 0; i < 4; ++i)
        if (base.eps[i].kind() == IdxKind::Xi) xi_sites.push_back({1, i, 0});

    int k = static_cast<int>(xi_sites.size());
    if (k % 2 == 1) continue;  // odd moments vanish
    if (k == 0) {
      out.push_term(base);
      continue;
    }
    int m = k / 2;
    Rational cm = angular_pairing_constant(m);

    // enumerate pairings of the xi sites
    std::vector<int> order(k);
    for (int i = 0; i < k; ++i) order[i] = i;
    std::vector<std::pair<int, int>> pairing;
    std::vector<Idx*> none;
    std::function<void(std::vector<int>&)> rec = [&](std::vector<int>& rem) {
      if (rem.empty()) {
        TensorTerm t = base;
        std::vector<Idx*> ext;
        uint32_t nd = detail::fresh_dummy_id(t, ext);
        for (auto& pr : pairing) {
          Idx d = dummy(nd++);
          detail::site_ref(t, ext, xi_sites[pr.first]) = d;
          detail::site_ref(t, ext, xi_sites[pr.second]) = d;
        }
        t.coeff *= GaussianRational(cm);
        out.push_term(t);
        return;
      }
      int first = rem[0];
      for (size_t j = 1; j < rem.size(); ++j) {
        std::vector<int> next;
        for (size_t i = 1; i < rem.size(); ++i)
          if (i != j) next.push_back(rem[i]);
        pairing.push_back({first, rem[j]});
        rec(next);
        pairing.pop_back();
      }
    };
    rec(order);
  }
  out.canonicalize();
  return out;
}

// alias matching the operation vocabulary: resolve all contractions
inline TensorExpr contract(TensorExpr e) {
  e.canonicalize();
  return e;
}

struct Rank4Decomposition {
  GaussianRational A, B, C, D;
};

// Projects a 4-free-index expression onto
//   A eta(n1,n2)eta(n3,n4) + B eta(n1,n3)eta(n2,n4) + C eta(n1,n4)eta(n2,n3)
//   + D eps(n1,n2,n3,n4)
// by exact evaluation on all 256 index tuples; aborts if anything is left over.
inline Rank4Decomposition decompose_rank4(const TensorExpr& expr,
                                          const std::array<Idx, 4>& nu) {
  for (auto& n : nu)
    if (n.kind() != IdxKind::Free)
      throw std::domain_error("decompose_rank4 expects free indices");
  auto e1 = [](const std::array<int, 4>& v) { return (v[0] == v[1] && v[2] == v[3]) ? 1 : 0; };
  auto e2 = [](const std::array<int, 4>& v) { return (v[0] == v[2] && v[1] == v[3]) ? 1 : 0; };
  auto e3 = [](const std::array<int, 4>& v) { return (v[0] == v[3] && v[1] == v[2]) ? 1 : 0; };
  auto e4 = [](const std::array<int, 4>& v) {
    int sign = 1;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        if (v[i] == v[j]) return 0;
        if (v[i] > v[j]) sign = -sign;
      }
    return sign;
  };

  GaussianRational b1, b2, b3, b4;
  std::vector<GaussianRational> values(256);
  std::array<int, 4> v{};
  for (int t = 0; t < 256; ++t) {
    int x = t;
    for (int i = 0; i < 4; ++i) {
      v[i] = x % 4 + 1;
      x /= 4;
    }
    std::map<uint32_t, int> assign;
    for (int i = 0; i < 4; ++i) assign[nu[i].payload()] = v[i];
    GaussianRational f = expr.evaluate(assign);
    values[t] = f;
    b1 += grat(e1(v)) * f;
    b2 += grat(e2(v)) * f;
    b3 += grat(e3(v)) * f;
    b4 += grat(e4(v)) * f;
  }
  // Gram matrix of the basis is 12*I + 4*J on the eta block and 24 on eps.
  GaussianRational s = b1 + b2 + b3;
  Rational sixth(1, 6), twelfth(1, 12);
  Rank4Decomposition d;
  d.A = (b1 - GaussianRational(sixth) * s) * GaussianRational(twelfth);
  d.B = (b2 - GaussianRational(sixth) * s) * GaussianRational(twelfth);
  d.C = (b3 - GaussianRational(sixth) * s) * GaussianRational(twelfth);
  d.D = b4 * GaussianRational(Rational(1, 24));

  for (int t = 0; t < 256; ++t) {
    int x = t;
    for (int i = 0; i < 4; ++i) {
      v[i] = x % 4 + 1;
      x /= 4;
    }
    GaussianRational recon = d.A * grat(e1(v)) + d.B * grat(e2(v)) +
                             d.C * grat(e3(v)) + d.D * grat(e4(v));
    if (!(recon == values[t]))
      throw std::domain_error("decompose_rank4: input outside the eta/eps span");
  }
  return d;
}

inline std::string TensorExpr::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto& t : terms_) {
    if (!first) s += " + ";
    first = false;
    s += "(" + t.coeff.str() + ")";
    if (t.pi_pow != 0) s += "*pi^" + std::to_string(t.pi_pow);
    for (auto& e : t.etas)
      s += "*eta(" + idx_name(e.first) + "," + idx_name(e.second) + ")";
    if (t.has_eps) {
      s += "*eps(";
      for (int i = 0; i < 4; ++i) s += idx_name(t.eps[i]) + (i < 3 ? "," : ")");
    }
  }
  return s;
}

}  // namespace spintrace
