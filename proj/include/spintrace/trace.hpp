#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "spintrace/gamma.hpp"
#include "spintrace/index.hpp"
#include "spintrace/rational.hpp"
#include "spintrace/tensor.hpp"

namespace spintrace {
namespace trace_detail {

inline std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

inline std::map<uint32_t, int>& slot_table() {
  static std::map<uint32_t, int> t;
  return t;
}

inline Idx slot_idx(int i) {
  Idx v = free_idx("@s" + std::to_string(i));
  std::lock_guard<std::mutex> lock(cache_mutex());
  slot_table().emplace(v.payload(), i);
  return v;
}

inline int slot_of(Idx v) {
  if (v.kind() != IdxKind::Free) return -1;
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto& t = slot_table();
  auto it = t.find(v.payload());
  return it == t.end() ? -1 : it->second;
}

// tr(gamma_{a0} ... gamma_{a_{L-1}}) = 4 * sum over pairings with crossing
// signs.  Built once per length over reserved slot indices.
inline TensorExpr plain_shape(int L) {
  static std::map<int, TensorExpr> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = cache.find(L);
    if (it != cache.end()) return it->second;
  }
  if (L % 2 == 1) return TensorExpr::zero();

  TensorExpr shape;
  std::vector<std::pair<int, int>> pairing;
  std::function<void(std::vector<int>&, int)> rec = [&](std::vector<int>& rem, int sign) {
    if (rem.empty()) {
      TensorTerm t;
      t.coeff = grat(4 * sign);
      for (auto& p : pairing) t.etas.push_back({slot_idx(p.first), slot_idx(p.second)});
      shape.push_term(t);
      return;
    }
    int first = rem[0];
    for (size_t j = 1; j < rem.size(); ++j) {
      std::vector<int> next;
      for (size_t i = 1; i < rem.size(); ++i)
        if (i != j) next.push_back(rem[i]);
      pairing.push_back({first, rem[j]});
      int s = (j % 2 == 1) ? sign : -sign;
      rec(next, s);
      pairing.pop_back();
    }
  };
  std::vector<int> all(L);
  for (int i = 0; i < L; ++i) all[i] = i;
  rec(all, 1);
  shape.canonicalize();
  std::lock_guard<std::mutex> lock(cache_mutex());
  cache.emplace(L, shape);
  return shape;
}

// --- exhaustive enumeration + exact fit for gamma_5 words of length >= 6 ---

struct EpsMonomial {
  std::array<int, 4> eps_slots;
  std::vector<std::pair<int, int>> eta_pairs;
};

inline std::vector<EpsMonomial> eps_monomials(int L) {
  std::vector<EpsMonomial> out;
  std::vector<int> comb;
  std::function<void(int)> choose = [&](int start) {
    if (comb.size() == 4) {
      std::vector<int> rest;
      for (int i = 0; i < L; ++i)
        if (std::find(comb.begin(), comb.end(), i) == comb.end()) rest.push_back(i);
      std::vector<std::pair<int, int>> pairing;
      std::function<void(std::vector<int>&)> pair_rec = [&](std::vector<int>& rem) {
        if (rem.empty()) {
          EpsMonomial m;
          std::copy(comb.begin(), comb.end(), m.eps_slots.begin());
          m.eta_pairs = pairing;
          out.push_back(m);
          return;
        }
        int first = rem[0];
        for (size_t j = 1; j < rem.size(); ++j) {
          std::vector<int> next;
          for (size_t i = 1; i < rem.size(); ++i)
            if (i != j) next.push_back(rem[i]);
          pairing.push_back({first, rem[j]});
          pair_rec(next);
          pairing.pop_back();
        }
      };
      pair_rec(rest);
      return;
    }
    for (int i = start; i < L; ++i) {
      comb.push_back(i);
      choose(i + 1);
      comb.pop_back();
    }
  };
  choose(0);
  return out;
}

// value of a monomial at a concrete slot assignment (digits 0..3)
inline int eval_monomial(const EpsMonomial& m, const std::vector<int>& dig) {
  for (auto& p : m.eta_pairs)
    if (dig[p.first] != dig[p.second]) return 0;
  std::array<int, 4> v{};
  for (int i = 0; i < 4; ++i) v[i] = dig[m.eps_slots[i]];
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (v[i] == v[j]) return 0;
      if (v[i] > v[j]) sign = -sign;
    }
  return sign;
}

// exact traces tr(gamma^{a0}...gamma^{a_{L-1}} gamma_5) over all 4^L tuples
inline std::vector<int> enumerate_g5_traces(int L) {
  const auto& g = mono_gammas();
  size_t total = size_t(1) << (2 * L);
  std::vector<int> out(total);
  std::vector<MonoMat> stack(L + 1);
  stack[0] = MonoMat::identity();
  std::vector<int> dig(L, 0);
  size_t t = 0;
  int depth = 0;
  // iterative DFS with prefix products
  while (true) {
    while (depth < L) {
      stack[depth + 1] = stack[depth] * g[dig[depth]];
      ++depth;
    }
    MonoMat full = stack[L] * g[4];
    auto [re, im] = full.trace();
    if (im != 0) throw std::runtime_error("gamma_5 trace enumeration: complex trace");
    out[t++] = re;
    // advance odometer (last digit fastest)
    int d = L - 1;
    while (d >= 0 && dig[d] == 3) {
      dig[d] = 0;
      --d;
    }
    if (d < 0) break;
    ++dig[d];
    depth = d;
  }
  if (t != total) throw std::runtime_error("enumeration incomplete");
  return out;
}

constexpr uint64_t kPrime = (uint64_t(1) << 61) - 1;

inline uint64_t mulmod(uint64_t a, uint64_t b) {
  return static_cast<uint64_t>((__uint128_t)a * b % kPrime);
}
inline uint64_t submod(uint64_t a, uint64_t b) { return (a + kPrime - b) % kPrime; }
inline uint64_t powmod(uint64_t a, uint64_t e) {
  uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a);
    a = mulmod(a, a);
    e >>= 1;
  }
  return r;
}

// Gaussian elimination with exact rationals on a small square system.
inline std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> a,
                                         std::vector<Rational> b) {
  size_t n = b.size();
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) throw std::runtime_error("exact solve: singular system");
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  std::vector<Rational> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// Fit the enumerated gamma_5 trace onto the eps/eta monomial basis.  The
// monomial set is linearly dependent (Schouten identities), so a maximal
// independent subset is selected over GF(p) first; the final coefficients are
// verified exactly against every tuple and any residue aborts.
inline TensorExpr g5_shape_fit(int L) {
  auto monomials = eps_monomials(L);
  auto oracle = enumerate_g5_traces(L);
  size_t total = oracle.size();
  size_t nm = monomials.size();

  std::vector<std::vector<int>> dig_of(total, std::vector<int>(L));
  for (size_t t = 0; t < total; ++t) {
    size_t x = t;
    for (int i = L - 1; i >= 0; --i) {
      dig_of[t][i] = static_cast<int>(x & 3);
      x >>= 2;
    }
  }

  auto select_and_solve = [&](const std::vector<size_t>& cols)
      -> std::pair<std::vector<size_t>, std::vector<size_t>> {
    // row-echelon over GF(p); rows are monomials restricted to the sampled
    // tuples.  Returns (chosen monomials, pivot tuple per chosen monomial).
    size_t nc = cols.size();
    std::vector<std::vector<uint64_t>> echelon;
    std::vector<size_t> pivot_col;
    std::vector<size_t> chosen;
    std::vector<size_t> chosen_tuple;
    for (size_t q = 0; q < nm; ++q) {
      std::vector<uint64_t> row(nc);
      for (size_t j = 0; j < nc; ++j) {
        int v = eval_monomial(monomials[q], dig_of[cols[j]]);
        row[j] = v == 0 ? 0 : (v > 0 ? 1 : kPrime - 1);
      }
      for (size_t r = 0; r < echelon.size(); ++r) {
        uint64_t f = row[pivot_col[r]];
        if (f == 0) continue;
        uint64_t scale = mulmod(f, powmod(echelon[r][pivot_col[r]], kPrime - 2));
        for (size_t j = 0; j < nc; ++j)
          if (echelon[r][j]) row[j] = submod(row[j], mulmod(scale, echelon[r][j]));
      }
      size_t pc = nc;
      for (size_t j = 0; j < nc; ++j)
        if (row[j]) {
          pc = j;
          break;
        }
      if (pc == nc) continue;  // dependent
      echelon.push_back(std::move(row));
      pivot_col.push_back(pc);
      chosen.push_back(q);
      chosen_tuple.push_back(cols[pc]);
    }
    return {chosen, chosen_tuple};
  };

  auto attempt = [&](const std::vector<size_t>& cols) -> std::vector<Rational> {
    auto [chosen, tuples] = select_and_solve(cols);
    size_t r = chosen.size();
    std::vector<std::vector<Rational>> M(r, std::vector<Rational>(r));
    std::vector<Rational> v(r);
    for (size_t i = 0; i < r; ++i) {
      for (size_t j = 0; j < r; ++j)
        M[i][j] = eval_monomial(monomials[chosen[j]], dig_of[tuples[i]]);
      v[i] = Rational(oracle[tuples[i]]);
    }
    auto x = solve_exact(std::move(M), std::move(v));
    std::vector<Rational> coeffs(nm, Rational(0));
    for (size_t i = 0; i < r; ++i) coeffs[chosen[i]] = x[i];
    return coeffs;
  };

  auto verify = [&](const std::vector<Rational>& coeffs) -> bool {
    for (size_t t = 0; t < total; ++t) {
      Rational s(0);
      for (size_t q = 0; q < nm; ++q) {
        if (coeffs[q] == 0) continue;
        int v = eval_monomial(monomials[q], dig_of[t]);
        if (v == 1)
          s += coeffs[q];
        else if (v == -1)
          s -= coeffs[q];
      }
      if (s != oracle[t]) return false;
    }
    return true;
  };

  // strided tuple sample first, full set as fallback
  std::vector<size_t> cols;
  for (size_t t = 0; t < total; t += 13) cols.push_back(t);
  auto coeffs = attempt(cols);
  if (!verify(coeffs)) {
    cols.clear();
    for (size_t t = 0; t < total; ++t) cols.push_back(t);
    coeffs = attempt(cols);
    if (!verify(coeffs))
      throw std::runtime_error(
          "gamma_5 trace: residual after fitting the eta/eps monomial basis");
  }

  TensorExpr shape;
  for (size_t q = 0; q < nm; ++q) {
    if (coeffs[q] == 0) continue;
    TensorTerm t;
    t.coeff = GaussianRational(coeffs[q]);
    t.has_eps = true;
    for (int i = 0; i < 4; ++i) t.eps[i] = slot_idx(monomials[q].eps_slots[i]);
    for (auto& p : monomials[q].eta_pairs)
      t.etas.push_back({slot_idx(p.first), slot_idx(p.second)});
    shape.push_term(t);
  }
  shape.canonicalize();
  return shape;
}

inline TensorExpr g5_shape(int L) {
  static std::map<int, TensorExpr> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = cache.find(L);
    if (it != cache.end()) return it->second;
  }
  TensorExpr shape;
  if (L % 2 == 1 || L < 4) {
    shape = TensorExpr::zero();
  } else if (L == 4) {
    shape = TensorExpr::epsilon(slot_idx(0), slot_idx(1), slot_idx(2), slot_idx(3));
    shape.scale(grat(4));
  } else if (L <= 8) {
    shape = g5_shape_fit(L);
  } else {
    throw std::domain_error("gamma_5 words with more than 8 plain letters are not supported");
  }
  std::lock_guard<std::mutex> lock(cache_mutex());
  cache.emplace(L, shape);
  return shape;
}

inline TensorExpr instantiate_shape(const TensorExpr& shape, const std::vector<Idx>& targets) {
  TensorExpr out;
  for (auto& t0 : shape.terms()) {
    TensorTerm t = t0;
    auto subst = [&](Idx& v) {
      int slot = slot_of(v);
      if (slot >= 0) v = targets.at(slot);
    };
    for (auto& e : t.etas) {
      subst(e.first);
      subst(e.second);
    }
    if (t.has_eps)
      for (auto& v : t.eps) subst(v);
    out.push_term(t);
  }
  out.canonicalize();
  return out;
}

}  // namespace trace_detail

// Spin trace of a word in the Dirac algebra, tr(1) = 4.  gamma_5 letters are
// anticommuted to the right and reduced via gamma_5^2 = 1; an odd number of
// remaining letters traces to zero; a surviving gamma_5 with four letters
// gives 4*eps; longer gamma_5 words go through the enumeration fit.
// Slashed-xi letters come back as Xi indices in the TensorExpr, ready for
// angular averaging.
inline TensorExpr gamma_trace(const GammaWord& word) {
  int five_parity = 0;
  int sign = 1;
  std::vector<Idx> targets;
  for (auto& l : word.letters) {
    if (l.kind == GammaKind::Five) {
      five_parity ^= 1;
      continue;
    }
    if (five_parity) sign = -sign;
    if (l.kind == GammaKind::Plain)
      targets.push_back(l.idx);
    else
      targets.push_back(xi_slot(fresh_xi_slot()));
  }
  int L = static_cast<int>(targets.size());
  TensorExpr shape = five_parity ? trace_detail::g5_shape(L) : trace_detail::plain_shape(L);
  TensorExpr out = trace_detail::instantiate_shape(shape, targets);
  out.scale(word.prefactor * grat(sign));
  return out;
}

// gamma_trace with the xi slots pinned to concrete basis directions.
inline TensorExpr gamma_trace_xi_pinned(const GammaWord& word, const std::vector<int>& xi_values) {
  GammaWord w;
  w.prefactor = word.prefactor;
  size_t k = 0;
  for (auto& l : word.letters) {
    if (l.kind == GammaKind::Slashed) {
      if (k >= xi_values.size()) throw std::domain_error("missing xi index assignment");
      w.letters.push_back(GammaLetter::plain(concrete(xi_values[k++])));
    } else {
      w.letters.push_back(l);
    }
  }
  return gamma_trace(w);
}

}  // namespace spintrace
