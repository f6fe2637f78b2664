#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spintrace/index.hpp"
#include "spintrace/rational.hpp"

namespace spintrace {

// Letters of a word in the Dirac algebra over Euclidean R^4:
//   Plain  : gamma^nu, nu in 1..4 (index may be concrete or free)
//   Five   : gamma_5
//   Slashed: xi-slash = gamma^mu xi_mu for the unit vector xi
enum class GammaKind : uint8_t { Plain, Five, Slashed };

struct GammaLetter {
  GammaKind kind;
  Idx idx{};  // Plain only

  static GammaLetter plain(Idx i) { return {GammaKind::Plain, i}; }
  static GammaLetter plain(int v) { return {GammaKind::Plain, concrete(v)}; }
  static GammaLetter five() { return {GammaKind::Five, Idx{}}; }
  static GammaLetter slashed_xi() { return {GammaKind::Slashed, Idx{}}; }
};

struct GammaWord {
  GaussianRational prefactor = grat(1);
  std::vector<GammaLetter> letters;

  GammaWord() = default;
  explicit GammaWord(std::vector<GammaLetter> ls) : letters(std::move(ls)) {}

  GammaWord rotated(int r) const {
    GammaWord w;
    w.prefactor = prefactor;
    int n = static_cast<int>(letters.size());
    for (int i = 0; i < n; ++i) w.letters.push_back(letters[(i + r) % n]);
    return w;
  }
  GammaWord reversed() const {
    GammaWord w;
    w.prefactor = prefactor;
    w.letters.assign(letters.rbegin(), letters.rend());
    return w;
  }
};

struct Mat4 {
  std::array<std::array<GaussianRational, 4>, 4> m{};

  static Mat4 zero() { return Mat4{}; }
  static Mat4 identity() {
    Mat4 r;
    for (int i = 0; i < 4; ++i) r.m[i][i] = grat(1);
    return r;
  }

  friend Mat4 operator*(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        if (a.m[i][k].is_zero()) continue;
        for (int j = 0; j < 4; ++j) {
          if (b.m[k][j].is_zero()) continue;
          r.m[i][j] += a.m[i][k] * b.m[k][j];
        }
      }
    return r;
  }
  friend Mat4 operator+(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r.m[i][j] = a.m[i][j] + b.m[i][j];
    return r;
  }
  friend Mat4 operator-(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r.m[i][j] = a.m[i][j] - b.m[i][j];
    return r;
  }
  Mat4& scale(const GaussianRational& c) {
    for (auto& row : m)
      for (auto& x : row) x *= c;
    return *this;
  }
  friend bool operator==(const Mat4& a, const Mat4& b) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (!(a.m[i][j] == b.m[i][j])) return false;
    return true;
  }
  GaussianRational trace() const { return m[0][0] + m[1][1] + m[2][2] + m[3][3]; }
  bool is_zero() const {
    for (auto& row : m)
      for (auto& x : row)
        if (!x.is_zero()) return false;
    return true;
  }
};

struct MatrixRep {
  std::array<Mat4, 4> gamma;  // gamma^1..gamma^4
  Mat4 gamma5;
};

// The block representation with gamma^j off-diagonal Pauli blocks,
// gamma^4 = [[0, i],[-i, 0]] and gamma_5 = diag(1,1,-1,-1).
inline const MatrixRep& explicit_matrices() {
  static const MatrixRep rep = [] {
    MatrixRep r;
    const GaussianRational one = grat(1), mone = grat(-1);
    const GaussianRational I = GaussianRational::unit_i(), mI = -GaussianRational::unit_i();
    auto set = [](Mat4& g, int i, int j, const GaussianRational& v) { g.m[i][j] = v; };
    // sigma_1
    set(r.gamma[0], 0, 3, one);
    set(r.gamma[0], 1, 2, one);
    set(r.gamma[0], 2, 1, one);
    set(r.gamma[0], 3, 0, one);
    // sigma_2
    set(r.gamma[1], 0, 3, mI);
    set(r.gamma[1], 1, 2, I);
    set(r.gamma[1], 2, 1, mI);
    set(r.gamma[1], 3, 0, I);
    // sigma_3
    set(r.gamma[2], 0, 2, one);
    set(r.gamma[2], 1, 3, mone);
    set(r.gamma[2], 2, 0, one);
    set(r.gamma[2], 3, 1, mone);
    // gamma^4
    set(r.gamma[3], 0, 2, I);
    set(r.gamma[3], 1, 3, I);
    set(r.gamma[3], 2, 0, mI);
    set(r.gamma[3], 3, 1, mI);
    // gamma_5
    set(r.gamma5, 0, 0, one);
    set(r.gamma5, 1, 1, one);
    set(r.gamma5, 2, 2, mone);
    set(r.gamma5, 3, 3, mone);
    return r;
  }();
  return rep;
}

struct IdentityCheck {
  std::string name;
  bool ok;
};

// Verifies the full Clifford algebra on the explicit matrices:
// {gamma^mu, gamma^nu} = 2 eta^{mu nu}, gamma_5 anticommutation,
// gamma_5^2 = 1 and gamma_5 = gamma^1 gamma^2 gamma^3 gamma^4.  Exact.
inline std::vector<IdentityCheck> clifford_check() {
  const MatrixRep& r = explicit_matrices();
  std::vector<IdentityCheck> out;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      Mat4 anti = r.gamma[mu] * r.gamma[nu] + r.gamma[nu] * r.gamma[mu];
      Mat4 expect = Mat4::identity();
      expect.scale(grat(mu == nu ? 2 : 0));
      out.push_back({"{gamma^" + std::to_string(mu + 1) + ",gamma^" +
                         std::to_string(nu + 1) + "} = 2*eta",
                     anti == expect});
    }
  for (int mu = 0; mu < 4; ++mu) {
    Mat4 anti = r.gamma5 * r.gamma[mu] + r.gamma[mu] * r.gamma5;
    out.push_back({"{gamma_5,gamma^" + std::to_string(mu + 1) + "} = 0", anti.is_zero()});
  }
  out.push_back({"gamma_5^2 = 1", r.gamma5 * r.gamma5 == Mat4::identity()});
  out.push_back({"gamma_5 = gamma^1 gamma^2 gamma^3 gamma^4",
                 r.gamma[0] * r.gamma[1] * r.gamma[2] * r.gamma[3] == r.gamma5});
  return out;
}

inline bool clifford_check_all() {
  for (auto& c : clifford_check())
    if (!c.ok) return false;
  return true;
}

// Explicit-matrix trace of a word whose indices are all concrete.  Slashed
// letters are substituted by xi_comp (a unit vector with exact rational
// components).  Independent of the symbolic trace machinery.
inline GaussianRational enum_trace_oracle(
    const GammaWord& word,
    const std::array<Rational, 4>* xi_comp = nullptr) {
  const MatrixRep& rep = explicit_matrices();
  Mat4 xi_mat;
  if (xi_comp) {
    for (int c = 0; c < 4; ++c) {
      Mat4 g = rep.gamma[c];
      g.scale(GaussianRational((*xi_comp)[c]));
      xi_mat = xi_mat + g;
    }
  }
  Mat4 prod = Mat4::identity();
  for (auto& l : word.letters) {
    switch (l.kind) {
      case GammaKind::Plain: {
        if (l.idx.kind() != IdxKind::Concrete)
          throw std::domain_error("enum_trace_oracle: non-concrete index");
        prod = prod * rep.gamma[concrete_value(l.idx) - 1];
        break;
      }
      case GammaKind::Five:
        prod = prod * rep.gamma5;
        break;
      case GammaKind::Slashed:
        if (!xi_comp)
          throw std::domain_error("enum_trace_oracle: xi-slash without a concrete xi");
        prod = prod * xi_mat;
        break;
    }
  }
  return word.prefactor * prod.trace();
}

// -------------------------------------------------------------------------
// Fast path used by the exhaustive enumerations: the explicit matrices are
// signed complex permutation matrices, a class closed under multiplication.
// Entry phases live in Z_4 (i^phase).

struct MonoMat {
  std::array<uint8_t, 4> col{};    // column of the nonzero entry per row
  std::array<uint8_t, 4> phase{};  // entry = i^phase

  static MonoMat identity() {
    MonoMat m;
    for (int i = 0; i < 4; ++i) m.col[i] = static_cast<uint8_t>(i);
    return m;
  }
  friend MonoMat operator*(const MonoMat& a, const MonoMat& b) {
    MonoMat r;
    for (int i = 0; i < 4; ++i) {
      r.col[i] = b.col[a.col[i]];
      r.phase[i] = static_cast<uint8_t>((a.phase[i] + b.phase[a.col[i]]) & 3);
    }
    return r;
  }
  // trace as a Gaussian integer (re, im)
  std::pair<int, int> trace() const {
    int re = 0, im = 0;
    for (int i = 0; i < 4; ++i) {
      if (col[i] != i) continue;
      switch (phase[i]) {
        case 0: ++re; break;
        case 1: ++im; break;
        case 2: --re; break;
        case 3: --im; break;
      }
    }
    return {re, im};
  }
};

// gamma^1..gamma^4, gamma_5 in monomial form; agrees entrywise with
// explicit_matrices().
inline const std::array<MonoMat, 5>& mono_gammas() {
  static const std::array<MonoMat, 5> g = [] {
    std::array<MonoMat, 5> r{};
    r[0].col = {3, 2, 1, 0};
    r[0].phase = {0, 0, 0, 0};
    r[1].col = {3, 2, 1, 0};
    r[1].phase = {3, 1, 3, 1};
    r[2].col = {2, 3, 0, 1};
    r[2].phase = {0, 2, 0, 2};
    r[3].col = {2, 3, 0, 1};
    r[3].phase = {1, 1, 3, 3};
    r[4].col = {0, 1, 2, 3};
    r[4].phase = {0, 0, 2, 2};
    return r;
  }();
  return g;
}

}  // namespace spintrace
