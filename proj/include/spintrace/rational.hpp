#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace spintrace {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational: zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational binomial(long n, long k) {
  if (k == 0) return Rational(1);
  if (k < 0 || n < 0 || k > n) return Rational(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return Rational(b);
}

inline Rational factorial(long n) {
  if (n < 0) throw std::domain_error("factorial: negative argument");
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(f);
}

// Exact complex rational a + b*i. The scalar field for every coefficient in
// the engine; no floating point enters the symbolic path.
struct GaussianRational {
  Rational re{0};
  Rational im{0};

  GaussianRational() = default;
  GaussianRational(long r) : re(r, 1) {}
  GaussianRational(const Rational& r) : re(r) {}
  GaussianRational(const Rational& r, const Rational& i) : re(r), im(i) {}

  static GaussianRational unit_i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  GaussianRational operator-() const { return {-re, -im}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = r;
    im = i;
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    Rational n2 = o.re * o.re + o.im * o.im;
    if (n2 == 0) throw std::domain_error("GaussianRational: division by zero");
    Rational r = (re * o.re + im * o.im) / n2;
    Rational i = (im * o.re - re * o.im) / n2;
    re = r;
    im = i;
    return *this;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  GaussianRational conj() const { return {re, -im}; }

  double re_double() const { return re.get_d(); }
  double im_double() const { return im.get_d(); }

  std::string str() const {
    if (im == 0) return re.get_str();
    std::string s;
    if (re != 0) s = re.get_str();
    std::string it;
    if (im == 1) it = "i";
    else if (im == -1) it = "-i";
    else it = im.get_str() + "*i";
    if (s.empty()) return it;
    if (it[0] != '-') return s + "+" + it;
    return s + it;
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& g) {
    return os << g.str();
  }
};

inline GaussianRational grat(long num, long den = 1) { return GaussianRational(rat(num, den)); }

}  // namespace spintrace
