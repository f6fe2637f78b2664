#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "spintrace/numeric.hpp"
#include "spintrace/rational.hpp"

namespace spintrace {

// ------------------------------------------------------------------
// Radial u-integrals
//   N_{n,k} = int_0^inf du u^{n+k-1} (1 - [u(1+i0+)]^2)^{-(n+1)}
// Closed form by contour evaluation:
//   N_{n,k} = (1/2) (-1)^{(n+k)/2} B((n+k)/2, (n-k)/2 + 1)
// valid for n-k even.  Odd n-k requests are a pipeline bug upstream
// (angular averaging annihilates them) and are rejected loudly.

struct IntegralValue {
  Rational value;
  int n = 0;
  int k = 0;
};

inline Rational beta_int(long x, long y) {
  // B(x,y) for positive integers
  return factorial(x - 1) * factorial(y - 1) / factorial(x + y - 1);
}

inline IntegralValue n_integral(int n, int k) {
  if (n < 1 || k < 0 || k > n)
    throw std::domain_error("n_integral: need n >= 1 and 0 <= k <= n");
  if ((n - k) % 2 != 0)
    throw std::domain_error("n_integral: odd n-k has no parity-even counterpart");
  long a = (n + k) / 2, b = (n - k) / 2 + 1;
  if (a < 1) throw std::domain_error("n_integral: (n+k)/2 < 1");
  Rational v = beta_int(a, b) / 2;
  if (a % 2 == 1) v = -v;
  return {v, n, k};
}

// Single-delta quadrature of the defining integral with the rotation
// u -> u(1+i*delta), real part.
inline double n_integral_numeric(int n, int k, double delta) {
  std::complex<double> rot(1.0, delta);
  std::complex<double> rot2 = rot * rot;
  auto f = [&](double u) -> numeric::cdouble {
    std::complex<double> den = 1.0 - u * u * rot2;
    return std::pow(u, n + k - 1) / std::pow(den, n + 1);
  };
  return numeric::integrate_halfline(f, 1e-12).real();
}

// Richardson extrapolation of the delta ladder to delta -> 0+.  Throws if the
// two deepest extrapolations disagree beyond tol.  Small deltas are avoided:
// the near-pole cancellation drowns in double-precision noise there, the
// moderate ladder extrapolates cleanly instead.
inline double n_integral_oracle(int n, int k, double tol = 1e-5) {
  // higher n sharpens the pole; keep delta above the double-noise threshold
  std::vector<double> deltas = n <= 4 ? std::vector<double>{0.05, 0.04, 0.03, 0.02, 0.015, 0.01}
                                      : std::vector<double>{0.10, 0.08, 0.06, 0.05, 0.04, 0.03};
  std::vector<double> vals;
  for (double d : deltas) vals.push_back(n_integral_numeric(n, k, d));
  double full = numeric::extrapolate_to_zero(deltas, vals);
  std::vector<double> d1(deltas.begin(), deltas.end() - 1);
  std::vector<double> v1(vals.begin(), vals.end() - 1);
  double shallow = numeric::extrapolate_to_zero(d1, v1);
  if (std::abs(full - shallow) > tol)
    throw std::runtime_error("n_integral_oracle: delta extrapolation did not converge, spread = " +
                             std::to_string(std::abs(full - shallow)));
  return full;
}

// Independent high-accuracy route: rotate the contour u = t e^{i theta} off
// the pole before setting delta = 0.
inline double n_integral_rotated(int n, int k, double theta = M_PI / 8) {
  std::complex<double> ph = std::polar(1.0, theta);
  std::complex<double> ph2 = ph * ph;
  std::complex<double> front = std::polar(1.0, theta * (n + k));
  auto f = [&](double t) -> numeric::cdouble {
    std::complex<double> den = 1.0 - t * t * ph2;
    return front * std::pow(t, n + k - 1) / std::pow(den, n + 1);
  };
  return numeric::integrate_halfline(f, 1e-12).real();
}

// ------------------------------------------------------------------
// The even eta-series of
//   I_{n,k}(eta) = Re int_0^inf ds (s+1+i eta)^{-(n+1-k)} (s-1+i eta)^{-k}
// obtained by exact partial fractions.  The pole separation is 2, so the
// partial-fraction coefficients are plain rationals; eta enters only through
// the endpoint values (1+i eta)^{-r} and (-1+i eta)^{-r}, whose real parts
// have even rational Taylor series.

struct EtaSeries {
  int n = 0;
  int k = 0;
  std::vector<Rational> even_coeffs;  // coefficients of eta^0, eta^2, ...

  Rational at_zero() const { return even_coeffs.empty() ? Rational(0) : even_coeffs[0]; }
  Rational coeff(int power) const {
    if (power % 2 != 0) return Rational(0);
    size_t i = static_cast<size_t>(power / 2);
    return i < even_coeffs.size() ? even_coeffs[i] : Rational(0);
  }
};

inline EtaSeries i_series(int n, int k, int order = 4) {
  if (n % 2 != 0 || n < 2)
    throw std::domain_error("i_series: odd n vanishes by the parity lemma");
  if (k < 0 || k > n + 1) throw std::domain_error("i_series: k out of range 0..n+1");
  int P = n + 1 - k, Q = k;
  int terms = order / 2 + 1;
  std::vector<Rational> series(terms, Rational(0));

  // Re (1+i eta)^{-r}: coefficient of eta^{2t} is (-1)^t binom(r+2t-1, 2t).
  auto add_endpoint = [&](const Rational& c, int r, bool minus_pole) {
    for (int t = 0; t < terms; ++t) {
      Rational term = c * binomial(r + 2 * t - 1, 2 * t);
      if (t % 2 == 1) term = -term;
      if (minus_pole && r % 2 == 1) term = -term;  // Re(-1+i eta)^{-r} = (-1)^r Re(1+i eta)^{-r}
      series[t] += term;
    }
  };

  Rational pow2(1);
  auto inv_pow2 = [](int e) {
    Rational p(1);
    for (int i = 0; i < e; ++i) p /= 2;
    return p;
  };

  // alpha_i / (i-1) * (1+i eta)^{-(i-1)}, i = 2..P
  for (int i = 2; i <= P; ++i) {
    Rational alpha = binomial(P + Q - i - 1, P - i) * inv_pow2(P + Q - i);
    if (Q % 2 == 1) alpha = -alpha;
    add_endpoint(alpha / (i - 1), i - 1, false);
  }
  // beta_j / (j-1) * (-1+i eta)^{-(j-1)}, j = 2..Q
  for (int j = 2; j <= Q; ++j) {
    Rational beta = binomial(P + Q - j - 1, Q - j) * inv_pow2(P + Q - j);
    if ((Q - j) % 2 == 1) beta = -beta;
    add_endpoint(beta / (j - 1), j - 1, true);
  }
  // pure single poles: P == 1 or Q == 1 contribute only the cancelling logs

  EtaSeries out;
  out.n = n;
  out.k = k;
  out.even_coeffs = std::move(series);
  return out;
}

// quadrature oracle for I_{n,k}(eta), eta > 0
inline double i_value_numeric(int n, int k, double eta) {
  if (eta <= 0) throw std::domain_error("i_value_numeric: eta must be positive");
  int P = n + 1 - k, Q = k;
  auto f = [&](double s) -> numeric::cdouble {
    std::complex<double> a(s + 1.0, eta), b(s - 1.0, eta);
    return 1.0 / (std::pow(a, P) * std::pow(b, Q));
  };
  return numeric::integrate_halfline(f, 1e-12).real();
}

// Whole-line integral of the same integrand for odd n; both poles lie in the
// same half plane so the value is exactly zero (contour closing).
inline double odd_n_wholeline_numeric(int n, int k, double eta) {
  if (n % 2 != 1) throw std::domain_error("odd_n_wholeline_numeric: n must be odd");
  int P = n + 1 - k, Q = k;
  auto g = [&](double u) -> numeric::cdouble {
    std::complex<double> a(1.0 + u, eta * u), b(1.0 - u, eta * u);
    return std::pow(u, n - 1) / (std::pow(a, P) * std::pow(b, Q));
  };
  // map (-inf, inf) through u = tan(t)
  auto h = [&](double t) -> numeric::cdouble {
    double c = std::cos(t);
    double u = std::tan(t);
    return g(u) / (c * c);
  };
  return numeric::integrate(h, -M_PI / 2 + 1e-12, M_PI / 2 - 1e-12, 1e-12).real();
}

// ------------------------------------------------------------------
// Regularization-profile independence of the log coefficient: the
// coefficient of log(Lambda) in int_m^inf d|p| |p|^{-1} f(|p|/Lambda)
// equals f(0) = 1 for every admissible profile.

struct LogCoeffReport {
  double slope_step = 0;
  double slope_gauss = 0;
  double slope_gauss_rescaled = 0;
  double intercept_gauss = 0;
  double intercept_gauss_rescaled = 0;
  double max_fit_residual = 0;
  bool pass(double tol = 1e-4) const {
    return std::abs(slope_step - 1.0) < tol && std::abs(slope_gauss - 1.0) < tol &&
           std::abs(slope_gauss_rescaled - 1.0) < tol;
  }
};

inline LogCoeffReport log_coeff_f_independence(double m = 1.0) {
  auto radial = [&](const std::function<double(double)>& f, double lambda) {
    auto g = [&](double p) -> numeric::cdouble { return f(p / lambda) / p; };
    // profiles vanish fast beyond t ~ 8
    return numeric::integrate(g, m, 9.0 * lambda, 1e-12).real();
  };
  auto step = [](double t) { return t <= 1.0 ? 1.0 : 0.0; };
  auto gauss = [](double t) { return std::exp(-t * t); };
  auto gauss2 = [](double t) { return std::exp(-t * t / 4.0); };

  std::vector<double> logs, y_step, y_gauss, y_gauss2;
  for (int i = 5; i <= 10; ++i) {
    double lambda = m * std::exp(static_cast<double>(i));
    logs.push_back(std::log(lambda));
    // step profile is exact: log(lambda/m)
    y_step.push_back(std::log(lambda / m));
    y_gauss.push_back(radial(gauss, lambda));
    y_gauss2.push_back(radial(gauss2, lambda));
  }
  std::vector<double> ones(logs.size(), 1.0);
  LogCoeffReport r;
  auto fit = [&](const std::vector<double>& y, double& slope, double* icept) {
    auto c = numeric::least_squares({logs, ones}, y);
    slope = c[0];
    if (icept) *icept = c[1];
    for (size_t i = 0; i < y.size(); ++i) {
      double res = std::abs(c[0] * logs[i] + c[1] - y[i]);
      r.max_fit_residual = std::max(r.max_fit_residual, res);
    }
  };
  fit(y_step, r.slope_step, nullptr);
  fit(y_gauss, r.slope_gauss, &r.intercept_gauss);
  fit(y_gauss2, r.slope_gauss_rescaled, &r.intercept_gauss_rescaled);
  return r;
}

}  // namespace spintrace
