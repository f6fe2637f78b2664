#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace spintrace {
namespace numeric {

using cdouble = std::complex<double>;

// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

// Gauss-Chebyshev (second kind): integrates f(v) sqrt(1-v^2) on [-1,1].
inline void gauss_chebyshev2(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 1; i <= n; ++i) {
    double t = i * M_PI / (n + 1.0);
    x[i - 1] = std::cos(t);
    w[i - 1] = M_PI / (n + 1.0) * std::sin(t) * std::sin(t);
  }
}

// Deterministic product-Gauss grid on the unit 3-sphere, weights normalized
// to sum to 1 (so that the grid computes the normalized angular average).
// Exact for polynomial integrands of degree < ~2*order.
struct SphereGrid {
  std::vector<std::array<double, 4>> xi;
  std::vector<double> w;

  explicit SphereGrid(int order = 8) {
    int n_chi = order, n_theta = order, n_phi = 2 * order + 2;
    std::vector<double> vx, vw, ux, uw;
    gauss_chebyshev2(n_chi, vx, vw);
    gauss_legendre(n_theta, ux, uw);
    double total = 0.0;
    for (int a = 0; a < n_chi; ++a) {
      double cchi = vx[a], schi = std::sqrt(1.0 - cchi * cchi);
      for (int b = 0; b < n_theta; ++b) {
        double cth = ux[b], sth = std::sqrt(1.0 - cth * cth);
        for (int c = 0; c < n_phi; ++c) {
          double phi = 2.0 * M_PI * c / n_phi;
          double weight = vw[a] * uw[b] * (2.0 * M_PI / n_phi);
          xi.push_back({schi * sth * std::cos(phi), schi * sth * std::sin(phi),
                        schi * cth, cchi});
          w.push_back(weight);
          total += weight;
        }
      }
    }
    for (auto& ww : w) ww /= total;
  }

  // <xi_{c1} ... xi_{ck}> by quadrature, components in 1..4
  double moment(const std::vector<int>& comps) const {
    double s = 0.0;
    for (size_t p = 0; p < xi.size(); ++p) {
      double v = w[p];
      for (int c : comps) v *= xi[p][c - 1];
      s += v;
    }
    return s;
  }
};

// Adaptive Simpson on [a,b] for complex integrands.  Stops on the tolerance,
// the depth cap, or when the local magnitude reaches the double-precision
// noise floor (near-pole cancellations cannot be resolved further).
namespace detail {
inline cdouble simpson_rec(const std::function<cdouble(double)>& f, double a,
                           double b, cdouble fa, cdouble fm, cdouble fb,
                           cdouble whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  cdouble flm = f(lm), frm = f(rm);
  cdouble left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  cdouble right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  cdouble delta = left + right - whole;
  double scale = std::abs(left) + std::abs(right);
  double noise = scale * 1e-14;
  if (depth <= 0 || std::abs(delta) <= std::max(15.0 * tol, noise))
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}
}  // namespace detail

inline cdouble integrate(const std::function<cdouble(double)>& f, double a,
                         double b, double tol = 1e-10, int depth = 30) {
  cdouble fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  cdouble whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// integral over [0, inf) via u = t/(1-t)
inline cdouble integrate_halfline(const std::function<cdouble(double)>& f,
                                  double tol = 1e-10, int depth = 34) {
  auto g = [&](double t) -> cdouble {
    if (t >= 1.0) return 0.0;
    double u = t / (1.0 - t);
    double jac = 1.0 / ((1.0 - t) * (1.0 - t));
    return f(u) * jac;
  };
  return integrate(g, 0.0, 1.0 - 1e-14, tol, depth);
}

// Neville extrapolation of samples (h_i, y_i) to h = 0.
inline double extrapolate_to_zero(std::vector<double> h, std::vector<double> y) {
  size_t n = h.size();
  if (n == 0 || y.size() != n) throw std::domain_error("extrapolate: bad input");
  for (size_t level = 1; level < n; ++level)
    for (size_t i = 0; i + level < n; ++i)
      y[i] = (h[i + level] * y[i] - h[i] * y[i + 1]) / (h[i + level] - h[i]);
  return y[0];
}

// Least-squares fit y ~ sum_j c_j basis_j(x); returns coefficients.
inline std::vector<double> least_squares(
    const std::vector<std::vector<double>>& basis_cols,
    const std::vector<double>& y) {
  size_t k = basis_cols.size(), n = y.size();
  std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (size_t t = 0; t < n; ++t) s += basis_cols[i][t] * basis_cols[j][t];
      a[i][j] = s;
    }
    double s = 0.0;
    for (size_t t = 0; t < n; ++t) s += basis_cols[i][t] * y[t];
    a[i][k] = s;
  }
  // Gaussian elimination with partial pivoting
  for (size_t c = 0; c < k; ++c) {
    size_t piv = c;
    for (size_t r = c + 1; r < k; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    if (std::abs(a[c][c]) < 1e-300) throw std::domain_error("least_squares: singular");
    for (size_t r = 0; r < k; ++r) {
      if (r == c) continue;
      double f = a[r][c] / a[c][c];
      for (size_t j = c; j <= k; ++j) a[r][j] -= f * a[c][j];
    }
  }
  std::vector<double> out(k);
  for (size_t i = 0; i < k; ++i) out[i] = a[i][k] / a[i][i];
  return out;
}

}  // namespace numeric
}  // namespace spintrace
