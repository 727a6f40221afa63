#pragma once

// Reference implementations used only by tests. None of these call into the
// library's numeric code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

/// Textbook definitional Pearson r in long double.
inline double definitional_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double dx = x[i] - mx;
    const long double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

/// Solves (X^T X) b = X^T y by Gaussian elimination with partial pivoting.
/// `rows` are design rows *without* the intercept; an intercept is prepended.
inline std::vector<double> normal_equations(const std::vector<std::vector<double>>& rows, const std::vector<double>& y) {
  const std::size_t p = rows.front().size() + 1;
  std::vector<std::vector<long double>> a(p, std::vector<long double>(p + 1, 0.0L));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<long double> z(p);
    z[0] = 1.0L;
    for (std::size_t j = 1; j < p; ++j) z[j] = rows[r][j - 1];
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) a[i][j] += z[i] * z[j];
      a[i][p] += z[i] * y[r];
    }
  }
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < p; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    if (a[piv][col] == 0.0L) throw std::runtime_error("singular normal equations");
    std::swap(a[piv], a[col]);
    for (std::size_t r = col + 1; r < p; ++r) {
      const long double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= p; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<long double> b(p);
  for (std::size_t i = p; i-- > 0;) {
    long double s = a[i][p];
    for (std::size_t j = i + 1; j < p; ++j) s -= a[i][j] * b[j];
    b[i] = s / a[i][i];
  }
  return {b.begin(), b.end()};
}

/// Pearson r of in-sample least-squares estimates vs y (normal equations route).
inline double model_objective(const std::vector<std::vector<double>>& columns, const std::vector<double>& y) {
  const std::size_t m = y.size();
  std::vector<std::vector<double>> rows(m, std::vector<double>(columns.size()));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < columns.size(); ++j) rows[r][j] = columns[j][r];
  }
  const auto b = normal_equations(rows, y);
  std::vector<double> fitted(m);
  for (std::size_t r = 0; r < m; ++r) {
    long double v = b[0];
    for (std::size_t j = 0; j < columns.size(); ++j) v += b[j + 1] * rows[r][j];
    fitted[r] = static_cast<double>(v);
  }
  return definitional_pearson(fitted, y);
}

/// Adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 50) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps, int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid);
    const double rm = 0.5 * (mid + hi);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (d <= 0 || std::fabs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
    return rec(lo, mid, flo, flm, fmid, left, eps / 2, d - 1) + rec(mid, hi, fmid, frm, fhi, right, eps / 2, d - 1);
  };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fm, fb, whole, tol, depth);
}

/// Two-sided Student-t tail by integrating the density over [0, |t|].
inline double t_two_sided_by_quadrature(double t, int dof) {
  const double nu = dof;
  const double norm = std::exp(std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2)) / std::sqrt(nu * M_PI);
  auto density = [&](double u) { return norm * std::pow(1.0 + u * u / nu, -(nu + 1) / 2); };
  return 1.0 - 2.0 * adaptive_simpson(density, 0.0, std::fabs(t), 1e-13);
}

/// Two-sided permutation p-value for Pearson r.
inline double permutation_p(const std::vector<double>& x, std::vector<double> y, int draws, std::uint64_t seed) {
  const double observed = std::fabs(definitional_pearson(x, y));
  std::mt19937_64 rng(seed);
  int extreme = 0;
  for (int d = 0; d < draws; ++d) {
    std::shuffle(y.begin(), y.end(), rng);
    if (std::fabs(definitional_pearson(x, y)) >= observed - 1e-15) ++extreme;
  }
  return static_cast<double>(extreme) / draws;
}

}  // namespace oracle
