#pragma once
// Independent reference implementations used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double ecdf(const std::vector<double>& xs, double t) {
  std::size_t c = 0;
  for (double v : xs) c += v <= t ? 1 : 0;
  return double(c) / double(xs.size());
}

// Two-sided KS distance: max over pooled points of |F_x - F_y|.
inline double ks(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> pts = x;
  pts.insert(pts.end(), y.begin(), y.end());
  double d = 0.0;
  for (double t : pts) d = std::max(d, std::abs(ecdf(x, t) - ecdf(y, t)));
  return d;
}

// W1 between empirical measures as the integral of |F_x - F_y|.
inline double wasserstein1(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> pts = x;
  pts.insert(pts.end(), y.begin(), y.end());
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k)
    total += std::abs(ecdf(x, pts[k]) - ecdf(y, pts[k])) * (pts[k + 1] - pts[k]);
  return total;
}

// Biased MMD from the three double sums over a kernel callback.
template <class K>
double mmd_b(const std::vector<double>& x, const std::vector<double>& y, K k) {
  double xx = 0, yy = 0, xy = 0;
  for (double a : x)
    for (double b : x) xx += k(a, b);
  for (double a : y)
    for (double b : y) yy += k(a, b);
  for (double a : x)
    for (double b : y) xy += k(a, b);
  const double n = double(x.size()), m = double(y.size());
  return std::sqrt(std::max(0.0, xx / (n * n) + yy / (m * m) - 2.0 * xy / (n * m)));
}

// sup of sum_i xi_i f(x_i) over 1-Lipschitz f by enumerating the vertices
// f(x_(k+1)) - f(x_(k)) = +-gap_k of the feasible box (f(x_(1)) = 0 is free
// because the weights sum to zero).
inline double lipschitz_lp(const std::vector<double>& x, const std::vector<double>& xi) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  double best = -1e300;
  for (std::size_t mask = 0; mask < (std::size_t(1) << (n - 1)); ++mask) {
    std::vector<double> f(n);
    double level = 0.0;
    f[order[0]] = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
      const double gap = x[order[k]] - x[order[k - 1]];
      level += (mask >> (k - 1) & 1) ? gap : -gap;
      f[order[k]] = level;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += xi[i] * f[i];
    best = std::max(best, s);
  }
  return best;
}

// sup over 1-Lipschitz f of sum_i (f(x_i) - mean f)^2 by vertex enumeration.
inline double lipschitz_variance(const std::vector<double>& x) {
  std::vector<double> xs = x;
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  double best = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t(1) << (n - 1)); ++mask) {
    std::vector<double> f(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) f[k] = f[k - 1] + ((mask >> (k - 1) & 1) ? 1 : -1) * (xs[k] - xs[k - 1]);
    double mean = 0.0;
    for (double v : f) mean += v / double(n);
    double s = 0.0;
    for (double v : f) s += (v - mean) * (v - mean);
    best = std::max(best, s);
  }
  return best;
}

// First-passage generating function to +1 for steps +1 (1/3), -1 (1/6), 0 (1/2),
// by propagating the position distribution up to `horizon` steps.
inline double g1_dp(double s, std::size_t horizon = 10000) {
  // Positions -horizon..0 stored with offset; mass absorbed at +1 is collected.
  const std::size_t width = horizon + 2;
  std::vector<double> p(width, 0.0), q(width, 0.0);
  const std::size_t zero = horizon;
  p[zero] = 1.0;
  double total = 0.0, sp = 1.0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    sp *= s;
    std::fill(q.begin(), q.end(), 0.0);
    double hit = 0.0;
    for (std::size_t i = 0; i <= zero; ++i) {
      if (p[i] == 0.0) continue;
      if (i == zero) hit += p[i] / 3.0;
      else q[i + 1] += p[i] / 3.0;
      if (i > 0) q[i - 1] += p[i] / 6.0;
      q[i] += p[i] / 2.0;
    }
    total += sp * hit;
    std::swap(p, q);
    if (sp < 1e-300) break;
  }
  return total;
}

}  // namespace oracle
