#include "exchboot/perm_walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>

namespace exchboot {

bool is_permutation(std::span<const std::size_t> p) {
  std::vector<char> seen(p.size(), 0);
  for (std::size_t v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}

Permutation compose(const Permutation& sigma, const Permutation& tau) {
  if (sigma.size() != tau.size()) throw std::invalid_argument("permutation sizes differ");
  Permutation out(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) out[i] = sigma[tau[i]];
  return out;
}

Permutation inverse(const Permutation& sigma) {
  Permutation out(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) out[sigma[i]] = i;
  return out;
}

std::size_t factorial(std::size_t n) {
  std::size_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= k;
  return f;
}

std::size_t permutation_rank(const Permutation& p) {
  const std::size_t n = p.size();
  std::size_t rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t smaller = 0;
    for (std::size_t j = i + 1; j < n; ++j) smaller += p[j] < p[i] ? 1 : 0;
    rank = rank * (n - i) + smaller;
  }
  return rank;
}

Permutation permutation_unrank(std::size_t rank, std::size_t n) {
  std::vector<std::size_t> digits(n);
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t base = n - i;
    digits[i] = rank % base;
    rank /= base;
  }
  std::vector<std::size_t> pool = identity_permutation(n);
  Permutation p(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = pool[digits[i]];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digits[i]));
  }
  return p;
}

Permutation uniform_permutation(std::size_t n, Philox4x32& rng) {
  if (n == 0) throw std::invalid_argument("permutation size must be positive");
  Permutation p = identity_permutation(n);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[bounded(rng, i)]);
  return p;
}

Permutation kernel_step(const LazyTranspositionKernel& kernel, const Permutation& pi, Philox4x32& rng) {
  if (pi.size() != kernel.n)
    throw std::invalid_argument("permutation size " + std::to_string(pi.size()) +
                                " does not match kernel size " + std::to_string(kernel.n));
  if (kernel.n < 2) throw std::invalid_argument("kernel needs n >= 2");
  if (!(kernel.alpha0 >= 0.0 && kernel.alpha0 <= 1.0))
    throw std::invalid_argument("holding probability must lie in [0, 1]");
  if (uniform01(rng) < kernel.alpha0) return pi;
  const std::size_t n = kernel.n;
  std::size_t r = bounded(rng, n * (n - 1) / 2);
  std::size_t i = 0;
  while (r >= n - 1 - i) {
    r -= n - 1 - i;
    ++i;
  }
  const std::size_t j = i + 1 + r;
  Permutation out = pi;
  std::swap(out[i], out[j]);
  return out;
}

double v_plus_permutation(const PermutationFunction& g, const Permutation& sigma) {
  const std::size_t n = sigma.size();
  const double base = g(sigma);
  Permutation nb = sigma;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::swap(nb[i], nb[j]);
      const double d = std::max(0.0, base - g(nb));
      total += 2.0 * d * d;  // ordered pairs (i, j) and (j, i)
      std::swap(nb[i], nb[j]);
    }
  }
  return total / static_cast<double>(n * n);
}

double grad_plus_sq(const PermutationFunction& g, const Permutation& sigma, std::size_t k) {
  const std::size_t n = sigma.size();
  if (k < 1 || k >= n) throw std::invalid_argument("k must satisfy 1 <= k < n");
  const double base = g(sigma);
  Permutation nb = sigma;
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = k; j < n; ++j) {
      std::swap(nb[i], nb[j]);
      const double d = std::max(0.0, base - g(nb));
      total += d * d;
      std::swap(nb[i], nb[j]);
    }
  }
  return total;
}

namespace {

struct BoundEvaluator {
  FunctionClass cls;
  Sample data;
  WeightVector w;
  std::unique_ptr<SupEvaluator> eval;
};

std::shared_ptr<BoundEvaluator> make_bound(const FunctionClass& cls, const Sample& data,
                                           const WeightVector& w) {
  auto b = std::make_shared<BoundEvaluator>(BoundEvaluator{cls, data, w, nullptr});
  b->eval = std::make_unique<SupEvaluator>(b->cls, b->data);
  if (w.size() != data.size()) throw std::invalid_argument("weight length does not match sample size");
  return b;
}

}  // namespace

PermutationFunction weight_permuting_function(const FunctionClass& cls, const Sample& data,
                                              const WeightVector& w) {
  auto b = make_bound(cls, data, w);
  return [b](const Permutation& sigma) {
    WeightVector xi(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) xi[i] = b->w[sigma[i]];
    return (*b->eval)(xi);
  };
}

PermutationFunction data_permuting_function(const FunctionClass& cls, const Sample& data,
                                            const WeightVector& w) {
  auto b = make_bound(cls, data, w);
  return [b](const Permutation& sigma) {
    // sum_i w_i t(x_{sigma(i)}) = sum_j w_{sigma^{-1}(j)} t(x_j)
    WeightVector xi(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) xi[sigma[i]] = b->w[i];
    return (*b->eval)(xi);
  };
}

VPlusRatios check_vplus_bounds(const FunctionClass& cls, const Sample& data, const WeightVector& w,
                               std::uint64_t seed, std::size_t samples) {
  check_weight_vector(w);
  const std::size_t n = w.size();
  const PermutationFunction g = weight_permuting_function(cls, data, w);
  const double v_plus = weak_variance(cls, data).value;
  const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
  const double range = *hi - *lo;
  double w_sq = 0.0;
  for (double v : w) w_sq += v * v;
  const double nn = static_cast<double>(n);
  const double bound1 = 2.0 / nn * range * range * v_plus;
  const double bound2 = 8.0 / nn * w_sq;
  auto ratio = [](double v, double bound) {
    if (bound > 0.0) return v / bound;
    return v > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };

  VPlusRatios out;
  auto visit = [&](const Permutation& sigma) {
    const double vp = v_plus_permutation(g, sigma);
    out.max_ratio1 = std::max(out.max_ratio1, ratio(vp, bound1));
    out.max_ratio2 = std::max(out.max_ratio2, ratio(vp, bound2));
    ++out.evaluated;
  };
  if (n <= 7) {
    Permutation sigma = identity_permutation(n);
    do visit(sigma);
    while (std::next_permutation(sigma.begin(), sigma.end()));
  } else {
    out.exhaustive = false;
    for (std::size_t s = 0; s < samples; ++s) {
      Philox4x32 rng = draw_rng(seed, s);
      visit(uniform_permutation(n, rng));
    }
  }
  return out;
}

std::vector<double> tv_mixing_curve(std::size_t n, double alpha0, std::size_t t_max) {
  if (n < 1 || n > 7) throw std::invalid_argument("exact mixing curve supports 1 <= n <= 7");
  if (!(alpha0 >= 0.0 && alpha0 <= 1.0)) throw std::invalid_argument("holding probability must lie in [0, 1]");
  const std::size_t states = factorial(n);
  const std::size_t pairs = n * (n - 1) / 2;
  std::vector<std::size_t> neighbours(states * pairs);
  for (std::size_t s = 0; s < states; ++s) {
    Permutation p = permutation_unrank(s, n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        std::swap(p[i], p[j]);
        neighbours[s * pairs + k++] = permutation_rank(p);
        std::swap(p[i], p[j]);
      }
  }
  const double uniform = 1.0 / static_cast<double>(states);
  auto tv = [&](const std::vector<double>& p) {
    double acc = 0.0;
    for (double v : p) acc += std::abs(v - uniform);
    return 0.5 * acc;
  };
  std::vector<double> p(states, 0.0), next(states);
  p[permutation_rank(identity_permutation(n))] = 1.0;
  std::vector<double> curve{tv(p)};
  const double move = pairs == 0 ? 0.0 : (1.0 - alpha0) / static_cast<double>(pairs);
  for (std::size_t t = 1; t <= t_max; ++t) {
    // The kernel is symmetric, so pulling from neighbours equals pushing to them.
    for (std::size_t s = 0; s < states; ++s) {
      double acc = pairs == 0 ? p[s] : alpha0 * p[s];
      for (std::size_t k = 0; k < pairs; ++k) acc += move * p[neighbours[s * pairs + k]];
      next[s] = acc;
    }
    p.swap(next);
    curve.push_back(tv(p));
  }
  return curve;
}

double g1_radius() { return 18.0 - 12.0 * std::sqrt(2.0); }

double g1_closed_form(double s) {
  if (!(s > 0.0 && s <= g1_radius()))
    throw std::invalid_argument("closed form needs 0 < s <= " + std::to_string(g1_radius()));
  const double disc = std::max(0.0, 1.0 - s + s * s / 36.0);
  return 3.0 / s * (1.0 - s / 2.0 - std::sqrt(disc));
}

MeanEstimate g1_monte_carlo(double s, std::size_t trials, std::uint64_t seed, unsigned threads) {
  if (!(s > 0.0 && s <= 1.01)) throw std::invalid_argument("simulation needs 0 < s <= 1.01");
  if (trials < 2) throw std::invalid_argument("need at least two trials");
  const double log_s = std::log(s);
  std::vector<double> values(trials);
  parallel_for(
      trials,
      [&](std::size_t k) {
        Philox4x32 rng = draw_rng(seed, k);
        long position = 0;
        std::uint64_t steps = 0;
        while (position < 1) {
          ++steps;
          const std::uint64_t u = bounded(rng, 6);
          if (u < 2)
            ++position;
          else if (u == 2)
            --position;
        }
        values[k] = std::exp(static_cast<double>(steps) * log_s);
      },
      threads);
  return mean_and_se(values);
}

}  // namespace exchboot
