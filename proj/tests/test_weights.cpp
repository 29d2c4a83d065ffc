#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "exchboot/weights.hpp"

using namespace exchboot;

namespace {

double binom_pmf(std::size_t n, std::size_t k, double p) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
                  (n - k) * std::log1p(-p));
}

// Two-sample KS distance between two scalar samples.
double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<double> pts = a;
  pts.insert(pts.end(), b.begin(), b.end());
  double d = 0.0;
  for (double t : pts) {
    const double fa = double(std::upper_bound(a.begin(), a.end(), t) - a.begin()) / a.size();
    const double fb = double(std::upper_bound(b.begin(), b.end(), t) - b.begin()) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

}  // namespace

TEST_CASE("weight vectors sum to zero for every scheme and seed") {
  const std::vector<WeightScheme> schemes{EfronScheme{3}, EfronScheme{50}, TwoSampleScheme{2, 2}, TwoSampleScheme{3, 7},
                                          BalancedSignsScheme{4}, PermutedFixedScheme{{0.5, -0.25, -0.25}}};
  for (const auto& s : schemes) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Philox4x32 rng = draw_rng(seed, 0);
      const WeightVector w = sample_weights(s, rng);
      REQUIRE(w.size() == scheme_size(s));
      CHECK(std::abs(std::accumulate(w.begin(), w.end(), 0.0)) <= 1e-12 * w.size());
    }
  }
}

TEST_CASE("permutation schemes return permutations of the base vector") {
  Philox4x32 rng = draw_rng(9, 0);
  WeightVector w = sample_weights(TwoSampleScheme{2, 2}, rng);
  std::sort(w.begin(), w.end());
  CHECK(w == WeightVector{-0.5, -0.5, 0.5, 0.5});
  w = sample_weights(BalancedSignsScheme{4}, rng);
  std::sort(w.begin(), w.end());
  CHECK(w == WeightVector{-1, -1, 1, 1});
  WeightVector e = sample_weights(EfronScheme{3}, rng);
  for (double v : e) CHECK((v == -1 || v == 0 || v == 1 || v == 2));
}

TEST_CASE("invalid schemes are rejected") {
  Philox4x32 rng = draw_rng(0, 0);
  CHECK_THROWS(sample_weights(BalancedSignsScheme{5}, rng));
  CHECK_THROWS(validate_scheme(TwoSampleScheme{0, 3}));
  CHECK_THROWS(validate_scheme(PermutedFixedScheme{{1.0, 1.0}}));
  CHECK_THROWS(validate_scheme(EfronScheme{1}));
  CHECK_THROWS(base_vector(EfronScheme{4}));
  CHECK_THROWS(check_weight_vector(std::vector<double>{1.0}));
}

TEST_CASE("scheme statistics") {
  CHECK(scheme_stats(TwoSampleScheme{3, 7}).kappa == doctest::Approx(0.2));
  CHECK(scheme_stats(EfronScheme{2}).kappa == doctest::Approx(0.5));
  const SchemeStats bs = scheme_stats(BalancedSignsScheme{10});
  CHECK(bs.kappa == 1.0);
  CHECK(bs.sup_norm == 1.0);
  CHECK(bs.l2_norm == doctest::Approx(std::sqrt(10.0)));
  CHECK(bs.pos_mean == doctest::Approx(0.5));
  const SchemeStats ts = scheme_stats(TwoSampleScheme{5, 5});
  CHECK(ts.pos_mean == doctest::Approx(0.1));
  CHECK(ts.sup_norm == doctest::Approx(0.2));
  const SchemeStats pf = scheme_stats(PermutedFixedScheme{{3.0, -1.0, -2.0}});
  CHECK(pf.kappa == doctest::Approx(2.0));
  CHECK(pf.pos_mean == doctest::Approx(1.0));
  CHECK(pf.min_w == -2.0);
  CHECK(pf.max_w == 3.0);
  const SchemeStats ef = scheme_stats(EfronScheme{6});
  CHECK(ef.sup_norm == 5.0);
  CHECK(ef.min_w == -1.0);
}

TEST_CASE("Efron kappa equals the binomial expectation") {
  for (std::size_t n = 2; n <= 12; ++n) {
    double brute = 0.0, pos = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      const double p = binom_pmf(n, k, 1.0 / n);
      brute += std::abs(double(k) - 1.0) * p;
      pos += std::max(0.0, double(k) - 1.0) * p;
    }
    const SchemeStats st = scheme_stats(EfronScheme{n});
    CHECK(std::abs(st.kappa - brute) < 1e-10);
    CHECK(std::abs(st.pos_mean - pos) < 1e-10);
  }
}

TEST_CASE("Efron sampling matches the multinomial marginal") {
  const std::size_t n = 5;
  const int draws = 50000;
  std::vector<int> counts(n + 1, 0);
  for (int b = 0; b < draws; ++b) {
    Philox4x32 rng = draw_rng(77, b);
    const WeightVector w = sample_weights(EfronScheme{n}, rng);
    ++counts[static_cast<std::size_t>(w[2] + 1.0)];
  }
  for (std::size_t k = 0; k <= n; ++k) {
    const double p = binom_pmf(n, k, 1.0 / n);
    const double se = std::sqrt(p * (1 - p) / draws);
    CHECK(std::abs(counts[k] / double(draws) - p) <= 4 * se + 1e-12);
  }
}

TEST_CASE("coordinates of permuted schemes share one marginal") {
  const int draws = 100000;
  std::vector<double> first(draws), last(draws);
  const WeightScheme s = PermutedFixedScheme{{2.0, 1.0, -0.5, -1.0, -1.5}};
  for (int b = 0; b < draws; ++b) {
    Philox4x32 rng = draw_rng(3, b);
    const WeightVector w = sample_weights(s, rng);
    first[b] = w[0];
    last[b] = w[4];
  }
  // 0.999 critical value of the two-sample KS distance: 1.949 sqrt(2/draws).
  CHECK(ks_distance(first, last) < 1.949 * std::sqrt(2.0 / draws));
}
