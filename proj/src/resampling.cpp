#include "exchboot/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace exchboot {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1], got " + std::to_string(alpha));
}

double order_statistic(std::span<const double> values, std::size_t rank) {
  std::vector<double> copy(values.begin(), values.end());
  std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(rank), copy.end());
  return copy[rank];
}

// Heap's algorithm; emits the starting arrangement first.
template <class F>
void heap_permutations(std::vector<double>& a, F&& emit) {
  const std::size_t n = a.size();
  std::vector<std::size_t> c(n, 0);
  emit(a);
  std::size_t i = 1;
  while (i < n) {
    if (c[i] < i) {
      if (i % 2 == 0)
        std::swap(a[0], a[i]);
      else
        std::swap(a[c[i]], a[i]);
      emit(a);
      ++c[i];
      i = 1;
    } else {
      c[i] = 0;
      ++i;
    }
  }
}

}  // namespace

double g_statistic(const FunctionClass& cls, const Sample& data, std::span<const double> xi) {
  return sup_weighted_sum(cls, data, xi);
}

std::vector<double> resample_statistics(const SupEvaluator& eval, const WeightScheme& scheme,
                                        std::size_t first, std::size_t count,
                                        std::uint64_t master_seed, unsigned threads) {
  validate_scheme(scheme);
  if (scheme_size(scheme) != eval.size())
    throw std::invalid_argument("weight scheme size " + std::to_string(scheme_size(scheme)) +
                                " does not match sample size " + std::to_string(eval.size()));
  std::vector<double> out(count);
  parallel_for(
      count,
      [&](std::size_t k) {
        Philox4x32 rng = draw_rng(master_seed, first + k);
        WeightVector xi;
        sample_weights_into(scheme, rng, xi);
        out[k] = eval(xi);
      },
      threads);
  return out;
}

MeanEstimate gbar_mc(const FunctionClass& cls, const Sample& data, const WeightScheme& scheme,
                     std::size_t B, std::uint64_t master_seed, unsigned threads) {
  if (B < 1) throw std::invalid_argument("B must be at least 1");
  const SupEvaluator eval(cls, data);
  const std::vector<double> stats = resample_statistics(eval, scheme, 1, B, master_seed, threads);
  return mean_and_se(stats);
}

std::size_t quantile_rank(std::size_t count, double alpha) {
  const double target = static_cast<double>(count) * (1.0 - alpha);
  // Products such as 20 * 0.95 may land a hair above an integer.
  const double nearest = std::round(target);
  const double r = std::abs(target - nearest) <= 1e-9 * std::max(1.0, target) ? nearest
                                                                               : std::ceil(target);
  return r <= 0.0 ? 0 : static_cast<std::size_t>(r);
}

double bootstrap_quantile(std::span<const double> stats, double alpha) {
  if (stats.empty()) throw std::invalid_argument("bootstrap quantile of an empty run");
  check_alpha(alpha);
  const std::size_t B = stats.size() - 1;
  return order_statistic(stats, std::min(quantile_rank(stats.size(), alpha), B));
}

double bootstrap_quantile(const ResampleRun& run, double alpha) {
  return bootstrap_quantile(run.stats, alpha);
}

double least_quantile(std::span<const double> values, double alpha) {
  if (values.empty()) throw std::invalid_argument("least quantile of an empty sample");
  check_alpha(alpha);
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  // Need at least ceil(n (1 - alpha)) values at or below the answer.
  const std::size_t need = std::max<std::size_t>(1, quantile_rank(n, alpha));
  return sorted[need - 1];
}

TestOutcome decide(std::span<const double> stats, double alpha, bool strict) {
  if (stats.empty()) throw std::invalid_argument("no statistics to decide on");
  check_alpha(alpha);
  TestOutcome out;
  out.statistic = stats[0];
  out.alpha = alpha;
  out.B = stats.size() - 1;
  out.strict = strict;
  const std::size_t m = quantile_rank(stats.size(), alpha);
  out.rank_exceeds_B = m > out.B;
  out.rank = std::min(m, out.B);
  out.quantile = order_statistic(stats, out.rank);
  if (out.rank_exceeds_B) {
    // No order statistic sits at that rank: alpha * (B + 1) < 1 leaves no
    // room for a rejection region of probability <= alpha.
    out.reject = false;
  } else {
    out.reject = strict ? out.statistic > out.quantile : out.statistic >= out.quantile;
  }
  return out;
}

TestOutcome permutation_two_sample_test(const Sample& x, const Sample& y, const FunctionClass& cls,
                                        std::size_t B, double alpha, std::uint64_t master_seed,
                                        const TestOptions& options) {
  if (B < 1) throw std::invalid_argument("B must be at least 1");
  const Sample z = concat_samples(x, y);
  const SupEvaluator eval(cls, z);
  const WeightScheme scheme = TwoSampleScheme{x.size(), y.size()};
  const WeightVector w = base_vector(scheme);
  std::vector<double> stats(B + 1);
  stats[0] = eval(w);
  const std::vector<double> draws = resample_statistics(eval, scheme, 1, B, master_seed, options.threads);
  std::copy(draws.begin(), draws.end(), stats.begin() + 1);
  return decide(stats, alpha, options.strict);
}

ResampleRun enumerated_permutation_run(const Sample& x, const Sample& y, const FunctionClass& cls) {
  const Sample z = concat_samples(x, y);
  const std::size_t n = z.size();
  if (n > 8) throw std::invalid_argument("enumeration is limited to n + m <= 8");
  const SupEvaluator eval(cls, z);
  const WeightScheme scheme = TwoSampleScheme{x.size(), y.size()};
  const WeightVector w = base_vector(scheme);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  ResampleRun run;
  run.scheme = scheme;
  WeightVector xi(n);
  do {
    for (std::size_t i = 0; i < n; ++i) xi[i] = w[perm[i]];
    run.stats.push_back(eval(xi));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return run;
}

TestOutcome exhaustive_permutation_test(const Sample& x, const Sample& y, const FunctionClass& cls,
                                        double alpha, bool strict) {
  const Sample z = concat_samples(x, y);
  if (z.size() > 8)
    throw std::invalid_argument("exhaustive test needs n + m <= 8, got " + std::to_string(z.size()));
  const SupEvaluator eval(cls, z);
  WeightVector w = base_vector(TwoSampleScheme{x.size(), y.size()});
  std::vector<double> values;
  heap_permutations(w, [&](const std::vector<double>& xi) { values.push_back(eval(xi)); });
  return decide(values, alpha, strict);
}

}  // namespace exchboot
