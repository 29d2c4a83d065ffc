#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "exchboot/function_classes.hpp"
#include "exchboot/parallel.hpp"
#include "exchboot/weights.hpp"

namespace exchboot {

struct ResampleRun {
  std::vector<double> stats;  // stats[0] is the observed statistic, then B resamples
  std::uint64_t master_seed = 0;
  WeightScheme scheme;
};

struct TestOutcome {
  double statistic = 0.0;
  double quantile = 0.0;
  bool reject = false;
  double alpha = 0.0;
  std::size_t B = 0;
  std::size_t rank = 0;         // 0-indexed order statistic used for the quantile
  bool rank_exceeds_B = false;  // ceil((B+1)(1-alpha)) > B: the test cannot reject
  bool strict = false;
};

struct TestOptions {
  bool strict = false;   // reject on statistic > quantile instead of >=
  unsigned threads = 0;  // 0: EXCHBOOT_THREADS / hardware
};

double g_statistic(const FunctionClass& cls, const Sample& data, std::span<const double> xi);

// Statistics g(data, xi_b) for b = first .. first+count-1, draw b using
// draw_rng(master_seed, b). Output slot k holds draw first+k.
std::vector<double> resample_statistics(const SupEvaluator& eval, const WeightScheme& scheme,
                                        std::size_t first, std::size_t count,
                                        std::uint64_t master_seed, unsigned threads = 0);

MeanEstimate gbar_mc(const FunctionClass& cls, const Sample& data, const WeightScheme& scheme,
                     std::size_t B, std::uint64_t master_seed, unsigned threads = 0);

// 0-indexed rank ceil(count * (1 - alpha)), not clamped.
std::size_t quantile_rank(std::size_t count, double alpha);

// Order statistic at rank ceil((B+1)(1-alpha)) of run.stats, clamped to B.
double bootstrap_quantile(const ResampleRun& run, double alpha);
double bootstrap_quantile(std::span<const double> stats, double alpha);

// Smallest sample value whose empirical CDF reaches 1 - alpha.
double least_quantile(std::span<const double> values, double alpha);

// Permutation test over Z = (x, y) with weights (1/n, ..., -1/m, ...).
// The class must be indexed by the concatenated sample.
TestOutcome permutation_two_sample_test(const Sample& x, const Sample& y, const FunctionClass& cls,
                                        std::size_t B, double alpha, std::uint64_t master_seed,
                                        const TestOptions& options = {});

// Run over all (n+m)! position permutations of the two-sample weights in
// lexicographic order; stats[0] is the identity.
ResampleRun enumerated_permutation_run(const Sample& x, const Sample& y, const FunctionClass& cls);

// Exact test from the full permutation distribution (n + m <= 8).
TestOutcome exhaustive_permutation_test(const Sample& x, const Sample& y, const FunctionClass& cls,
                                        double alpha, bool strict = false);

// Decision from the observed statistic and B+1 values (observed included).
TestOutcome decide(std::span<const double> stats, double alpha, bool strict);

}  // namespace exchboot
