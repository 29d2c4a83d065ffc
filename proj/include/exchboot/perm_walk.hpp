#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "exchboot/function_classes.hpp"
#include "exchboot/parallel.hpp"
#include "exchboot/rng.hpp"
#include "exchboot/weights.hpp"

namespace exchboot {

// sigma[i] is the image of i. Products act on the right: (sigma o tau)(i) =
// sigma[tau[i]], so composing with the transposition (i j) swaps entries i, j.
using Permutation = std::vector<std::size_t>;
using PermutationFunction = std::function<double(const Permutation&)>;

bool is_permutation(std::span<const std::size_t> p);
Permutation identity_permutation(std::size_t n);
Permutation compose(const Permutation& sigma, const Permutation& tau);
Permutation inverse(const Permutation& sigma);
// Lexicographic rank in [0, n!) and its inverse.
std::size_t permutation_rank(const Permutation& p);
Permutation permutation_unrank(std::size_t rank, std::size_t n);
std::size_t factorial(std::size_t n);

struct LazyTranspositionKernel {
  std::size_t n = 2;
  double alpha0 = 0.5;  // holding probability
};

Permutation uniform_permutation(std::size_t n, Philox4x32& rng);
Permutation kernel_step(const LazyTranspositionKernel& kernel, const Permutation& pi, Philox4x32& rng);

// (1/n^2) sum_{i,j} (g(sigma) - g(sigma o (i j)))_+^2.
double v_plus_permutation(const PermutationFunction& g, const Permutation& sigma);
// Sum over i < k <= j (0-indexed: i in [0,k), j in [k,n)) of the same squares.
double grad_plus_sq(const PermutationFunction& g, const Permutation& sigma, std::size_t k);

// sigma -> sup_t sum_i w[sigma[i]] t(x_i).
PermutationFunction weight_permuting_function(const FunctionClass& cls, const Sample& data,
                                              const WeightVector& w);
// sigma -> sup_t sum_i w[i] t(x_{sigma[i]}); (k, n)-symmetric when w is
// constant on the first k and on the last n - k coordinates.
PermutationFunction data_permuting_function(const FunctionClass& cls, const Sample& data,
                                            const WeightVector& w);

struct VPlusRatios {
  double max_ratio1 = 0.0;  // against (2/n) (b - a)^2 v_plus
  double max_ratio2 = 0.0;  // against (8/n) ||w||^2
  bool exhaustive = true;
  std::size_t evaluated = 0;
};
// Exhaustive over all permutations for n <= 7, otherwise `samples` random ones.
VPlusRatios check_vplus_bounds(const FunctionClass& cls, const Sample& data, const WeightVector& w,
                               std::uint64_t seed = 0, std::size_t samples = 2000);

// Total-variation distance to uniform after t = 0..t_max lazy steps from the identity.
std::vector<double> tv_mixing_curve(std::size_t n, double alpha0, std::size_t t_max);

// Generating function E[s^T] of the first passage to +1 of the walk with
// steps +1, -1, 0 taken with probabilities 1/3, 1/6, 1/2.
double g1_closed_form(double s);
double g1_radius();
MeanEstimate g1_monte_carlo(double s, std::size_t trials, std::uint64_t seed, unsigned threads = 0);

}  // namespace exchboot
