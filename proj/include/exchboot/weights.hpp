#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "exchboot/rng.hpp"

namespace exchboot {

// Resampling weights xi_1..xi_n; always centered (sum zero).
using WeightVector = std::vector<double>;

// Throws std::invalid_argument unless length >= 2, all entries finite and
// |sum| <= 1e-12 * n.
void check_weight_vector(std::span<const double> w);

struct EfronScheme {
  std::size_t n;
};
// Uniformly permuted copies of a fixed centered base vector.
struct PermutedFixedScheme {
  WeightVector base;
};
struct TwoSampleScheme {
  std::size_t n;
  std::size_t m;
};
struct BalancedSignsScheme {
  std::size_t n;
};

using WeightScheme =
    std::variant<EfronScheme, PermutedFixedScheme, TwoSampleScheme, BalancedSignsScheme>;

// Validates the scheme (sizes, parity, centering); throws std::invalid_argument.
void validate_scheme(const WeightScheme& scheme);

std::size_t scheme_size(const WeightScheme& scheme);
std::string scheme_name(const WeightScheme& scheme);

// Base vector of a permutation-type scheme: (1/n x n, -1/m x m) for two-sample,
// (+1 x n/2, -1 x n/2) for balanced signs, the stored base otherwise.
// Throws for Efron.
WeightVector base_vector(const WeightScheme& scheme);
bool is_permutation_scheme(const WeightScheme& scheme);

// Draws one weight vector into `out` (resized to n).
void sample_weights_into(const WeightScheme& scheme, Philox4x32& rng, WeightVector& out);
WeightVector sample_weights(const WeightScheme& scheme, Philox4x32& rng);

// In-place Fisher-Yates shuffle using the unbiased bounded draw.
void shuffle(std::span<double> values, Philox4x32& rng);

struct SchemeStats {
  double kappa = 0.0;     // E|xi_1|
  double sup_norm = 0.0;  // a.s. bound on max |xi_i|
  double min_w = 0.0;     // smallest attainable weight
  double max_w = 0.0;     // largest attainable weight
  double l2_norm = 0.0;   // ||w||_2 (root mean ||xi||_2^2 for Efron)
  double pos_mean = 0.0;  // E[(xi_1)_+]
};

SchemeStats scheme_stats(const WeightScheme& scheme);

}  // namespace exchboot
