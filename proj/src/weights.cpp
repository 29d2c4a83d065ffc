#include "exchboot/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace exchboot {

void check_weight_vector(std::span<const double> w) {
  if (w.size() < 2) throw std::invalid_argument("weight vector needs length >= 2");
  double sum = 0.0;
  for (double v : w) {
    if (!std::isfinite(v)) throw std::invalid_argument("weight vector has a non-finite entry");
    sum += v;
  }
  if (std::abs(sum) > 1e-12 * static_cast<double>(w.size())) {
    throw std::invalid_argument("weight vector does not sum to zero (sum = " +
                                std::to_string(sum) + ")");
  }
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

void validate_scheme(const WeightScheme& scheme) {
  std::visit(overloaded{
                 [](const EfronScheme& s) {
                   if (s.n < 2) throw std::invalid_argument("Efron scheme needs n >= 2");
                 },
                 [](const PermutedFixedScheme& s) { check_weight_vector(s.base); },
                 [](const TwoSampleScheme& s) {
                   if (s.n < 1 || s.m < 1)
                     throw std::invalid_argument("two-sample scheme needs n, m >= 1");
                 },
                 [](const BalancedSignsScheme& s) {
                   if (s.n < 2 || s.n % 2 != 0)
                     throw std::invalid_argument("balanced-signs scheme needs an even n >= 2, got " +
                                                 std::to_string(s.n));
                 },
             },
             scheme);
}

std::size_t scheme_size(const WeightScheme& scheme) {
  return std::visit(overloaded{
                        [](const EfronScheme& s) { return s.n; },
                        [](const PermutedFixedScheme& s) { return s.base.size(); },
                        [](const TwoSampleScheme& s) { return s.n + s.m; },
                        [](const BalancedSignsScheme& s) { return s.n; },
                    },
                    scheme);
}

std::string scheme_name(const WeightScheme& scheme) {
  return std::visit(overloaded{
                        [](const EfronScheme&) { return std::string("efron"); },
                        [](const PermutedFixedScheme&) { return std::string("fixed"); },
                        [](const TwoSampleScheme&) { return std::string("two_sample"); },
                        [](const BalancedSignsScheme&) { return std::string("balanced_signs"); },
                    },
                    scheme);
}

bool is_permutation_scheme(const WeightScheme& scheme) {
  return !std::holds_alternative<EfronScheme>(scheme);
}

WeightVector base_vector(const WeightScheme& scheme) {
  validate_scheme(scheme);
  return std::visit(
      overloaded{
          [](const EfronScheme&) -> WeightVector {
            throw std::invalid_argument("Efron weights have no fixed base vector");
          },
          [](const PermutedFixedScheme& s) { return s.base; },
          [](const TwoSampleScheme& s) {
            WeightVector w(s.n + s.m);
            std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(s.n),
                      1.0 / static_cast<double>(s.n));
            std::fill(w.begin() + static_cast<std::ptrdiff_t>(s.n), w.end(),
                      -1.0 / static_cast<double>(s.m));
            return w;
          },
          [](const BalancedSignsScheme& s) {
            WeightVector w(s.n, 1.0);
            std::fill(w.begin() + static_cast<std::ptrdiff_t>(s.n / 2), w.end(), -1.0);
            return w;
          },
      },
      scheme);
}

void shuffle(std::span<double> values, Philox4x32& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = bounded(rng, i);
    std::swap(values[i - 1], values[j]);
  }
}

void sample_weights_into(const WeightScheme& scheme, Philox4x32& rng, WeightVector& out) {
  if (const auto* efron = std::get_if<EfronScheme>(&scheme)) {
    if (efron->n < 2) throw std::invalid_argument("Efron scheme needs n >= 2");
    out.assign(efron->n, -1.0);
    for (std::size_t k = 0; k < efron->n; ++k) out[bounded(rng, efron->n)] += 1.0;
    return;
  }
  out = base_vector(scheme);
  shuffle(out, rng);
}

WeightVector sample_weights(const WeightScheme& scheme, Philox4x32& rng) {
  WeightVector out;
  sample_weights_into(scheme, rng, out);
  return out;
}

SchemeStats scheme_stats(const WeightScheme& scheme) {
  validate_scheme(scheme);
  SchemeStats st;
  if (const auto* efron = std::get_if<EfronScheme>(&scheme)) {
    const double n = static_cast<double>(efron->n);
    // E|W - 1| = 2 P(W = 0) for W ~ Binomial(n, 1/n) with mean 1.
    st.kappa = 2.0 * std::pow(1.0 - 1.0 / n, n);
    st.sup_norm = n - 1.0;
    st.min_w = -1.0;
    st.max_w = n - 1.0;
    st.l2_norm = std::sqrt(n - 1.0);
    st.pos_mean = st.kappa / 2.0;
    return st;
  }
  const WeightVector w = base_vector(scheme);
  const double n = static_cast<double>(w.size());
  double abs_sum = 0.0, pos_sum = 0.0, sq_sum = 0.0;
  st.min_w = w.front();
  st.max_w = w.front();
  for (double v : w) {
    abs_sum += std::abs(v);
    pos_sum += std::max(v, 0.0);
    sq_sum += v * v;
    st.min_w = std::min(st.min_w, v);
    st.max_w = std::max(st.max_w, v);
    st.sup_norm = std::max(st.sup_norm, std::abs(v));
  }
  st.kappa = abs_sum / n;
  st.pos_mean = pos_sum / n;
  st.l2_norm = std::sqrt(sq_sum);
  return st;
}

}  // namespace exchboot
