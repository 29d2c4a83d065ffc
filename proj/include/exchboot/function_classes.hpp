#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace exchboot {

// Observations stored row-major: point i occupies values[i*dim .. i*dim+dim).
struct Sample {
  std::vector<double> values;
  std::size_t dim = 1;
  // When set, points [0, split) are the first sample and [split, n) the second.
  std::optional<std::size_t> group_split;

  std::size_t size() const { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(values).subspan(i * dim, dim);
  }
  double scalar(std::size_t i) const { return values[i]; }
};

// Checks dimension consistency, finiteness and the group split.
void validate_sample(const Sample& s);
Sample scalar_sample(std::vector<double> xs);
// Concatenates two samples of equal dimension and records the split.
Sample concat_samples(const Sample& x, const Sample& y);

// Rows are functions, columns are observations; entries in [-1, 1].
struct FiniteClass {
  Eigen::MatrixXd values;  // F x n
  bool symmetrized = false;
};
// Indicators of half-lines (-inf, s] with either sign; scalar data.
struct HalfLinesClass {};
// Linear functionals with dual norm <= 1 on (R^d, ||.||_p); p may be +inf.
struct DualBallClass {
  double p = 2.0;
};
// 1-Lipschitz functions on the real line; scalar data.
struct Lipschitz1DClass {};
// Unit ball of an RKHS, represented by its Gram matrix on the sample.
struct KernelBallClass {
  Eigen::MatrixXd gram;
  double kappa_bound = 0.0;  // max_i sqrt(K_ii)
};

using FunctionClass =
    std::variant<FiniteClass, HalfLinesClass, DualBallClass, Lipschitz1DClass, KernelBallClass>;

FiniteClass make_finite_class(Eigen::MatrixXd values, bool symmetrized);
// Validates symmetry / numerical PSD and fills kappa_bound.
KernelBallClass make_kernel_ball(Eigen::MatrixXd gram);

bool is_symmetric_class(const FunctionClass& cls);

// Reusable supremum evaluator: precomputes the sort order and spacings of the
// data once so repeated calls with different weights are cheap. Immutable
// after construction and safe to share between threads.
class SupEvaluator {
public:
  SupEvaluator(const FunctionClass& cls, const Sample& data);
  // Both arguments are referenced, not copied.
  SupEvaluator(FunctionClass&&, const Sample&) = delete;
  SupEvaluator(const FunctionClass&, Sample&&) = delete;

  std::size_t size() const { return n_; }
  double operator()(std::span<const double> xi) const;

private:
  const FunctionClass* cls_;
  const Sample* data_;
  std::size_t n_;
  std::vector<std::size_t> order_;  // indices sorted by value (scalar classes)
  std::vector<char> group_end_;     // 1 where order_[k] is the last of a tie group
  std::vector<double> gaps_;        // x_(k+1) - x_(k)
};

double sup_weighted_sum(const FunctionClass& cls, const Sample& data, std::span<const double> xi);

struct WeakVariance {
  double value = 0.0;
  bool exact = true;
};

// sup over the class of sum_i (t(x_i) - mean_t)^2.
WeakVariance weak_variance(const FunctionClass& cls, const Sample& data);

// max_f sum_i values(f, i) - n * means[f].
double empirical_process_sup(const FiniteClass& cls, std::span<const double> means);

}  // namespace exchboot
