#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "exchboot/bounds.hpp"
#include "exchboot/function_classes.hpp"
#include "exchboot/resampling.hpp"
#include "exchboot/weights.hpp"

namespace exchboot {

struct ConfidenceRegion {
  std::vector<double> center;
  double radius_upper = 0.0;
  double radius_lower = 0.0;
  double p = 2.0;
  double alpha = 0.05;
  // Diagnostics
  double R_hat = 0.0;
  double R_hat_se = 0.0;
  double sigma_hat_lp = 0.0;
  double M = 0.0;
  double x = 0.0;
  std::size_t B = 0;
  std::uint64_t seed = 0;
  bool symmetric = false;
  double theta_up = 0.0;
  double theta_lo = 0.0;
};

struct ConfRegionOptions {
  bool symmetric = false;  // data symmetric about its mean
  unsigned threads = 0;
};

ConfidenceRegion mean_confidence_region(const Sample& X, double p, const WeightScheme& scheme,
                                        std::size_t B, double alpha, double M, std::uint64_t seed,
                                        const ConfRegionOptions& options = {});

enum class KernelKind { gaussian, laplace };

struct KsStatistic {};
struct Wasserstein1Statistic {};
struct MmdStatistic {
  KernelKind kernel = KernelKind::gaussian;
  double bandwidth = 1.0;
};
// Finite class given by a function table over the pooled sample.
struct FiniteStatistic {
  Eigen::MatrixXd values;
  bool symmetrized = true;
};
using StatisticKind = std::variant<KsStatistic, Wasserstein1Statistic, MmdStatistic, FiniteStatistic>;

struct TwoSampleSpec {
  StatisticKind statistic = KsStatistic{};
  std::size_t B = 999;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  bool strict = false;
  unsigned threads = 0;
};

std::string statistic_name(const StatisticKind& kind);
// Builds the function class over the pooled sample z = (x, y).
FunctionClass two_sample_class(const StatisticKind& kind, const Sample& z);

TestOutcome run_two_sample(const Sample& x, const Sample& y, const TwoSampleSpec& spec);

// Gram matrices: gaussian exp(-|u-v|^2 / (2 h^2)), laplace exp(-|u-v| / h).
Eigen::MatrixXd kernel_gram(const Sample& z, KernelKind kind, double bandwidth);
// Median of pairwise Euclidean distances (opt-in bandwidth choice).
double median_heuristic_bandwidth(const Sample& z);

struct PowerInputs {
  double kappa = 1.0;  // kernel bound for the MMD threshold
};
// Minimum detectable distance for KS or MMD at power 1 - 3 delta.
BoundReport power_report(const StatisticKind& kind, std::size_t n, std::size_t m, double alpha,
                         double delta, std::size_t B, const PowerInputs& extra = {});

}  // namespace exchboot
