#include "exchboot/applications.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace exchboot {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double squared_distance(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double d = u[j] - v[j];
    s += d * d;
  }
  return s;
}

}  // namespace

ConfidenceRegion mean_confidence_region(const Sample& X, double p, const WeightScheme& scheme,
                                        std::size_t B, double alpha, double M, std::uint64_t seed,
                                        const ConfRegionOptions& options) {
  validate_sample(X);
  const std::size_t n = X.size(), d = X.dim;
  if (n < 2) throw std::invalid_argument("confidence region needs at least two observations");
  if (!(M > 0.0)) throw std::invalid_argument("M must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (scheme_size(scheme) != n)
    throw std::invalid_argument("weight scheme size " + std::to_string(scheme_size(scheme)) +
                                " does not match " + std::to_string(n) + " observations");

  ConfidenceRegion out;
  out.p = p;
  out.alpha = alpha;
  out.M = M;
  out.B = B;
  out.seed = seed;
  out.symmetric = options.symmetric;
  out.center.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out.center[j] += X.values[i * d + j];
  for (double& c : out.center) c /= static_cast<double>(n);

  std::vector<double> sd(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double r = X.values[i * d + j] - out.center[j];
      sd[j] += r * r;
    }
  for (double& s : sd) s = std::sqrt(s / static_cast<double>(n));
  out.sigma_hat_lp = lp_sigma_upper(sd, p);

  const FunctionClass cls = DualBallClass{p};
  const MeanEstimate g = gbar_mc(cls, X, scheme, B, seed, options.threads);
  out.R_hat = g.mean / static_cast<double>(n);
  out.R_hat_se = g.std_error / static_cast<double>(n);

  // Each side holds with probability at least 1 - 2 exp(-x) = 1 - alpha.
  out.x = std::log(2.0 / alpha);
  const ConfRegionBounds r = conf_region_bounds(out.R_hat, scheme_stats(scheme), out.sigma_hat_lp, M,
                                                n, out.x, options.symmetric);
  out.radius_upper = r.upper;
  out.radius_lower = std::min(r.lower, r.upper);
  out.theta_up = r.theta_up;
  out.theta_lo = r.theta_lo;
  return out;
}

std::string statistic_name(const StatisticKind& kind) {
  return std::visit(overloaded{
                        [](const KsStatistic&) { return std::string("ks"); },
                        [](const Wasserstein1Statistic&) { return std::string("wass1"); },
                        [](const MmdStatistic& m) {
                          // Shortest round-trip form so the name can be passed back to --class.
                          char buf[32];
                          const auto res = std::to_chars(buf, buf + sizeof buf, m.bandwidth);
                          return std::string("mmd:") +
                                 (m.kernel == KernelKind::gaussian ? "gaussian" : "laplace") + ":" +
                                 std::string(buf, res.ptr);
                        },
                        [](const FiniteStatistic&) { return std::string("finite"); },
                    },
                    kind);
}

Eigen::MatrixXd kernel_gram(const Sample& z, KernelKind kind, double bandwidth) {
  validate_sample(z);
  if (!(bandwidth > 0.0)) throw std::invalid_argument("kernel bandwidth must be positive");
  const std::size_t n = z.size();
  Eigen::MatrixXd k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d2 = squared_distance(z.point(i), z.point(j));
      const double v = kind == KernelKind::gaussian ? std::exp(-d2 / (2.0 * bandwidth * bandwidth))
                                                    : std::exp(-std::sqrt(d2) / bandwidth);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

double median_heuristic_bandwidth(const Sample& z) {
  validate_sample(z);
  const std::size_t n = z.size();
  if (n < 2) throw std::invalid_argument("median heuristic needs two points");
  std::vector<double> dist;
  dist.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dist.push_back(std::sqrt(squared_distance(z.point(i), z.point(j))));
  const std::size_t mid = dist.size() / 2;
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid), dist.end());
  double med = dist[mid];
  if (dist.size() % 2 == 0) {
    const double below = *std::max_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid));
    med = 0.5 * (med + below);
  }
  if (!(med > 0.0)) throw std::invalid_argument("median pairwise distance is zero");
  return med;
}

FunctionClass two_sample_class(const StatisticKind& kind, const Sample& z) {
  return std::visit(
      overloaded{
          [](const KsStatistic&) -> FunctionClass { return HalfLinesClass{}; },
          [](const Wasserstein1Statistic&) -> FunctionClass { return Lipschitz1DClass{}; },
          [&](const MmdStatistic& m) -> FunctionClass {
            return make_kernel_ball(kernel_gram(z, m.kernel, m.bandwidth));
          },
          [&](const FiniteStatistic& f) -> FunctionClass {
            if (static_cast<std::size_t>(f.values.cols()) != z.size())
              throw std::invalid_argument("finite class has " + std::to_string(f.values.cols()) +
                                          " columns, pooled sample has " + std::to_string(z.size()));
            return make_finite_class(f.values, f.symmetrized);
          },
      },
      kind);
}

TestOutcome run_two_sample(const Sample& x, const Sample& y, const TwoSampleSpec& spec) {
  const Sample z = concat_samples(x, y);
  if ((std::holds_alternative<KsStatistic>(spec.statistic) ||
       std::holds_alternative<Wasserstein1Statistic>(spec.statistic)) &&
      z.dim != 1)
    throw std::invalid_argument(statistic_name(spec.statistic) + " needs scalar data");
  const FunctionClass cls = two_sample_class(spec.statistic, z);
  TestOptions opts;
  opts.strict = spec.strict;
  opts.threads = spec.threads;
  return permutation_two_sample_test(x, y, cls, spec.B, spec.alpha, spec.seed, opts);
}

BoundReport power_report(const StatisticKind& kind, std::size_t n, std::size_t m, double alpha,
                         double delta, std::size_t B, const PowerInputs& extra) {
  const BoundReport ab = alpha_B_report(alpha, delta, B);
  if (!ab.valid)
    throw std::invalid_argument("alpha_B = " + std::to_string(ab.value) +
                                " is outside (0, 1); increase B or alpha");
  BoundReport r;
  r.inputs = {{"n", static_cast<double>(n)}, {"m", static_cast<double>(m)}, {"alpha", alpha},
              {"delta", delta},          {"B", static_cast<double>(B)},    {"alpha_B", ab.value}};
  if (std::holds_alternative<KsStatistic>(kind)) {
    r.tag = "ks-power";
    r.value = ks_power_threshold(n, m, ab.value, delta);
  } else if (std::holds_alternative<MmdStatistic>(kind)) {
    r.tag = "mmd-power";
    r.inputs.emplace_back("kappa", extra.kappa);
    r.value = mmd_power_threshold(n, m, ab.value, delta, extra.kappa);
  } else {
    throw std::invalid_argument("no closed-form power threshold for statistic " + statistic_name(kind));
  }
  r.valid = std::isfinite(r.value);
  return r;
}

}  // namespace exchboot
