// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "exchboot/applications.hpp"
#include "exchboot/harness.hpp"
#include "exchboot/perm_walk.hpp"
#include "exchboot/resampling.hpp"
#include "oracles.hpp"

using namespace exchboot;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Result {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Folds verification reports into one result.
Result from_reports(const std::vector<VerificationReport>& reports) {
  Result r;
  for (const auto& rep : reports) {
    r.pass = r.pass && rep.pass;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s%s %.5g<=%.5g+%.2g", r.detail.empty() ? "" : "; ", rep.experiment.c_str(),
                  rep.empirical, rep.bound, rep.tolerance);
    r.detail += buf;
  }
  return r;
}

std::vector<double> uniform_vec(std::size_t n, Philox4x32& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform01(rng);
  return v;
}

Result type1_exactness() {
  Type1Config c;  // n = m = 20, U[0,1], alpha 0.05, B in {9, 99, 999}, 10^4 trials
  const auto reports = verify_type1(c, kSeed);
  Result r = from_reports(reports);
  double slowest = 0;
  for (const auto& rep : reports) slowest = std::max(slowest, rep.wall_time_ms / 1000);
  r.pass = r.pass && slowest < 60.0;
  r.detail += fmt("; slowest B %.1f s", slowest);
  // The discrete KS statistic under the >= rule, for reference only.
  c.statistic = "ks";
  c.B = {999};
  for (const auto& rep : verify_type1(c, kSeed))
    std::printf("  note: %s rejection rate %.4f (ties; not part of the criterion)\n", rep.experiment.c_str(),
                rep.empirical);
  return r;
}

Result quantile_oracle() {
  Result r;
  std::size_t compared = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Philox4x32 rng = draw_rng(kSeed, seed);
    const std::size_t total = 2 + bounded(rng, 5);  // 2..6
    const std::size_t n = 1 + bounded(rng, total - 1);
    std::vector<double> xv(n), yv(total - n);
    for (auto& v : xv) v = std::round(uniform01(rng) * 5);
    for (auto& v : yv) v = std::round(uniform01(rng) * 5);
    const Sample x = scalar_sample(xv), y = scalar_sample(yv);
    FunctionClass cls = HalfLinesClass{};
    if (seed % 3 == 1) cls = Lipschitz1DClass{};
    if (seed % 3 == 2) {
      Eigen::MatrixXd t(4, Eigen::Index(total));
      for (Eigen::Index i = 0; i < t.rows(); ++i)
        for (Eigen::Index j = 0; j < t.cols(); ++j) t(i, j) = 2 * uniform01(rng) - 1;
      cls = make_finite_class(t, true);
    }
    const ResampleRun run = enumerated_permutation_run(x, y, cls);
    for (double alpha : {0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.9}) {
      const TestOutcome ex = exhaustive_permutation_test(x, y, cls, alpha);
      const bool same = bootstrap_quantile(run, alpha) == ex.quantile && decide(run.stats, alpha, false).reject == ex.reject;
      r.pass = r.pass && same;
      ++compared;
    }
  }
  r.detail = std::to_string(compared) + " (instance, alpha) pairs compared exactly";
  return r;
}

Result timed(const std::vector<VerificationReport>& reports, Clock::time_point t0, double limit) {
  Result r = from_reports(reports);
  const double secs = seconds_since(t0);
  if (limit > 0) r.pass = r.pass && secs < limit;
  r.detail += fmt("; %.2f s", secs);
  return r;
}

Result statistic_identities() {
  Result r;
  double ks_err = 0, w1_err = 0, lp_err = 0, quad_err = 0, mmd_err = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Philox4x32 rng = draw_rng(kSeed + 7, seed);
    const std::size_t n = 1 + bounded(rng, 25), m = 1 + bounded(rng, 25);
    std::vector<double> xv = uniform_vec(n, rng), yv = uniform_vec(m, rng);
    if (seed % 4 == 0)
      for (auto& v : xv) v = std::round(v * 5) / 5;
    std::vector<double> zv = xv;
    zv.insert(zv.end(), yv.begin(), yv.end());
    const Sample z = scalar_sample(zv);
    const WeightVector w = base_vector(TwoSampleScheme{n, m});
    ks_err = std::max(ks_err, std::abs(sup_weighted_sum(HalfLinesClass{}, z, w) - oracle::ks(xv, yv)));
    w1_err = std::max(w1_err, std::abs(sup_weighted_sum(Lipschitz1DClass{}, z, w) - oracle::wasserstein1(xv, yv)));
    const double h = 0.1 + uniform01(rng);
    const Eigen::MatrixXd K = kernel_gram(z, KernelKind::gaussian, h);
    const Eigen::Map<const Eigen::VectorXd> wv(w.data(), Eigen::Index(w.size()));
    const double sup = sup_weighted_sum(make_kernel_ball(K), z, w);
    quad_err = std::max(quad_err, std::abs(sup - std::sqrt(std::max(0.0, wv.dot(K * wv)))));
    auto k = [&](double a, double b) { return std::exp(-(a - b) * (a - b) / (2 * h * h)); };
    mmd_err = std::max(mmd_err, std::abs(sup - oracle::mmd_b(xv, yv, k)));

    const std::size_t small = 2 + bounded(rng, 5);  // 2..6
    std::vector<double> xs = uniform_vec(small, rng), xi(small);
    double mean = 0;
    for (auto& v : xi) mean += (v = standard_normal(rng)) / small;
    for (auto& v : xi) v -= mean;
    lp_err = std::max(lp_err, std::abs(sup_weighted_sum(Lipschitz1DClass{}, scalar_sample(xs), xi) -
                                       oracle::lipschitz_lp(xs, xi)));
  }
  r.pass = ks_err <= 1e-12 && w1_err <= 1e-12 && lp_err <= 1e-12 && quad_err <= 1e-10 && mmd_err <= 1e-10;
  char buf[256];
  std::snprintf(buf, sizeof buf, "max errors: ks %.1e, w1 %.1e, lp %.1e, quad %.1e, mmd %.1e", ks_err, w1_err,
                lp_err, quad_err, mmd_err);
  r.detail = buf;
  return r;
}

Result generating_function() {
  Result r;
  double worst = 0;
  for (double s : {0.1, 0.5, 0.9, 1.0}) worst = std::max(worst, std::abs(g1_closed_form(s) - oracle::g1_dp(s)));
  const bool at_one = g1_closed_form(1.0) == 1.0;
  const MeanEstimate mc = g1_monte_carlo(1.005, 200000, kSeed);
  const double cf = g1_closed_form(1.005);
  const bool mc_ok = std::abs(mc.mean - cf) <= 3 * mc.std_error;
  r.pass = worst <= 1e-8 && at_one && mc_ok;
  char buf[256];
  std::snprintf(buf, sizeof buf, "DP gap %.1e; G(1)=%.17g; MC %.6f vs %.6f (se %.1e)", worst, g1_closed_form(1.0),
                mc.mean, cf, mc.std_error);
  r.detail = buf;
  return r;
}

Result tv_mixing() {
  Result r;
  for (std::size_t n : {4, 5, 6}) {
    const auto curve = tv_mixing_curve(n, 0.5, 200);
    for (std::size_t t = 1; t < curve.size(); ++t) r.pass = r.pass && curve[t] <= curve[t - 1] + 1e-15;
  }
  const auto five = tv_mixing_curve(5, 0.5, 200);
  std::size_t first = five.size();
  for (std::size_t t = 0; t < five.size(); ++t)
    if (five[t] < 0.01) {
      first = t;
      break;
    }
  r.pass = r.pass && first <= 200;
  r.detail = "non-increasing for n=4,5,6; n=5 first below 0.01 at t=" + std::to_string(first) +
             fmt(" (TV(200)=%.2e)", five[200]);
  return r;
}

Result coverage() {
  const std::size_t reps = 2000, n = 200, d = 20, B = 200;
  const double alpha = 0.1;
  std::vector<char> hit(reps, 0);
  std::vector<double> radius(reps, 0.0);
  parallel_for(reps, [&](std::size_t rep) {
    Philox4x32 rng = draw_rng(derive_seed(kSeed, 12), rep);
    Sample X{std::vector<double>(n * d), d, std::nullopt};
    for (auto& v : X.values) v = 2 * uniform01(rng) - 1;
    ConfRegionOptions opts;
    opts.symmetric = true;
    opts.threads = 1;
    const ConfidenceRegion c =
        mean_confidence_region(X, 2.0, BalancedSignsScheme{n}, B, alpha, std::sqrt(double(d)), rep, opts);
    double dist = 0;
    for (double v : c.center) dist += v * v;
    hit[rep] = std::sqrt(dist) <= c.radius_upper;
    radius[rep] = c.radius_upper;
  });
  const double cov = double(std::count(hit.begin(), hit.end(), 1)) / reps;
  const double need = 1 - alpha - 3 * std::sqrt(alpha * (1 - alpha) / reps);
  Result r;
  r.pass = cov >= need;
  char buf[200];
  std::snprintf(buf, sizeof buf, "coverage %.4f >= %.4f (mean radius %.4f)", cov, need,
                std::accumulate(radius.begin(), radius.end(), 0.0) / reps);
  r.detail = buf;
  return r;
}

Result performance() {
  const std::size_t n = 500, m = 500, B = 10000;
  Philox4x32 rng = draw_rng(kSeed, 13);
  const Sample x = scalar_sample(uniform_vec(n, rng)), y = scalar_sample(uniform_vec(m, rng));
  Eigen::MatrixXd t(100, Eigen::Index(n + m));
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    for (Eigen::Index j = 0; j < t.cols(); ++j) t(i, j) = 2 * uniform01(rng) - 1;
  const FunctionClass cls = make_finite_class(t, true);

  const auto t0 = Clock::now();
  const TestOutcome seq = permutation_two_sample_test(x, y, cls, B, 0.05, kSeed, {false, 1});
  const double secs = seconds_since(t0);
  const TestOutcome par = permutation_two_sample_test(x, y, cls, B, 0.05, kSeed, {false, 4});

  const Sample z = concat_samples(x, y);
  const SupEvaluator eval(cls, z);
  const auto s1 = resample_statistics(eval, TwoSampleScheme{n, m}, 1, 2000, kSeed, 1);
  const auto s4 = resample_statistics(eval, TwoSampleScheme{n, m}, 1, 2000, kSeed, 4);
  const bool identical = seq.statistic == par.statistic && seq.quantile == par.quantile && seq.reject == par.reject &&
                         s1 == s4;
  Result r;
  r.pass = secs < 5.0 && identical;
  r.detail = fmt("single-threaded %.2f s", secs) + (identical ? "; 4-thread run bit-identical" : "; threads differ");
  return r;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Result()> run;
  };
  const std::vector<Criterion> criteria{
      {"permutation-test exactness", type1_exactness},
      {"Monte Carlo vs exhaustive quantile", quantile_oracle},
      {"V+ bound ratios",
       [] {
         const auto t0 = Clock::now();
         return timed(verify_vplus(VPlusConfig{}, kSeed), t0, 10.0);
       }},
      {"self-bounding tails",
       [] {
         const auto t0 = Clock::now();
         return timed(verify_self_bounding(SelfBoundingConfig{}, kSeed), t0, 120.0);
       }},
      {"permutation tail", [] { return timed(verify_tolstikhin(TolstikhinConfig{}, kSeed), Clock::now(), 0); }},
      {"expectation sandwich", [] { return timed(verify_sandwich(SandwichConfig{}, kSeed), Clock::now(), 0); }},
      {"statistic identities", statistic_identities},
      {"DKW mean bound", [] { return timed(verify_dkw_mean(DkwConfig{}, kSeed), Clock::now(), 0); }},
      {"first-passage generating function", generating_function},
      {"total-variation mixing", tv_mixing},
      {"quantile chaining", [] { return timed(verify_quantile_lemma(QuantileLemmaConfig{}, kSeed), Clock::now(), 0); }},
      {"confidence-region coverage", coverage},
      {"performance and determinism", performance},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].run();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    failed += r.pass ? 0 : 1;
    std::printf("[%s] %2zu %s: %s\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
