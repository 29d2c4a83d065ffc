#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "exchboot/applications.hpp"
#include "exchboot/bounds.hpp"
#include "exchboot/harness.hpp"
#include "exchboot/parallel.hpp"
#include "exchboot/perm_walk.hpp"
#include "exchboot/resampling.hpp"

namespace exchboot {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Stream ids used to keep the different random inputs of one experiment apart.
enum Stream : std::uint64_t { kTable = 1, kPilot = 2, kTrials = 3, kMeanDraws = 4, kSigma = 5, kData = 6 };

Eigen::MatrixXd random_table(std::size_t rows, std::size_t categories, Philox4x32& rng, bool constant) {
  Eigen::MatrixXd t(rows, categories);
  for (std::size_t f = 0; f < rows; ++f) {
    // Constant rows use dyadic values so weighted sums of them cancel exactly.
    const double c = std::round((2.0 * uniform01(rng) - 1.0) * 8.0) / 8.0;
    for (std::size_t k = 0; k < categories; ++k)
      t(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(k)) = constant ? c : 2.0 * uniform01(rng) - 1.0;
  }
  return t;
}

// Table values at categorical observations: row f, column i = table(f, cat_i).
Eigen::MatrixXd table_at(const Eigen::MatrixXd& table, const std::vector<std::size_t>& cats) {
  Eigen::MatrixXd v(table.rows(), static_cast<Eigen::Index>(cats.size()));
  for (std::size_t i = 0; i < cats.size(); ++i)
    v.col(static_cast<Eigen::Index>(i)) = table.col(static_cast<Eigen::Index>(cats[i]));
  return v;
}

std::vector<std::size_t> draw_categories(const std::vector<double>& cdf, std::size_t n, Philox4x32& rng) {
  std::vector<std::size_t> out(n);
  for (auto& c : out) {
    const double u = uniform01(rng);
    c = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    c = std::min(c, cdf.size() - 1);
  }
  return out;
}

std::vector<double> category_probs(const std::string& name, std::size_t k) {
  std::vector<double> p(k);
  if (name == "uniform") {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(k));
  } else if (name == "skewed") {
    double w = 1.0, total = 0.0;
    for (auto& v : p) {
      v = w;
      total += w;
      w *= 0.6;
    }
    for (auto& v : p) v /= total;
  } else {
    throw std::invalid_argument("unknown category distribution '" + name + "' (uniform | skewed)");
  }
  return p;
}

WeightScheme scheme_by_name(const std::string& name, std::size_t n) {
  if (name == "efron") return EfronScheme{n};
  if (name == "two_sample") return TwoSampleScheme{n / 2, n - n / 2};
  if (name == "balanced_signs") return BalancedSignsScheme{n};
  throw std::invalid_argument("unknown weight scheme '" + name + "'");
}

FunctionClass scalar_statistic_class(const std::string& name, std::size_t n) {
  if (name == "ks") return HalfLinesClass{};
  if (name == "wass1") return Lipschitz1DClass{};
  if (name == "constant") return make_finite_class(Eigen::MatrixXd::Constant(1, static_cast<Eigen::Index>(n), 0.5), false);
  throw std::invalid_argument("unknown statistic '" + name + "' (ks | wass1 | constant)");
}

std::string fmt(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

// ---------------------------------------------------------------- config readers

void read_config(ConfigReader& r, Type1Config& c) {
  r.read("n", c.n);
  r.read("m", c.m);
  r.read("B", c.B);
  r.read("alpha", c.alpha);
  r.read("trials", c.trials);
  r.read("distribution", c.distribution);
  r.read("statistic", c.statistic);
  r.read("strict", c.strict);
}

void read_config(ConfigReader& r, SelfBoundingConfig& c) {
  r.read("n", c.n);
  r.read("rows", c.rows);
  r.read("categories", c.categories);
  r.read("trials", c.trials);
  r.read("pilot", c.pilot);
  r.read("inner_B", c.inner_B);
  r.read("x", c.x);
  r.read("constant_class", c.constant_class);
}

void read_config(ConfigReader& r, TolstikhinConfig& c) {
  r.read("n", c.n);
  r.read("m", c.m);
  r.read("draws", c.draws);
  r.read("trials", c.draws);
  r.read("mean_draws", c.mean_draws);
  r.read("sigma_samples", c.sigma_samples);
  r.read("levels", c.levels);
  r.read("statistic", c.statistic);
  r.read("distribution", c.distribution);
  r.read("sigma2_inflation", c.sigma2_inflation);
}

void read_config(ConfigReader& r, SandwichConfig& c) {
  r.read("n", c.n);
  r.read("rows", c.rows);
  r.read("categories", c.categories);
  r.read("trials", c.trials);
  r.read("schemes", c.schemes);
  r.read("distributions", c.distributions);
  r.read("constant_class", c.constant_class);
}

void read_config(ConfigReader& r, QuantileLemmaConfig& c) {
  r.read("instances", c.instances);
  r.read("trials", c.instances);
  r.read("max_support", c.max_support);
}

void read_config(ConfigReader& r, DkwConfig& c) {
  r.read("k", c.k);
  r.read("trials", c.trials);
}

void read_config(ConfigReader& r, VPlusConfig& c) {
  r.read("instances", c.instances);
  r.read("trials", c.instances);
  r.read("n_min", c.n_min);
  r.read("n_max", c.n_max);
}

// ---------------------------------------------------------------- experiments

std::vector<VerificationReport> verify_type1(const Type1Config& c, std::uint64_t seed, unsigned threads) {
  const Distribution dist = parse_distribution(c.distribution);
  const FunctionClass cls = scalar_statistic_class(c.statistic, c.n + c.m);
  std::vector<VerificationReport> out;
  for (std::size_t B : c.B) {
    const auto start = Clock::now();
    const std::uint64_t run_seed = derive_seed(seed, B);
    std::vector<char> rejected(c.trials, 0);
    parallel_for(
        c.trials,
        [&](std::size_t t) {
          const std::uint64_t trial_seed = derive_seed(run_seed, t);
          Philox4x32 rng = draw_rng(trial_seed, 0);
          const Sample x = draw_sample(dist, c.n, rng);
          const Sample y = draw_sample(dist, c.m, rng);
          TestOptions opts;
          opts.strict = c.strict;
          opts.threads = 1;
          rejected[t] = permutation_two_sample_test(x, y, cls, B, c.alpha, trial_seed, opts).reject ? 1 : 0;
        },
        threads);
    const std::size_t rejections = static_cast<std::size_t>(std::count(rejected.begin(), rejected.end(), 1));
    const double rate = static_cast<double>(rejections) / static_cast<double>(c.trials);
    out.push_back(make_report("type1/" + c.statistic + "/B=" + std::to_string(B), seed, c.trials, rejections,
                              c.alpha, rate, binomial_tolerance(c.alpha, c.trials), elapsed_ms(start)));
  }
  return out;
}

std::vector<VerificationReport> verify_self_bounding(const SelfBoundingConfig& c, std::uint64_t seed,
                                                     unsigned threads) {
  const auto start = Clock::now();
  Philox4x32 table_rng = draw_rng(seed, kTable);
  const Eigen::MatrixXd table = random_table(c.rows, c.categories, table_rng, c.constant_class);
  const std::vector<double> cdf = [&] {
    std::vector<double> p = category_probs("uniform", c.categories);
    std::partial_sum(p.begin(), p.end(), p.begin());
    return p;
  }();
  const WeightScheme scheme = BalancedSignsScheme{c.n};
  const double kappa = scheme_stats(scheme).kappa;

  // Conditional mean for one fresh data set drawn from stream (stream_seed, t).
  auto gbar_for = [&](std::uint64_t stream_seed, std::size_t t) {
    const std::uint64_t trial_seed = derive_seed(stream_seed, t);
    Philox4x32 rng = draw_rng(trial_seed, 0);
    const Sample data = scalar_sample(std::vector<double>(c.n, 0.0));
    const FunctionClass cls = FiniteClass{table_at(table, draw_categories(cdf, c.n, rng)), false};
    return gbar_mc(cls, data, scheme, c.inner_B, trial_seed, 1).mean;
  };

  std::vector<double> pilot(c.pilot);
  const std::uint64_t pilot_seed = derive_seed(seed, kPilot);
  parallel_for(c.pilot, [&](std::size_t t) { pilot[t] = gbar_for(pilot_seed, t); }, threads);
  const double E = std::max(0.0, mean_and_se(pilot).mean);

  std::vector<double> values(c.trials);
  const std::uint64_t trial_seed = derive_seed(seed, kTrials);
  parallel_for(c.trials, [&](std::size_t t) { values[t] = gbar_for(trial_seed, t); }, threads);

  std::vector<VerificationReport> out;
  const double ms = elapsed_ms(start);
  for (double x : c.x) {
    const double bound = std::exp(-x);
    const double hi = self_bounding_upper(E, kappa, x);
    const double lo = self_bounding_lower(E, kappa, x);
    std::size_t up = 0, down = 0;
    for (double v : values) {
      up += v > hi ? 1 : 0;
      down += v < lo ? 1 : 0;
    }
    const double n = static_cast<double>(c.trials);
    out.push_back(make_report("selfbounding/upper/x=" + fmt(x), seed, c.trials, up, bound,
                              static_cast<double>(up) / n, binomial_tolerance(bound, c.trials), ms));
    out.push_back(make_report("selfbounding/lower/x=" + fmt(x), seed, c.trials, down, bound,
                              static_cast<double>(down) / n, binomial_tolerance(bound, c.trials), ms));
  }
  return out;
}

std::vector<VerificationReport> verify_tolstikhin(const TolstikhinConfig& c, std::uint64_t seed,
                                                  unsigned threads) {
  const auto start = Clock::now();
  const std::size_t N = c.n + c.m;
  if (N < 3) throw std::invalid_argument("tail experiment needs n + m >= 3");
  Philox4x32 data_rng = draw_rng(seed, kData);
  const Sample z = draw_sample(parse_distribution(c.distribution), N, data_rng);
  const FunctionClass cls = scalar_statistic_class(c.statistic, N);
  const WeightVector w = base_vector(TwoSampleScheme{c.n, c.m});
  const PermutationFunction g = data_permuting_function(cls, z, w);

  // Largest gradient norm seen over sampled permutations (identity included).
  std::vector<double> grads(c.sigma_samples + 1);
  const std::uint64_t sigma_seed = derive_seed(seed, kSigma);
  parallel_for(
      grads.size(),
      [&](std::size_t s) {
        Philox4x32 rng = draw_rng(sigma_seed, s);
        const Permutation sigma = s == 0 ? identity_permutation(N) : uniform_permutation(N, rng);
        grads[s] = grad_plus_sq(g, sigma, c.n);
      },
      threads);
  const double sigma2 = c.sigma2_inflation * *std::max_element(grads.begin(), grads.end());

  auto sample_values = [&](std::uint64_t stream_seed, std::size_t count) {
    std::vector<double> v(count);
    parallel_for(
        count,
        [&](std::size_t b) {
          Philox4x32 rng = draw_rng(stream_seed, b);
          v[b] = g(uniform_permutation(N, rng));
        },
        threads);
    return v;
  };
  const double mean = mean_and_se(sample_values(derive_seed(seed, kMeanDraws), c.mean_draws)).mean;
  const std::vector<double> values = sample_values(derive_seed(seed, kTrials), c.draws);

  std::vector<VerificationReport> out;
  const double ms = elapsed_ms(start);
  for (double level : c.levels) {
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("tail levels must lie in (0, 1)");
    std::size_t hits = 0;
    double bound = level;
    if (sigma2 > 0.0) {
      const double t = std::sqrt(8.0 * sigma2 * std::log(1.0 / level) / (static_cast<double>(N) + 2.0));
      bound = tolstikhin_tail(t, N, sigma2, TailVariant::classic);
      for (double v : values) hits += v - mean >= t ? 1 : 0;
    }
    out.push_back(make_report("tolstikhin/" + c.statistic + "/level=" + fmt(level), seed, c.draws, hits, bound,
                              static_cast<double>(hits) / static_cast<double>(c.draws),
                              binomial_tolerance(bound, c.draws), ms));
  }
  return out;
}

std::vector<VerificationReport> verify_sandwich(const SandwichConfig& c, std::uint64_t seed, unsigned threads) {
  Philox4x32 table_rng = draw_rng(seed, kTable);
  const Eigen::MatrixXd table = random_table(c.rows, c.categories, table_rng, c.constant_class);
  const Sample placeholder = scalar_sample(std::vector<double>(c.n, 0.0));
  std::vector<VerificationReport> out;
  for (std::size_t di = 0; di < c.distributions.size(); ++di) {
    const std::string& dname = c.distributions[di];
    const std::vector<double> probs = category_probs(dname, c.categories);
    std::vector<double> cdf(probs.size());
    std::partial_sum(probs.begin(), probs.end(), cdf.begin());
    std::vector<double> means(c.rows);
    for (std::size_t f = 0; f < c.rows; ++f)
      for (std::size_t k = 0; k < c.categories; ++k)
        means[f] += probs[k] * table(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(k));

    // Expected supremum of the centred process, from its own data draws.
    const auto m_start = Clock::now();
    std::vector<double> sup_values(c.trials);
    const std::uint64_t m_seed = derive_seed(derive_seed(seed, kPilot), di);
    parallel_for(
        c.trials,
        [&](std::size_t t) {
          Philox4x32 rng = draw_rng(m_seed, t);
          const FiniteClass cls{table_at(table, draw_categories(cdf, c.n, rng)), false};
          sup_values[t] = empirical_process_sup(cls, means);
        },
        threads);
    const MeanEstimate M = mean_and_se(sup_values);
    const double m_ms = elapsed_ms(m_start);

    for (std::size_t si = 0; si < c.schemes.size(); ++si) {
      const auto start = Clock::now();
      const WeightScheme scheme = scheme_by_name(c.schemes[si], c.n);
      const SchemeStats st = scheme_stats(scheme);
      std::vector<double> g_values(c.trials);
      const std::uint64_t g_seed = derive_seed(derive_seed(derive_seed(seed, kTrials), di), si);
      parallel_for(
          c.trials,
          [&](std::size_t t) {
            Philox4x32 rng = draw_rng(g_seed, t);
            const FunctionClass cls = FiniteClass{table_at(table, draw_categories(cdf, c.n, rng)), false};
            const WeightVector xi = sample_weights(scheme, rng);
            g_values[t] = sup_weighted_sum(cls, placeholder, xi);
          },
          threads);
      const MeanEstimate G = mean_and_se(g_values);
      const Bracket br = expectation_sandwich(std::max(0.0, M.mean), st, false);
      const double ms = elapsed_ms(start) + m_ms;
      const std::string base = "sandwich/" + c.schemes[si] + "/" + dname;
      // Absolute floor absorbs rounding when both sides are numerically zero.
      constexpr double kRoundingFloor = 1e-12;
      const double lo_tol = 3.0 * std::hypot(st.pos_mean * M.std_error, G.std_error) + kRoundingFloor;
      const double hi_tol = 3.0 * std::hypot(2.0 * st.sup_norm * M.std_error, G.std_error) + kRoundingFloor;
      out.push_back(make_report(base + "/lower", seed, c.trials, br.lower > G.mean + lo_tol ? 1 : 0, G.mean,
                                br.lower, lo_tol, ms));
      out.push_back(make_report(base + "/upper", seed, c.trials, G.mean > br.upper + hi_tol ? 1 : 0, br.upper,
                                G.mean, hi_tol, ms));
    }
  }
  return out;
}

namespace {

// Joint law of (X, Y) on a finite grid given by integer weights; Y values
// are the sorted column labels. All quantile comparisons are exact integers.
struct DiscreteJoint {
  std::vector<std::vector<std::uint64_t>> w;  // w[x][y]
  std::vector<double> y_values;               // strictly increasing
};

// Smallest index j with cum[j] * den >= (den - num) * total, i.e. the least
// (num/den)-quantile of a law with cumulative weights cum.
std::size_t least_quantile_index(const std::vector<std::uint64_t>& cum, std::uint64_t total, std::uint64_t num,
                                 std::uint64_t den) {
  for (std::size_t j = 0; j < cum.size(); ++j)
    if (cum[j] * den >= (den - num) * total) return j;
  return cum.size() - 1;
}

DiscreteJoint random_joint(Philox4x32& rng, std::size_t max_support) {
  DiscreteJoint J;
  const std::uint64_t kind = bounded(rng, 4);
  const std::size_t nx = 1 + bounded(rng, max_support);
  const std::size_t ny = kind == 3 ? 1 : 1 + bounded(rng, max_support);
  J.w.assign(nx, std::vector<std::uint64_t>(ny, 0));
  if (kind == 0) {
    // Independent coordinates.
    std::vector<std::uint64_t> a(nx), b(ny);
    for (auto& v : a) v = 1 + bounded(rng, 9);
    for (auto& v : b) v = bounded(rng, 10);
    b[bounded(rng, ny)] += 1;
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j) J.w[i][j] = a[i] * b[j];
  } else if (kind == 1) {
    // Y is a function of X.
    for (std::size_t i = 0; i < nx; ++i) J.w[i][bounded(rng, ny)] = 1 + bounded(rng, 9);
  } else {
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j < ny; ++j) J.w[i][j] = bounded(rng, 10);
      J.w[i][bounded(rng, ny)] += 1;
    }
  }
  J.y_values.resize(ny);
  double y = uniform01(rng);
  for (auto& v : J.y_values) {
    v = y;
    y += 0.01 + uniform01(rng);
  }
  return J;
}

}  // namespace

std::vector<VerificationReport> verify_quantile_lemma(const QuantileLemmaConfig& c, std::uint64_t seed) {
  const auto start = Clock::now();
  if (c.max_support < 1) throw std::invalid_argument("max_support must be positive");
  std::size_t checks = 0, violations = 0;
  for (std::size_t inst = 0; inst < c.instances; ++inst) {
    Philox4x32 rng = draw_rng(seed, inst);
    const DiscreteJoint J = random_joint(rng, c.max_support);
    const std::size_t nx = J.w.size(), ny = J.y_values.size();
    std::vector<std::uint64_t> row_total(nx, 0), y_cum(ny, 0);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j) {
        row_total[i] += J.w[i][j];
        y_cum[j] += J.w[i][j];
      }
    for (std::size_t j = 1; j < ny; ++j) y_cum[j] += y_cum[j - 1];
    total = y_cum.back();

    for (std::uint64_t a = 1; a <= 9; ++a) {
      // Conditional quantile index of Y given each X value (rows with mass only).
      std::vector<std::size_t> zq(nx, 0);
      for (std::size_t i = 0; i < nx; ++i) {
        if (row_total[i] == 0) continue;
        std::vector<std::uint64_t> cum(ny);
        std::partial_sum(J.w[i].begin(), J.w[i].end(), cum.begin());
        zq[i] = least_quantile_index(cum, row_total[i], a, 10);
      }
      // Law of Z = q_alpha(Y | X) on the Y grid.
      std::vector<std::uint64_t> z_cum(ny, 0);
      for (std::size_t i = 0; i < nx; ++i) z_cum[zq[i]] += row_total[i];
      for (std::size_t j = 1; j < ny; ++j) z_cum[j] += z_cum[j - 1];
      for (std::uint64_t g = 1; g <= 9; ++g) {
        const double lhs = J.y_values[least_quantile_index(z_cum, total, g, 10)];
        const double rhs = J.y_values[least_quantile_index(y_cum, total, g * a, 100)];
        ++checks;
        violations += lhs > rhs ? 1 : 0;
      }
    }
  }
  return {make_report("quantile-lemma", seed, checks, violations, 0.0,
                      static_cast<double>(violations) / static_cast<double>(std::max<std::size_t>(checks, 1)), 0.0,
                      elapsed_ms(start))};
}

std::vector<VerificationReport> verify_dkw_mean(const DkwConfig& c, std::uint64_t seed, unsigned threads) {
  std::vector<VerificationReport> out;
  for (std::size_t k : c.k) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    const auto start = Clock::now();
    std::vector<double> stats(c.trials);
    const std::uint64_t run_seed = derive_seed(seed, k);
    parallel_for(
        c.trials,
        [&](std::size_t t) {
          Philox4x32 rng = draw_rng(run_seed, t);
          std::vector<double> u(k);
          for (auto& v : u) v = uniform01(rng);
          std::sort(u.begin(), u.end());
          const double kk = static_cast<double>(k);
          double d = 0.0;
          for (std::size_t i = 0; i < k; ++i) {
            d = std::max(d, static_cast<double>(i + 1) / kk - u[i]);
            d = std::max(d, u[i] - static_cast<double>(i) / kk);
          }
          stats[t] = kk * d;
        },
        threads);
    const MeanEstimate est = mean_and_se(stats);
    const double bound = dkw_mean_bound(k);
    out.push_back(make_report("dkw/k=" + std::to_string(k), seed, c.trials, est.mean > bound ? 1 : 0, bound,
                              est.mean, 3.0 * est.std_error, elapsed_ms(start)));
  }
  return out;
}

std::vector<VerificationReport> verify_vplus(const VPlusConfig& c, std::uint64_t seed) {
  const auto start = Clock::now();
  if (c.n_min < 2 || c.n_max < c.n_min || c.n_max > 7)
    throw std::invalid_argument("need 2 <= n_min <= n_max <= 7");
  double worst1 = 0.0, worst2 = 0.0;
  std::size_t over1 = 0, over2 = 0;
  for (std::size_t inst = 0; inst < c.instances; ++inst) {
    Philox4x32 rng = draw_rng(seed, inst);
    const std::size_t n = c.n_min + bounded(rng, c.n_max - c.n_min + 1);
    // Weights: a random centred vector, a two-sample vector or balanced signs.
    WeightVector w(n);
    switch (bounded(rng, 3)) {
      case 0: {
        for (auto& v : w) v = standard_normal(rng);
        const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(n);
        for (auto& v : w) v -= mean;
        break;
      }
      case 1: {
        const std::size_t k = 1 + bounded(rng, n - 1);
        w = base_vector(TwoSampleScheme{k, n - k});
        break;
      }
      default:
        w = n % 2 == 0 ? base_vector(BalancedSignsScheme{n}) : base_vector(TwoSampleScheme{n / 2, n - n / 2});
    }
    Sample data = scalar_sample(std::vector<double>(n));
    for (auto& v : data.values) v = std::round(uniform01(rng) * 8.0) / 8.0;  // ties allowed
    FunctionClass cls;
    if (bounded(rng, 3) == 0) {
      cls = HalfLinesClass{};
    } else {
      const std::size_t rows = 1 + bounded(rng, 4);
      Eigen::MatrixXd vals(rows, n);
      for (Eigen::Index i = 0; i < vals.rows(); ++i)
        for (Eigen::Index j = 0; j < vals.cols(); ++j) vals(i, j) = 2.0 * uniform01(rng) - 1.0;
      cls = FiniteClass{vals, bounded(rng, 2) == 0};
    }
    const VPlusRatios r = check_vplus_bounds(cls, data, w);
    worst1 = std::max(worst1, r.max_ratio1);
    worst2 = std::max(worst2, r.max_ratio2);
    over1 += r.max_ratio1 > 1.0 + 1e-9 ? 1 : 0;
    over2 += r.max_ratio2 > 1.0 + 1e-9 ? 1 : 0;
  }
  const double ms = elapsed_ms(start);
  return {make_report("vplus/weak-variance", seed, c.instances, over1, 1.0, worst1, 1e-9, ms),
          make_report("vplus/weight-norm", seed, c.instances, over2, 1.0, worst2, 1e-9, ms)};
}

std::vector<std::string> verification_names() {
  return {"type1", "selfbounding", "tolstikhin", "sandwich", "quantile-lemma", "dkw", "vplus", "all"};
}

std::vector<VerificationReport> run_verification(const std::string& name, std::uint64_t seed,
                                                 std::optional<std::size_t> trials, ConfigReader config,
                                                 unsigned threads) {
  auto apply = [&](auto& cfg, auto& field) {
    read_config(config, cfg);
    config.finish();
    if (trials) field = *trials;
  };
  if (name == "type1") {
    Type1Config c;
    apply(c, c.trials);
    return verify_type1(c, seed, threads);
  }
  if (name == "selfbounding") {
    SelfBoundingConfig c;
    apply(c, c.trials);
    return verify_self_bounding(c, seed, threads);
  }
  if (name == "tolstikhin") {
    TolstikhinConfig c;
    apply(c, c.draws);
    return verify_tolstikhin(c, seed, threads);
  }
  if (name == "sandwich") {
    SandwichConfig c;
    apply(c, c.trials);
    return verify_sandwich(c, seed, threads);
  }
  if (name == "quantile-lemma") {
    QuantileLemmaConfig c;
    apply(c, c.instances);
    return verify_quantile_lemma(c, seed);
  }
  if (name == "dkw") {
    DkwConfig c;
    apply(c, c.trials);
    return verify_dkw_mean(c, seed, threads);
  }
  if (name == "vplus") {
    VPlusConfig c;
    apply(c, c.instances);
    return verify_vplus(c, seed);
  }
  if (name == "all") {
    config.finish();
    std::vector<VerificationReport> all;
    for (const auto& sub : verification_names()) {
      if (sub == "all") continue;
      auto part = run_verification(sub, seed, trials, ConfigReader(), threads);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw std::invalid_argument("unknown verification '" + name + "'");
}

}  // namespace exchboot
