#include "exchboot/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace exchboot {

namespace {

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || std::isnan(v))
    throw std::invalid_argument(std::string(name) + " must be non-negative, got " + std::to_string(v));
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0))
    throw std::invalid_argument(std::string(name) + " must be positive, got " + std::to_string(v));
}

double two_sample_factor(std::size_t n, std::size_t m) {
  const double total = static_cast<double>(n + m);
  if (n == 0 || m == 0) throw std::invalid_argument("sample sizes must be positive");
  return 1.0 - 2.0 / std::sqrt(total - 1.0);
}

// sqrt(1/n + 1/m) (2 sqrt(2 log(1/alpha_B)) + sqrt(2 log(1/delta)))
double quantile_term(std::size_t n, std::size_t m, double alpha_b, double delta) {
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return std::sqrt(1.0 / nn + 1.0 / mm) *
         (2.0 * std::sqrt(2.0 * std::log(1.0 / alpha_b)) + std::sqrt(2.0 * std::log(1.0 / delta)));
}

void check_prob(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0))
    throw std::invalid_argument(std::string(name) + " must lie in (0, 1), got " + std::to_string(v));
}

}  // namespace

double self_bounding_upper(double E, double kappa, double x) {
  require_nonnegative(E, "E");
  require_positive(kappa, "kappa");
  require_nonnegative(x, "x");
  return E + std::sqrt(12.0 * kappa * x * E) + 5.0 * kappa * x;
}

double self_bounding_lower(double E, double kappa, double x) {
  require_nonnegative(E, "E");
  require_positive(kappa, "kappa");
  require_nonnegative(x, "x");
  return E - std::sqrt(12.0 * kappa * x * E);
}

double exchangeable_deviation(double u, double range, double v_plus, double w_l2) {
  require_nonnegative(u, "u");
  require_nonnegative(range, "range");
  require_nonnegative(v_plus, "v_plus");
  require_nonnegative(w_l2, "w_l2");
  return 9.0 * std::min(range * std::sqrt(v_plus), w_l2) * std::sqrt(u);
}

double exchangeable_mgf_exponent(double theta, double range, double v_plus, double w_l2) {
  require_nonnegative(theta, "theta");
  require_nonnegative(range, "range");
  require_nonnegative(v_plus, "v_plus");
  require_nonnegative(w_l2, "w_l2");
  return theta * theta * std::min(19.0 * range * range * v_plus, 4.2 * w_l2 * w_l2);
}

BoundReport exchangeable_mgf_report(double theta, double range, double v_plus, double w_l2,
                                    std::size_t n) {
  BoundReport r;
  r.tag = "exchangeable-mgf";
  r.inputs = {{"theta", theta}, {"range", range}, {"v_plus", v_plus}, {"w_l2", w_l2},
              {"n", static_cast<double>(n)}};
  r.value = exchangeable_mgf_exponent(theta, range, v_plus, w_l2);
  r.valid = n >= 34;
  return r;
}

double efron_mgf_exponent(double lambda, double gbar, double v_plus) {
  require_nonnegative(lambda, "lambda");
  require_nonnegative(gbar, "gbar");
  require_nonnegative(v_plus, "v_plus");
  return (2.0 * gbar + v_plus) * std::expm1(lambda) - (2.0 * gbar + v_plus) * lambda;
}

double tolstikhin_tail(double t, std::size_t n, double sigma2, TailVariant variant) {
  if (n < 3) throw std::invalid_argument("tail bound needs n >= 3");
  require_nonnegative(t, "t");
  require_positive(sigma2, "sigma2");
  const double nn = static_cast<double>(n);
  const double scale = variant == TailVariant::classic ? nn + 2.0
                                                       : (2.0 * nn - 5.0) / (2.0 * nn - 2.0) * nn;
  return std::exp(-scale * t * t / (8.0 * sigma2));
}

double conc_fun_permut_exponent(double theta, double alpha0, std::size_t n, double r, double V_plus) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (!(alpha0 >= 0.0 && alpha0 <= 1.0)) throw std::invalid_argument("alpha0 must lie in [0, 1]");
  require_nonnegative(r, "r");
  require_nonnegative(V_plus, "V_plus");
  const double nn = static_cast<double>(n);
  return theta * theta * (1.0 - alpha0) * (nn / (nn - 1.0)) * r * V_plus;
}

double explicit_exponent(double theta, double V_plus) {
  require_nonnegative(V_plus, "V_plus");
  return 9.5 * theta * theta * V_plus;
}

BoundReport explicit_exponent_report(double theta, double V_plus, std::size_t n) {
  BoundReport r;
  r.tag = "permutation-mgf-explicit";
  r.inputs = {{"theta", theta}, {"V_plus", V_plus}, {"n", static_cast<double>(n)}};
  r.value = explicit_exponent(theta, V_plus);
  r.valid = n >= 34;
  return r;
}

double r_bound(std::size_t n) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  return std::max(615.0, 18.42 * static_cast<double>(n));
}

double general_deviation(double x, double M_n_xi, double kappa_xi, double xi_inf, double M_n,
                         double sigma2) {
  for (auto [v, name] : {std::pair{x, "x"}, {M_n_xi, "M_n_xi"}, {kappa_xi, "kappa_xi"},
                         {xi_inf, "xi_inf"}, {M_n, "M_n"}, {sigma2, "sigma2"}})
    require_nonnegative(v, name);
  return M_n_xi + std::sqrt(6.0 * kappa_xi * x * M_n_xi) +
         xi_inf * std::max(19.0 * std::sqrt(x * (4.0 * M_n + sigma2)), 41.0 * x) +
         2.5 * kappa_xi * x;
}

double alpha_B(double alpha, double delta, std::size_t B) {
  check_prob(alpha, "alpha");
  check_prob(delta, "delta");
  if (B < 1) throw std::invalid_argument("B must be at least 1");
  const double b = static_cast<double>(B);
  return (1.0 + 1.0 / b) *
         (alpha - std::sqrt(3.0 * alpha * std::log(1.0 / delta) / b) - 1.0 / (b + 1.0));
}

BoundReport alpha_B_report(double alpha, double delta, std::size_t B) {
  BoundReport r;
  r.tag = "alpha-B";
  r.inputs = {{"alpha", alpha}, {"delta", delta}, {"B", static_cast<double>(B)}};
  r.value = alpha_B(alpha, delta, B);
  r.valid = r.value > 0.0 && r.value < 1.0;
  return r;
}

double ks_power_threshold(std::size_t n, std::size_t m, double alpha_b, double delta) {
  const double lead = two_sample_factor(n, m);
  if (!(lead > 0.0)) throw std::invalid_argument("leading factor 1 - 2/sqrt(n+m-1) is not positive");
  check_prob(alpha_b, "alpha_B");
  check_prob(delta, "delta");
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  const double rhs = quantile_term(n, m, alpha_b, delta) +
                     2.0 * std::sqrt(2.0 * std::numbers::pi) * (1.0 / std::sqrt(nn) + 1.0 / std::sqrt(mm)) +
                     12.0 / (nn + mm) * std::log(1.0 / delta);
  return rhs / lead;
}

double mmd_power_threshold(std::size_t n, std::size_t m, double alpha_b, double delta, double kappa) {
  const double lead = two_sample_factor(n, m);
  if (!(lead > 0.0)) throw std::invalid_argument("leading factor 1 - 2/sqrt(n+m-1) is not positive");
  check_prob(alpha_b, "alpha_B");
  check_prob(delta, "delta");
  require_nonnegative(kappa, "kappa");
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  const double rhs = kappa * quantile_term(n, m, alpha_b, delta) + 4.0 * kappa / std::sqrt(nn) +
                     4.0 * kappa / std::sqrt(mm) + 12.0 * kappa / (nn + mm) * std::log(1.0 / delta);
  return rhs / lead;
}

double separation_hoeffding_factor(const SeparationInputs& in) { return two_sample_factor(in.n, in.m); }

double separation_hoeffding_rhs(const SeparationInputs& in) {
  check_prob(in.alpha_b, "alpha_B");
  check_prob(in.delta, "delta");
  const double n = static_cast<double>(in.n), m = static_cast<double>(in.m);
  return 2.0 / n * (in.Mn_P + in.Mn_Q) + 2.0 / m * (in.Mm_P + in.Mm_Q) +
         12.0 / (n + m) * std::log(1.0 / in.delta) + quantile_term(in.n, in.m, in.alpha_b, in.delta);
}

double separation_bernstein_factor(const SeparationInputs& in) {
  check_prob(in.alpha_b, "alpha_B");
  const double n = static_cast<double>(in.n), m = static_cast<double>(in.m);
  return two_sample_factor(in.n, in.m) -
         4.0 * std::sqrt(3.0 * (1.0 / n + 1.0 / m) * std::log(1.0 / in.alpha_b));
}

double separation_bernstein_rhs(const SeparationInputs& in) {
  check_prob(in.alpha_b, "alpha_B");
  check_prob(in.delta, "delta");
  const double n = static_cast<double>(in.n), m = static_cast<double>(in.m);
  const double ld = std::log(1.0 / in.delta);
  const double inner = 34.0 * (in.Mn_P + in.Mm_Q) + 2.0 * m / (n * (n + m)) * in.Mn_P * in.Mn_P +
                       2.0 * n / (m * (n + m)) * in.Mm_Q * in.Mm_Q + in.V + 4.0 * ld;
  return std::max(1.0 / n, 1.0 / m) * ld + 2.0 / n * (in.Mn_P + in.Mn_Q) +
         2.0 / m * (in.Mm_P + in.Mm_Q) + 12.0 / (n + m) * ld +
         std::sqrt(2.0 * (in.sigma2_P / n + in.sigma2_Q / m) * ld) +
         2.0 * (1.0 / n + 1.0 / m) * std::sqrt(std::log(1.0 / in.alpha_b)) * std::sqrt(inner);
}

bool separation_hoeffding_holds(const SeparationInputs& in) {
  return separation_hoeffding_factor(in) * in.d >= separation_hoeffding_rhs(in);
}

bool separation_bernstein_holds(const SeparationInputs& in) {
  return separation_bernstein_factor(in) * in.d >= separation_bernstein_rhs(in);
}

Bracket expectation_sandwich(double M_n, const SchemeStats& stats, bool symmetric) {
  require_nonnegative(M_n, "M_n");
  if (symmetric) return {stats.kappa * M_n, stats.sup_norm * M_n};
  return {stats.pos_mean * M_n, 2.0 * stats.sup_norm * M_n};
}

double dkw_mean_bound(std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  return std::sqrt(static_cast<double>(k) * std::numbers::pi / 2.0);
}

double quantile_boot_bound(double gamma, double alpha1, double alpha2, double alpha3,
                           double q_Mn_xi, double q_xi_inf, double M_n, double sigma2) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  if (!(alpha1 > 0.0 && alpha2 > 0.0 && alpha3 > 0.0) || !(alpha1 + alpha2 + alpha3 < 1.0))
    throw std::invalid_argument("alpha split must be positive with total below 1");
  require_nonnegative(q_Mn_xi, "q_Mn_xi");
  require_nonnegative(q_xi_inf, "q_xi_inf");
  require_nonnegative(M_n, "M_n");
  require_nonnegative(sigma2, "sigma2");
  const double x = std::log(2.0) - std::log(gamma * alpha1);
  return q_Mn_xi + std::sqrt(6.0 * q_Mn_xi * x) + 5.0 * x +
         q_xi_inf * std::max(19.0 * std::sqrt(x * (4.0 * M_n + sigma2)), 41.0 * x);
}

ConfRegionBounds conf_region_bounds(double R_hat, const SchemeStats& stats, double sigma_B,
                                    double M, std::size_t n, double x, bool symmetric) {
  require_nonnegative(R_hat, "R_hat");
  require_nonnegative(sigma_B, "sigma_B");
  require_nonnegative(M, "M");
  require_nonnegative(x, "x");
  require_positive(stats.kappa, "kappa");
  require_positive(stats.sup_norm, "sup_norm");
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  const double eta = symmetric ? 1.0 : 2.0;
  const double kappa = stats.kappa, b = stats.sup_norm, nn = static_cast<double>(n);
  const double noise = sigma_B * std::sqrt(2.0 * x / nn);
  const double xm = x * M / nn;
  constexpr int kGrid = 64;

  ConfRegionBounds out;
  out.upper = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kGrid; ++k) {
    const double theta = 1e-3 * std::pow(1e6, static_cast<double>(k) / (kGrid - 1));
    const double v = (1.0 + theta) * (1.0 + theta) * (eta / kappa) * R_hat + noise +
                     ((3.0 * eta + 1.0) / theta + 9.0 * eta + 1.0 + 9.0 * eta * theta +
                      3.0 * eta * theta * theta) * xm;
    if (v < out.upper) {
      out.upper = v;
      out.theta_up = theta;
    }
  }
  const double c = kappa / (eta * b);
  out.lower = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kGrid; ++k) {
    const double theta = static_cast<double>(k) / kGrid;
    const double v = (1.0 - theta) * (1.0 - theta) * R_hat / (eta * b) - noise -
                     (3.0 * c + 1.0) * xm / theta - (2.0 - 4.0 * c + theta * theta * c) * xm;
    if (v > out.lower) {
      out.lower = v;
      out.theta_lo = theta;
    }
  }
  out.lower = std::max(0.0, out.lower);
  return out;
}

double lp_sigma_upper(std::span<const double> sd, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
  double mx = 0.0;
  for (double s : sd) {
    require_nonnegative(s, "standard deviation");
    mx = std::max(mx, s);
  }
  if (std::isinf(p) || mx == 0.0) return mx;
  double acc = 0.0;
  for (double s : sd) acc += std::pow(s / mx, p);
  return mx * std::pow(acc, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Command-line dispatch

namespace {

struct Params {
  const std::map<std::string, double>& raw;
  std::vector<std::pair<std::string, double>> used;

  double get(const std::string& key) {
    auto it = raw.find(key);
    if (it == raw.end()) throw std::invalid_argument("missing parameter '" + key + "'");
    used.emplace_back(key, it->second);
    return it->second;
  }
  double get(const std::string& key, double fallback) {
    auto it = raw.find(key);
    const double v = it == raw.end() ? fallback : it->second;
    used.emplace_back(key, v);
    return v;
  }
  std::size_t count(const std::string& key) {
    const double v = get(key);
    if (v < 0 || v != std::floor(v)) throw std::invalid_argument("parameter '" + key + "' must be a non-negative integer");
    return static_cast<std::size_t>(v);
  }
  void finish() const {
    for (const auto& [k, v] : raw) {
      bool seen = false;
      for (const auto& u : used) seen = seen || u.first == k;
      if (!seen) throw std::invalid_argument("unknown parameter '" + k + "'");
    }
  }
};

using Handler = std::function<void(Params&, BoundReport&)>;

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> table = {
      {"self-bounding-upper",
       [](Params& p, BoundReport& r) { r.value = self_bounding_upper(p.get("E"), p.get("kappa"), p.get("x")); }},
      {"self-bounding-lower",
       [](Params& p, BoundReport& r) { r.value = self_bounding_lower(p.get("E"), p.get("kappa"), p.get("x")); }},
      {"exchangeable-deviation",
       [](Params& p, BoundReport& r) {
         r.value = exchangeable_deviation(p.get("u"), p.get("range"), p.get("v_plus"), p.get("w_l2"));
       }},
      {"exchangeable-mgf",
       [](Params& p, BoundReport& r) {
         r.value = exchangeable_mgf_exponent(p.get("theta"), p.get("range"), p.get("v_plus"), p.get("w_l2"));
         r.valid = p.get("n", 34) >= 34;
       }},
      {"efron-mgf",
       [](Params& p, BoundReport& r) {
         r.value = efron_mgf_exponent(p.get("lambda"), p.get("gbar"), p.get("v_plus"));
       }},
      {"tail-classic",
       [](Params& p, BoundReport& r) {
         r.value = tolstikhin_tail(p.get("t"), p.count("n"), p.get("sigma2"), TailVariant::classic);
       }},
      {"tail-exchangeable-pair",
       [](Params& p, BoundReport& r) {
         r.value = tolstikhin_tail(p.get("t"), p.count("n"), p.get("sigma2"), TailVariant::exchangeable_pair);
       }},
      {"permutation-mgf",
       [](Params& p, BoundReport& r) {
         const std::size_t n = p.count("n");
         r.value = conc_fun_permut_exponent(p.get("theta"), p.get("alpha0", 0.5), n,
                                            p.get("r", r_bound(n)), p.get("V_plus"));
       }},
      {"permutation-mgf-explicit",
       [](Params& p, BoundReport& r) {
         r.value = explicit_exponent(p.get("theta"), p.get("V_plus"));
         r.valid = p.get("n") >= 34;
       }},
      {"r-bound", [](Params& p, BoundReport& r) { r.value = r_bound(p.count("n")); }},
      {"general-deviation",
       [](Params& p, BoundReport& r) {
         r.value = general_deviation(p.get("x"), p.get("M_n_xi"), p.get("kappa_xi"), p.get("xi_inf"),
                                     p.get("M_n"), p.get("sigma2"));
       }},
      {"alpha-B",
       [](Params& p, BoundReport& r) {
         r.value = alpha_B(p.get("alpha"), p.get("delta"), p.count("B"));
         r.valid = r.value > 0.0 && r.value < 1.0;
       }},
      {"ks-power",
       [](Params& p, BoundReport& r) {
         r.value = ks_power_threshold(p.count("n"), p.count("m"), p.get("alpha_B"), p.get("delta"));
       }},
      {"mmd-power",
       [](Params& p, BoundReport& r) {
         r.value = mmd_power_threshold(p.count("n"), p.count("m"), p.get("alpha_B"), p.get("delta"),
                                       p.get("kappa"));
       }},
      {"separation-hoeffding",
       [](Params& p, BoundReport& r) {
         SeparationInputs in;
         in.n = p.count("n");
         in.m = p.count("m");
         in.Mn_P = p.get("Mn_P");
         in.Mn_Q = p.get("Mn_Q");
         in.Mm_P = p.get("Mm_P");
         in.Mm_Q = p.get("Mm_Q");
         in.delta = p.get("delta");
         in.alpha_b = p.get("alpha_B");
         in.d = p.get("d");
         r.value = separation_hoeffding_rhs(in) / separation_hoeffding_factor(in);
         r.valid = separation_hoeffding_holds(in);
       }},
      {"separation-bernstein",
       [](Params& p, BoundReport& r) {
         SeparationInputs in;
         in.n = p.count("n");
         in.m = p.count("m");
         in.Mn_P = p.get("Mn_P");
         in.Mn_Q = p.get("Mn_Q");
         in.Mm_P = p.get("Mm_P");
         in.Mm_Q = p.get("Mm_Q");
         in.delta = p.get("delta");
         in.alpha_b = p.get("alpha_B");
         in.d = p.get("d");
         in.sigma2_P = p.get("sigma2_P");
         in.sigma2_Q = p.get("sigma2_Q");
         in.V = p.get("V");
         const double lead = separation_bernstein_factor(in);
         r.value = lead > 0.0 ? separation_bernstein_rhs(in) / lead
                              : std::numeric_limits<double>::infinity();
         r.valid = separation_bernstein_holds(in);
       }},
      {"expectation-sandwich",
       [](Params& p, BoundReport& r) {
         SchemeStats st;
         st.kappa = p.get("kappa");
         st.pos_mean = p.get("pos_mean");
         st.sup_norm = p.get("sup_norm");
         const Bracket b = expectation_sandwich(p.get("M_n"), st, p.get("symmetric", 0) != 0);
         r.lower = b.lower;
         r.upper = b.upper;
         r.value = b.upper;
       }},
      {"dkw-mean", [](Params& p, BoundReport& r) { r.value = dkw_mean_bound(p.count("k")); }},
      {"quantile-boot",
       [](Params& p, BoundReport& r) {
         r.value = quantile_boot_bound(p.get("gamma"), p.get("alpha1"), p.get("alpha2"), p.get("alpha3"),
                                       p.get("q_Mn_xi"), p.get("q_xi_inf"), p.get("M_n"), p.get("sigma2"));
       }},
      {"conf-region",
       [](Params& p, BoundReport& r) {
         SchemeStats st;
         st.kappa = p.get("kappa");
         st.sup_norm = p.get("sup_norm");
         const ConfRegionBounds c = conf_region_bounds(p.get("R_hat"), st, p.get("sigma_B"), p.get("M"),
                                                       p.count("n"), p.get("x"), p.get("symmetric", 0) != 0);
         r.lower = c.lower;
         r.upper = c.upper;
         r.value = c.upper;
       }},
  };
  return table;
}

}  // namespace

std::vector<std::string> bound_tags() {
  std::vector<std::string> tags;
  for (const auto& [tag, handler] : handlers()) tags.push_back(tag);
  return tags;
}

BoundReport evaluate_bound(const std::string& tag, const std::map<std::string, double>& params) {
  for (const auto& [name, handler] : handlers()) {
    if (name != tag) continue;
    Params p{params, {}};
    BoundReport r;
    r.tag = tag;
    handler(p, r);
    p.finish();
    r.inputs = p.used;
    if (r.valid && !std::isfinite(r.value)) r.valid = false;
    return r;
  }
  throw std::invalid_argument("unknown bound tag '" + tag + "'");
}

}  // namespace exchboot
