#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "exchboot/applications.hpp"
#include "exchboot/bounds.hpp"
#include "exchboot/harness.hpp"
#include "exchboot/parallel.hpp"
#include "exchboot/perm_walk.hpp"

using namespace exchboot;
using nlohmann::ordered_json;

namespace {

void emit(const ordered_json& doc, const std::string& out) {
  std::cout << doc.dump(2) << '\n';
  if (!out.empty()) write_json_file(doc, out);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return parts;
    start = pos + 1;
  }
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw std::invalid_argument(what + ": '" + text + "' is not a number");
  return v;
}

// ks | wass1 | mmd:<gaussian|laplace>[:<bandwidth>] | finite:<csv>
StatisticKind parse_statistic(const std::string& spec, const Sample& pooled) {
  const auto parts = split(spec, ':');
  if (spec == "ks") return KsStatistic{};
  if (spec == "wass1") return Wasserstein1Statistic{};
  if (parts[0] == "mmd") {
    MmdStatistic k;
    if (parts.size() >= 2) {
      if (parts[1] == "gaussian") k.kernel = KernelKind::gaussian;
      else if (parts[1] == "laplace") k.kernel = KernelKind::laplace;
      else throw std::invalid_argument("unknown kernel '" + parts[1] + "' (gaussian | laplace)");
    }
    k.bandwidth = parts.size() >= 3 ? parse_number(parts[2], "bandwidth") : median_heuristic_bandwidth(pooled);
    if (parts.size() > 3) throw std::invalid_argument("malformed statistic '" + spec + "'");
    return k;
  }
  if (parts[0] == "finite" && parts.size() == 2) {
    FiniteStatistic f;
    f.values = load_matrix(parts[1]);
    return f;
  }
  throw std::invalid_argument("unknown statistic '" + spec + "' (ks | wass1 | mmd:<kernel>[:<h>] | finite:<csv>)");
}

WeightScheme parse_scheme(const std::string& name, std::size_t n) {
  if (name == "efron") return EfronScheme{n};
  if (name == "balanced_signs") return BalancedSignsScheme{n};
  throw std::invalid_argument("unknown scheme '" + name + "' (efron | balanced_signs)");
}

ordered_json outcome_json(const TestOutcome& o, const std::string& stat, std::uint64_t seed, double ms) {
  ordered_json j;
  j["statistic_kind"] = stat;
  j["scheme"] = "two_sample_permutation";
  j["statistic"] = o.statistic;
  j["quantile"] = o.quantile;
  j["reject"] = o.reject;
  j["alpha"] = o.alpha;
  j["B"] = o.B;
  j["rank"] = o.rank;
  j["rank_exceeds_B"] = o.rank_exceeds_B;
  j["strict"] = o.strict;
  j["seed"] = seed;
  j["wall_time_ms"] = ms;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exchangeable-weight bootstrap and permutation tools"};
  app.require_subcommand(1);
  std::string out;

  // twosample
  auto* two = app.add_subcommand("twosample", "Permutation two-sample test");
  std::string x_path, y_path, stat_spec = "ks";
  TwoSampleSpec spec;
  two->add_option("--x", x_path, "CSV with the first sample")->required();
  two->add_option("--y", y_path, "CSV with the second sample")->required();
  two->add_option("--class", stat_spec, "ks | wass1 | mmd:<gaussian|laplace>[:<h>] | finite:<csv>");
  two->add_option("--B", spec.B, "Number of random permutations");
  two->add_option("--alpha", spec.alpha, "Level")->check(CLI::Range(0.0, 1.0));
  two->add_option("--seed", spec.seed, "Master seed")->required();
  two->add_flag("--strict", spec.strict, "Reject only on statistic > quantile");
  two->add_option("--out", out, "Also write the JSON result here");

  // confregion
  auto* conf = app.add_subcommand("confregion", "Confidence region for the mean in lp norm");
  std::string data_path, scheme_name = "balanced_signs";
  double p = 2.0, alpha = 0.05, M = 0.0;
  std::size_t B = 1000;
  std::uint64_t seed = 0;
  bool symmetric = false;
  conf->add_option("--data", data_path, "CSV, one observation per row")->required();
  conf->add_option("--p", p, "Norm exponent (>= 1 or inf)");
  conf->add_option("--alpha", alpha, "Level")->check(CLI::Range(0.0, 1.0));
  conf->add_option("--M", M, "Bound on the lp norm of centred observations")->required();
  conf->add_option("--B", B, "Number of weight draws");
  conf->add_option("--seed", seed, "Master seed")->required();
  conf->add_option("--scheme", scheme_name, "efron | balanced_signs");
  conf->add_flag("--symmetric", symmetric, "Data distribution is symmetric about its mean");
  conf->add_option("--out", out, "Also write the JSON result here");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "Evaluate a closed-form bound");
  std::string tag;
  std::vector<std::string> params;
  bnd->add_option("tag", tag, "Bound name")->required();
  bnd->add_option("--param", params, "key=value (repeatable)");
  bnd->add_flag_callback("--list", [] {
    for (const auto& t : bound_tags()) std::cout << t << '\n';
    std::exit(0);
  }, "List the bound names");
  bnd->add_option("--out", out, "Also write the JSON result here");

  // walk
  auto* walk = app.add_subcommand("walk", "Random walks on permutations");
  walk->require_subcommand(1);
  auto* tv = walk->add_subcommand("tv", "Exact total-variation curve of the lazy transposition walk (CSV)");
  std::size_t walk_n = 5, tmax = 100;
  double alpha0 = 0.5;
  tv->add_option("--n", walk_n, "Number of points (<= 7)");
  tv->add_option("--alpha0", alpha0, "Holding probability");
  tv->add_option("--tmax", tmax, "Last step");
  tv->add_option("--out", out, "Also write the CSV here");
  auto* g1 = walk->add_subcommand("g1", "First-passage generating function");
  double s = 1.0;
  std::size_t g1_trials = 100000;
  std::uint64_t g1_seed = 0;
  g1->add_option("--s", s, "Argument")->required();
  g1->add_option("--trials", g1_trials, "Monte Carlo trials");
  g1->add_option("--seed", g1_seed, "Master seed");
  g1->add_option("--out", out, "Also write the JSON result here");

  // verify
  auto* ver = app.add_subcommand("verify", "Run Monte Carlo and exact soundness checks");
  std::string ver_name, config_path;
  std::uint64_t ver_seed = 0;
  std::optional<std::size_t> ver_trials;
  ver->add_option("name", ver_name, "Experiment")->required()->check(CLI::IsMember(verification_names()));
  ver->add_option("--seed", ver_seed, "Master seed")->required();
  ver->add_option("--trials", ver_trials, "Override the trial count");
  ver->add_option("--config", config_path, "Flat JSON object overriding experiment settings");
  ver->add_option("--out", out, "Also write the JSON reports here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*two) {
      const Sample x = load_sample(x_path), y = load_sample(y_path);
      spec.statistic = parse_statistic(stat_spec, concat_samples(x, y));
      const auto start = std::chrono::steady_clock::now();
      const TestOutcome o = run_two_sample(x, y, spec);
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      emit(outcome_json(o, statistic_name(spec.statistic), spec.seed, ms), out);
      return 0;
    }
    if (*conf) {
      const Sample X = load_sample(data_path);
      ConfRegionOptions opts;
      opts.symmetric = symmetric;
      const ConfidenceRegion r =
          mean_confidence_region(X, p, parse_scheme(scheme_name, X.size()), B, alpha, M, seed, opts);
      ordered_json j;
      j["center"] = r.center;
      j["p"] = r.p;
      j["alpha"] = r.alpha;
      j["radius_upper"] = r.radius_upper;
      j["radius_lower"] = r.radius_lower;
      j["R_hat"] = r.R_hat;
      j["R_hat_se"] = r.R_hat_se;
      j["sigma_hat_lp"] = r.sigma_hat_lp;
      j["M"] = r.M;
      j["x"] = r.x;
      j["B"] = r.B;
      j["seed"] = r.seed;
      j["symmetric"] = r.symmetric;
      emit(j, out);
      return 0;
    }
    if (*bnd) {
      std::map<std::string, double> values;
      for (const auto& kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--param expects key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        if (values.count(key)) throw std::invalid_argument("parameter '" + key + "' given twice");
        values[key] = parse_number(kv.substr(eq + 1), key);
      }
      const BoundReport r = evaluate_bound(tag, values);
      emit(bound_report_to_json(r), out);
      return r.valid ? 0 : 1;
    }
    if (*tv) {
      const std::vector<double> curve = tv_mixing_curve(walk_n, alpha0, tmax);
      std::string csv = "t,tv\n";
      char buf[64];
      for (std::size_t t = 0; t < curve.size(); ++t) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", t, curve[t]);
        csv += buf;
      }
      std::cout << csv;
      if (!out.empty()) {
        write_text_file(csv, out);
      }
      return 0;
    }
    if (*g1) {
      ordered_json j;
      j["s"] = s;
      j["radius"] = g1_radius();
      j["closed_form"] = g1_closed_form(s);
      const MeanEstimate mc = g1_monte_carlo(s, g1_trials, g1_seed);
      j["monte_carlo"] = mc.mean;
      j["monte_carlo_se"] = mc.std_error;
      j["trials"] = g1_trials;
      j["seed"] = g1_seed;
      emit(j, out);
      return 0;
    }
    if (*ver) {
      ConfigReader config = config_path.empty() ? ConfigReader() : ConfigReader::from_file(config_path);
      const auto reports = run_verification(ver_name, ver_seed, ver_trials, std::move(config), thread_count());
      bool all_pass = true;
      ordered_json arr = ordered_json::array();
      for (const auto& r : reports) {
        all_pass = all_pass && r.pass;
        arr.push_back(report_to_json(r));
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.experiment << "  empirical=" << r.empirical
                  << " bound=" << r.bound << '\n';
      }
      emit(arr, out);
      return all_pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
