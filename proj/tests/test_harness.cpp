#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "exchboot/harness.hpp"

using namespace exchboot;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path p = fs::temp_directory_path() / "exchboot_harness_test";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("CSV parsing") {
  const Sample a = parse_sample("1.0\n2.0\n");
  CHECK(a.dim == 1);
  CHECK(a.values == std::vector<double>{1.0, 2.0});
  const Sample b = parse_sample("1,2\n3,4\n");
  CHECK(b.dim == 2);
  CHECK(b.size() == 2);
  const std::string err = error_of([] { parse_sample("1,a\n"); });
  CHECK(err.find("row 1") != std::string::npos);
  CHECK(err.find("column 2") != std::string::npos);
  CHECK_THROWS(parse_sample("1,2\n3\n"));
  CHECK_THROWS(parse_sample("1,inf\n"));
  CHECK_THROWS(parse_sample(""));
  CsvFormat hdr;
  hdr.header = true;
  hdr.delimiter = ';';
  CHECK(parse_sample("x;y\n1;2\n", hdr).values == std::vector<double>{1, 2});
  CsvFormat grp;
  grp.group_column = 1;
  const Sample g = parse_sample("5,1\n6,0\n7,1\n8,0\n", grp);
  CHECK(g.values == std::vector<double>{6, 8, 5, 7});
  REQUIRE(g.group_split.has_value());
  CHECK(*g.group_split == 2);
  CHECK_THROWS(parse_sample("5,2\n", grp));
}

TEST_CASE("CSV round trip is exact") {
  Philox4x32 rng = draw_rng(1, 0);
  Sample s{{}, 3, std::nullopt};
  for (int i = 0; i < 300; ++i) s.values.push_back(standard_normal(rng) * std::pow(10.0, double(i % 40) - 20));
  s.values.push_back(5e-324);
  s.values.push_back(-0.0);
  s.values.push_back(1.7976931348623157e308);
  const fs::path p = temp_dir() / "round.csv";
  write_sample_csv(s, p.string());
  const Sample back = load_sample(p.string());
  CHECK(back.dim == s.dim);
  CHECK(back.values == s.values);
  CHECK_THROWS(load_sample((temp_dir() / "missing.csv").string()));
}

TEST_CASE("matrix loading") {
  const fs::path p = temp_dir() / "m.csv";
  std::ofstream(p) << "1,0.5,-1\n0,0,0.25\n";
  const Eigen::MatrixXd m = load_matrix(p.string());
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m(0, 2) == -1.0);
}

TEST_CASE("distributions") {
  CHECK(parse_distribution("uniform").base == "uniform");
  const Distribution loc = parse_distribution("location:normal:0.5");
  CHECK(loc.shift == 0.5);
  CHECK(parse_distribution("scale:two_point:2").scale == 2.0);
  CHECK_THROWS(parse_distribution("cauchy"));
  CHECK_THROWS(parse_distribution("location:normal:x"));
  CHECK_THROWS(parse_distribution("scale:uniform:-1"));
  CHECK(distribution_name(loc) == "location:normal:0.5");
  Philox4x32 rng = draw_rng(4, 0);
  const Sample tp = draw_sample(parse_distribution("two_point"), 2000, rng);
  double ones = 0;
  for (double v : tp.values) {
    CHECK((v == 0.0 || v == 1.0));
    ones += v;
  }
  CHECK(std::abs(ones / 2000 - 0.5) < 4 * std::sqrt(0.25 / 2000));
  const Sample sh = draw_sample(parse_distribution("location:uniform:3"), 500, rng);
  for (double v : sh.values) CHECK((v >= 3.0 && v < 4.0));
}

TEST_CASE("reports") {
  const VerificationReport r = make_report("x/y", 5, 100, 3, 0.05, 0.03, 0.01, 12.5);
  CHECK(r.pass);
  CHECK_FALSE(make_report("x", 5, 100, 9, 0.05, 0.07, 0.01, 1).pass);
  CHECK(binomial_tolerance(0.05, 10000) == doctest::Approx(3 * std::sqrt(0.05 * 0.95 / 10000)));
  const auto j = report_to_json(r);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"experiment", "seed", "trials", "bound", "empirical", "pass", "wall_time_ms"});
  const fs::path p = temp_dir() / "r.json";
  emit_report(r, p.string());
  const VerificationReport back = report_from_json(nlohmann::json::parse(slurp(p)));
  CHECK(back.experiment == r.experiment);
  CHECK(back.seed == r.seed);
  CHECK(back.trials == r.trials);
  CHECK(back.bound == r.bound);
  CHECK(back.empirical == r.empirical);
  CHECK(back.pass == r.pass);
  CHECK(back.wall_time_ms == r.wall_time_ms);
  const std::string err = error_of([&] { emit_report(r, (temp_dir() / "nope" / "r.json").string()); });
  CHECK(err.find("does not exist") != std::string::npos);
}

TEST_CASE("identical seeds give identical report files apart from timing") {
  VPlusConfig c;
  c.instances = 20;
  auto strip = [](std::vector<VerificationReport> v) {
    for (auto& r : v) r.wall_time_ms = 0;
    return v;
  };
  const fs::path a = temp_dir() / "a.json", b = temp_dir() / "b.json";
  emit_reports(strip(verify_vplus(c, 3)), a.string());
  emit_reports(strip(verify_vplus(c, 3)), b.string());
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("config reader") {
  ConfigReader r(nlohmann::json::parse(R"({"n": 5, "alpha": 0.1, "B": [9, 19], "statistic": "ks", "strict": true})"));
  Type1Config c;
  read_config(r, c);
  r.finish();
  CHECK(c.n == 5);
  CHECK(c.alpha == 0.1);
  CHECK(c.B == std::vector<std::size_t>{9, 19});
  CHECK(c.statistic == "ks");
  CHECK(c.strict);
  ConfigReader bad(nlohmann::json::parse(R"({"n": 5, "tirals": 10})"));
  Type1Config d;
  read_config(bad, d);
  const std::string err = error_of([&] { bad.finish(); });
  CHECK(err.find("tirals") != std::string::npos);
  ConfigReader wrong(nlohmann::json::parse(R"({"n": -1})"));
  CHECK_THROWS(read_config(wrong, d));
  ConfigReader wrong2(nlohmann::json::parse(R"({"alpha": "x"})"));
  CHECK_THROWS(read_config(wrong2, d));
  CHECK_THROWS(ConfigReader(nlohmann::json::parse(R"({"a": {"b": 1}})")));
  CHECK_THROWS(ConfigReader(nlohmann::json::parse("[1]")));
}

TEST_CASE("experiments are reproducible and their degenerate cases pass") {
  Type1Config t;
  t.trials = 200;
  t.B = {19};
  const auto r1 = verify_type1(t, 8, 1), r2 = verify_type1(t, 8, 3);
  CHECK(r1[0].violations == r2[0].violations);
  t.alpha = 1.0;
  const auto always = verify_type1(t, 8, 1);
  CHECK(always[0].empirical == 1.0);
  CHECK(always[0].pass);

  SelfBoundingConfig sb;
  sb.constant_class = true;
  sb.trials = 200;
  sb.pilot = 50;
  sb.inner_B = 20;
  sb.rows = 5;
  for (const auto& r : verify_self_bounding(sb, 2)) {
    CHECK(r.violations == 0);
    CHECK(r.pass);
  }

  TolstikhinConfig tc;
  tc.statistic = "constant";
  tc.draws = tc.mean_draws = 1000;
  tc.sigma_samples = 20;
  for (const auto& r : verify_tolstikhin(tc, 2)) CHECK(r.violations == 0);
  tc.statistic = "ks";
  tc.sigma2_inflation = 10.0;
  for (const auto& r : verify_tolstikhin(tc, 2)) CHECK(r.pass);

  SandwichConfig sw;
  sw.constant_class = true;
  sw.trials = 200;
  for (const auto& r : verify_sandwich(sw, 2)) {
    CHECK(std::abs(r.empirical) < 1e-9);
    CHECK(std::abs(r.bound) < 1e-9);
    CHECK(r.pass);
  }

  DkwConfig dk;
  dk.k = {1};
  dk.trials = 20000;
  const auto k1 = verify_dkw_mean(dk, 4);
  CHECK(std::abs(k1[0].empirical - 0.75) < 4 * std::sqrt(1.0 / 48 / 20000));
  CHECK(k1[0].pass);

  QuantileLemmaConfig q;
  q.instances = 50;
  const auto ql = verify_quantile_lemma(q, 1);
  CHECK(ql[0].violations == 0);
  CHECK(ql[0].trials == 50 * 81);
}

TEST_CASE("named experiments") {
  CHECK(verification_names().back() == "all");
  const auto r = run_verification("vplus", 1, 10, ConfigReader(nlohmann::json::parse(R"({"n_max": 4})")), 1);
  CHECK(r.size() == 2);
  CHECK(r[0].trials == 10);
  CHECK_THROWS(run_verification("vplus", 1, std::nullopt, ConfigReader(nlohmann::json::parse(R"({"bogus": 1})")), 1));
  CHECK_THROWS(run_verification("nothing", 1, std::nullopt, ConfigReader(), 1));
}
