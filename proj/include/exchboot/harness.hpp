#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "exchboot/bounds.hpp"
#include "exchboot/function_classes.hpp"
#include "exchboot/rng.hpp"

namespace exchboot {

// ---------------------------------------------------------------- data files

struct CsvFormat {
  char delimiter = ',';
  bool header = false;
  // Column holding a 0/1 label; rows labelled 0 come first in the result and
  // group_split marks where label-1 rows begin.
  std::optional<std::size_t> group_column;
};

Sample load_sample(const std::string& path, const CsvFormat& format = {});
Sample parse_sample(const std::string& text, const CsvFormat& format = {},
                    const std::string& source = "<input>");
Eigen::MatrixXd load_matrix(const std::string& path, const CsvFormat& format = {});
// Writes one observation per line with round-trip precision.
void write_sample_csv(const Sample& sample, const std::string& path, char delimiter = ',');

// ---------------------------------------------------------------- generators

// "uniform" (U[0,1]), "normal", "two_point" (0 or 1 with equal odds), and the
// alternatives "location:<base>:<shift>" and "scale:<base>:<factor>".
struct Distribution {
  std::string base = "uniform";
  double shift = 0.0;
  double scale = 1.0;
};
Distribution parse_distribution(const std::string& spec);
std::string distribution_name(const Distribution& d);
double draw(const Distribution& d, Philox4x32& rng);
Sample draw_sample(const Distribution& d, std::size_t n, Philox4x32& rng);

// ---------------------------------------------------------------- reports

struct VerificationReport {
  std::string experiment;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double bound = 0.0;
  double empirical = 0.0;
  double tolerance = 0.0;  // allowed excess over the bound
  bool pass = false;
  double wall_time_ms = 0.0;
};

// Fills pass = empirical <= bound + tolerance.
VerificationReport make_report(std::string experiment, std::uint64_t seed, std::size_t trials,
                               std::size_t violations, double bound, double empirical,
                               double tolerance, double wall_time_ms);
// Three binomial standard errors at success probability p.
double binomial_tolerance(double p, std::size_t trials);

nlohmann::ordered_json report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const nlohmann::json& j);
nlohmann::ordered_json bound_report_to_json(const BoundReport& r);

void emit_report(const VerificationReport& report, const std::string& path);
void emit_reports(const std::vector<VerificationReport>& reports, const std::string& path);
void write_json_file(const nlohmann::ordered_json& doc, const std::string& path);
void write_text_file(const std::string& text, const std::string& path);

// ---------------------------------------------------------------- configuration

// Flat JSON object; every key must be consumed by the experiment reading it.
class ConfigReader {
public:
  ConfigReader() : doc_(nlohmann::json::object()) {}
  explicit ConfigReader(nlohmann::json doc);
  static ConfigReader from_file(const std::string& path);

  void read(const std::string& key, std::size_t& out);
  void read(const std::string& key, double& out);
  void read(const std::string& key, bool& out);
  void read(const std::string& key, std::string& out);
  void read(const std::string& key, std::vector<std::size_t>& out);
  void read(const std::string& key, std::vector<double>& out);
  void read(const std::string& key, std::vector<std::string>& out);
  bool has(const std::string& key) const;
  // Throws listing every key that no reader asked for.
  void finish() const;

private:
  const nlohmann::json* find(const std::string& key);
  nlohmann::json doc_;
  std::vector<std::string> consumed_;
};

// ---------------------------------------------------------------- experiments

struct Type1Config {
  std::size_t n = 20;
  std::size_t m = 20;
  std::vector<std::size_t> B{9, 99, 999};
  double alpha = 0.05;
  std::size_t trials = 10000;
  std::string distribution = "uniform";
  std::string statistic = "wass1";  // ks | wass1
  bool strict = false;
};

struct SelfBoundingConfig {
  std::size_t n = 100;
  std::size_t rows = 50;
  std::size_t categories = 20;
  std::size_t trials = 5000;
  std::size_t pilot = 2000;
  std::size_t inner_B = 200;
  std::vector<double> x{1.0, 2.0};
  bool constant_class = false;
};

struct TolstikhinConfig {
  std::size_t n = 20;
  std::size_t m = 20;
  std::size_t draws = 100000;
  std::size_t mean_draws = 100000;
  std::size_t sigma_samples = 2000;
  std::vector<double> levels{0.05, 0.20};
  std::string statistic = "ks";  // ks | wass1 | constant
  std::string distribution = "uniform";
  double sigma2_inflation = 1.0;
};

struct SandwichConfig {
  std::size_t n = 50;
  std::size_t rows = 20;
  std::size_t categories = 10;
  std::size_t trials = 4000;
  std::vector<std::string> schemes{"efron", "two_sample", "balanced_signs"};
  std::vector<std::string> distributions{"uniform", "skewed"};
  bool constant_class = false;
};

struct QuantileLemmaConfig {
  std::size_t instances = 500;
  std::size_t max_support = 5;
};

struct DkwConfig {
  std::vector<std::size_t> k{10, 100};
  std::size_t trials = 10000;
};

struct VPlusConfig {
  std::size_t instances = 200;
  std::size_t n_min = 3;
  std::size_t n_max = 6;
};

void read_config(ConfigReader& r, Type1Config& c);
void read_config(ConfigReader& r, SelfBoundingConfig& c);
void read_config(ConfigReader& r, TolstikhinConfig& c);
void read_config(ConfigReader& r, SandwichConfig& c);
void read_config(ConfigReader& r, QuantileLemmaConfig& c);
void read_config(ConfigReader& r, DkwConfig& c);
void read_config(ConfigReader& r, VPlusConfig& c);

std::vector<VerificationReport> verify_type1(const Type1Config& c, std::uint64_t seed, unsigned threads = 0);
std::vector<VerificationReport> verify_self_bounding(const SelfBoundingConfig& c, std::uint64_t seed,
                                                     unsigned threads = 0);
std::vector<VerificationReport> verify_tolstikhin(const TolstikhinConfig& c, std::uint64_t seed,
                                                  unsigned threads = 0);
std::vector<VerificationReport> verify_sandwich(const SandwichConfig& c, std::uint64_t seed,
                                                unsigned threads = 0);
std::vector<VerificationReport> verify_quantile_lemma(const QuantileLemmaConfig& c, std::uint64_t seed);
std::vector<VerificationReport> verify_dkw_mean(const DkwConfig& c, std::uint64_t seed, unsigned threads = 0);
std::vector<VerificationReport> verify_vplus(const VPlusConfig& c, std::uint64_t seed);

// Names accepted by run_verification: the experiments above plus "all".
std::vector<std::string> verification_names();
// Runs one named experiment with defaults overridden by `config` (and by
// `trials` when given); "all" runs every experiment with its defaults.
std::vector<VerificationReport> run_verification(const std::string& name, std::uint64_t seed,
                                                 std::optional<std::size_t> trials,
                                                 ConfigReader config, unsigned threads = 0);

}  // namespace exchboot
