#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "exchboot/harness.hpp"

namespace exchboot {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, delimiter)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == delimiter) out.emplace_back();
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Table {
  std::vector<std::vector<double>> rows;
};

Table parse_table(const std::string& text, const CsvFormat& format, const std::string& source) {
  Table t;
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  std::size_t width = 0;
  bool skipped_header = !format.header;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    const std::vector<std::string> cells = split(line, format.delimiter);
    std::vector<double> values;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string& cell = cells[c];
      double v = 0.0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      const auto res = std::from_chars(first, last, v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != last)
        throw std::invalid_argument(source + ": row " + std::to_string(row) + ", column " +
                                    std::to_string(c + 1) + ": cannot parse '" + cell + "' as a number");
      if (!std::isfinite(v))
        throw std::invalid_argument(source + ": row " + std::to_string(row) + ", column " +
                                    std::to_string(c + 1) + ": non-finite value");
      values.push_back(v);
    }
    if (width == 0) {
      width = values.size();
    } else if (values.size() != width) {
      throw std::invalid_argument(source + ": row " + std::to_string(row) + " has " +
                                  std::to_string(values.size()) + " columns, expected " +
                                  std::to_string(width));
    }
    t.rows.push_back(std::move(values));
  }
  if (t.rows.empty()) throw std::invalid_argument(source + ": no data rows");
  return t;
}

bool parent_exists(const std::string& path) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  return parent.empty() || std::filesystem::is_directory(parent);
}

std::ofstream open_output(const std::string& path) {
  if (!parent_exists(path))
    throw std::runtime_error("cannot write '" + path + "': directory '" +
                             std::filesystem::path(path).parent_path().string() + "' does not exist");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

// ---------------------------------------------------------------- data files

Sample parse_sample(const std::string& text, const CsvFormat& format, const std::string& source) {
  const Table t = parse_table(text, format, source);
  const std::size_t width = t.rows.front().size();
  Sample s;
  if (!format.group_column) {
    s.dim = width;
    for (const auto& r : t.rows) s.values.insert(s.values.end(), r.begin(), r.end());
    validate_sample(s);
    return s;
  }
  const std::size_t gc = *format.group_column;
  if (gc >= width) throw std::invalid_argument(source + ": group column " + std::to_string(gc + 1) + " out of range");
  if (width < 2) throw std::invalid_argument(source + ": group column leaves no data columns");
  s.dim = width - 1;
  std::vector<double> second;
  std::size_t first_count = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double label = t.rows[i][gc];
    if (label != 0.0 && label != 1.0)
      throw std::invalid_argument(source + ": data row " + std::to_string(i + 1) + ", column " +
                                  std::to_string(gc + 1) + ": group label must be 0 or 1");
    auto& dest = label == 0.0 ? s.values : second;
    for (std::size_t c = 0; c < width; ++c)
      if (c != gc) dest.push_back(t.rows[i][c]);
    if (label == 0.0) ++first_count;
  }
  s.values.insert(s.values.end(), second.begin(), second.end());
  s.group_split = first_count;
  validate_sample(s);
  return s;
}

Sample load_sample(const std::string& path, const CsvFormat& format) {
  return parse_sample(read_file(path), format, path);
}

Eigen::MatrixXd load_matrix(const std::string& path, const CsvFormat& format) {
  const Table t = parse_table(read_file(path), format, path);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(t.rows.size()),
                    static_cast<Eigen::Index>(t.rows.front().size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < t.rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t.rows[i][j];
  return m;
}

void write_sample_csv(const Sample& sample, const std::string& path, char delimiter) {
  validate_sample(sample);
  std::ofstream out = open_output(path);
  char buf[40];
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (std::size_t j = 0; j < sample.dim; ++j) {
      if (j > 0) out << delimiter;
      const auto res = std::to_chars(buf, buf + sizeof buf, sample.values[i * sample.dim + j]);
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

// ---------------------------------------------------------------- generators

Distribution parse_distribution(const std::string& spec) {
  auto check_base = [&](const std::string& b) {
    if (b != "uniform" && b != "normal" && b != "two_point")
      throw std::invalid_argument("unknown distribution '" + spec + "'");
  };
  Distribution d;
  const auto first = spec.find(':');
  if (first == std::string::npos) {
    check_base(spec);
    d.base = spec;
    return d;
  }
  const std::string kind = spec.substr(0, first);
  const auto second = spec.find(':', first + 1);
  if (second == std::string::npos || (kind != "location" && kind != "scale"))
    throw std::invalid_argument("distribution '" + spec +
                                "' is not of the form location:<base>:<shift> or scale:<base>:<factor>");
  d.base = spec.substr(first + 1, second - first - 1);
  check_base(d.base);
  double v = 0.0;
  const std::string num = spec.substr(second + 1);
  const auto res = std::from_chars(num.data(), num.data() + num.size(), v);
  if (res.ec != std::errc() || res.ptr != num.data() + num.size() || !std::isfinite(v))
    throw std::invalid_argument("distribution '" + spec + "' has a malformed parameter");
  if (kind == "location") {
    d.shift = v;
  } else {
    if (!(v > 0.0)) throw std::invalid_argument("scale factor must be positive");
    d.scale = v;
  }
  return d;
}

namespace {
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}
}  // namespace

std::string distribution_name(const Distribution& d) {
  if (d.shift != 0.0) return "location:" + d.base + ":" + shortest(d.shift);
  if (d.scale != 1.0) return "scale:" + d.base + ":" + shortest(d.scale);
  return d.base;
}

double draw(const Distribution& d, Philox4x32& rng) {
  double v;
  if (d.base == "uniform")
    v = uniform01(rng);
  else if (d.base == "normal")
    v = standard_normal(rng);
  else
    v = static_cast<double>(rng() >> 63);
  return d.scale * v + d.shift;
}

Sample draw_sample(const Distribution& d, std::size_t n, Philox4x32& rng) {
  Sample s;
  s.dim = 1;
  s.values.resize(n);
  for (double& v : s.values) v = draw(d, rng);
  return s;
}

// ---------------------------------------------------------------- reports

double binomial_tolerance(double p, std::size_t trials) {
  if (trials == 0) return 0.0;
  const double q = std::clamp(p, 0.0, 1.0);
  return 3.0 * std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
}

VerificationReport make_report(std::string experiment, std::uint64_t seed, std::size_t trials,
                               std::size_t violations, double bound, double empirical,
                               double tolerance, double wall_time_ms) {
  VerificationReport r;
  r.experiment = std::move(experiment);
  r.seed = seed;
  r.trials = trials;
  r.violations = violations;
  r.bound = bound;
  r.empirical = empirical;
  r.tolerance = tolerance;
  r.pass = empirical <= bound + tolerance;
  r.wall_time_ms = wall_time_ms;
  return r;
}

nlohmann::ordered_json report_to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["experiment"] = r.experiment;
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["bound"] = r.bound;
  j["empirical"] = r.empirical;
  j["pass"] = r.pass;
  j["wall_time_ms"] = r.wall_time_ms;
  return j;
}

VerificationReport report_from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.experiment = j.at("experiment").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.trials = j.at("trials").get<std::size_t>();
  r.bound = j.at("bound").get<double>();
  r.empirical = j.at("empirical").get<double>();
  r.pass = j.at("pass").get<bool>();
  r.wall_time_ms = j.at("wall_time_ms").get<double>();
  return r;
}

nlohmann::ordered_json bound_report_to_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["tag"] = r.tag;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = v;
  j["inputs"] = inputs;
  if (std::isfinite(r.value))
    j["value"] = r.value;
  else
    j["value"] = nullptr;
  if (r.lower) j["lower"] = *r.lower;
  if (r.upper) j["upper"] = *r.upper;
  j["valid"] = r.valid;
  return j;
}

void write_json_file(const nlohmann::ordered_json& doc, const std::string& path) {
  std::ofstream out = open_output(path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out = open_output(path);
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void emit_report(const VerificationReport& report, const std::string& path) {
  write_json_file(report_to_json(report), path);
}

void emit_reports(const std::vector<VerificationReport>& reports, const std::string& path) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  write_json_file(arr, path);
}

// ---------------------------------------------------------------- configuration

ConfigReader::ConfigReader(nlohmann::json doc) : doc_(std::move(doc)) {
  if (!doc_.is_object()) throw std::invalid_argument("configuration must be a JSON object");
  for (const auto& [k, v] : doc_.items())
    if (v.is_object()) throw std::invalid_argument("configuration key '" + k + "' is nested; use a flat object");
}

ConfigReader ConfigReader::from_file(const std::string& path) {
  const std::string text = read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return ConfigReader(std::move(doc));
}

bool ConfigReader::has(const std::string& key) const { return doc_.contains(key); }

const nlohmann::json* ConfigReader::find(const std::string& key) {
  consumed_.push_back(key);
  auto it = doc_.find(key);
  return it == doc_.end() ? nullptr : &*it;
}

namespace {

[[noreturn]] void type_error(const std::string& key, const char* want) {
  throw std::invalid_argument("configuration key '" + key + "' must be " + want);
}

std::size_t as_count(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    type_error(key, "a non-negative integer");
  return v.get<std::size_t>();
}

}  // namespace

void ConfigReader::read(const std::string& key, std::size_t& out) {
  if (const auto* v = find(key)) out = as_count(*v, key);
}

void ConfigReader::read(const std::string& key, double& out) {
  if (const auto* v = find(key)) {
    if (!v->is_number()) type_error(key, "a number");
    out = v->get<double>();
  }
}

void ConfigReader::read(const std::string& key, bool& out) {
  if (const auto* v = find(key)) {
    if (!v->is_boolean()) type_error(key, "true or false");
    out = v->get<bool>();
  }
}

void ConfigReader::read(const std::string& key, std::string& out) {
  if (const auto* v = find(key)) {
    if (!v->is_string()) type_error(key, "a string");
    out = v->get<std::string>();
  }
}

void ConfigReader::read(const std::string& key, std::vector<std::size_t>& out) {
  if (const auto* v = find(key)) {
    if (!v->is_array() || v->empty()) type_error(key, "a non-empty array of integers");
    out.clear();
    for (const auto& e : *v) out.push_back(as_count(e, key));
  }
}

void ConfigReader::read(const std::string& key, std::vector<double>& out) {
  if (const auto* v = find(key)) {
    if (!v->is_array() || v->empty()) type_error(key, "a non-empty array of numbers");
    out.clear();
    for (const auto& e : *v) {
      if (!e.is_number()) type_error(key, "a non-empty array of numbers");
      out.push_back(e.get<double>());
    }
  }
}

void ConfigReader::read(const std::string& key, std::vector<std::string>& out) {
  if (const auto* v = find(key)) {
    if (!v->is_array() || v->empty()) type_error(key, "a non-empty array of strings");
    out.clear();
    for (const auto& e : *v) {
      if (!e.is_string()) type_error(key, "a non-empty array of strings");
      out.push_back(e.get<std::string>());
    }
  }
}

void ConfigReader::finish() const {
  std::string unknown;
  for (const auto& [k, v] : doc_.items()) {
    if (std::find(consumed_.begin(), consumed_.end(), k) == consumed_.end())
      unknown += (unknown.empty() ? "'" : ", '") + k + "'";
  }
  if (!unknown.empty()) throw std::invalid_argument("unknown configuration key(s): " + unknown);
}

}  // namespace exchboot
