#include "subflow/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "subflow/csv.hpp"
#include "subflow/error.hpp"

namespace subflow {
namespace {

using nlohmann::json;

// Recursive-descent reader for the TOML subset.
class TomlReader {
 public:
  explicit TomlReader(std::string_view text) : text_(text) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        ++pos_;
        table = &open_table(root, read_key_path(']'));
        expect(']');
      } else {
        auto path = read_key_path('=');
        expect('=');
        skip_spaces();
        json* target = table;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) target = &(*target)[path[i]];
        if (target->contains(path.back())) error("duplicate key '" + path.back() + "'");
        (*target)[path.back()] = read_value();
      }
      finish_line();
    }
    return root;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    std::ostringstream os;
    os << "line " << line_ << ": " << what;
    fail(ErrorKind::ConfigError, os.str());
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void advance() {
    if (peek() == '\n') ++line_;
    ++pos_;
  }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#') {
      while (!at_end() && peek() != '\n') ++pos_;
    }
  }

  void skip_blank_lines() {
    while (true) {
      skip_spaces();
      skip_comment();
      if (peek() != '\n') return;
      advance();
    }
  }

  // Whitespace, comments and newlines inside arrays.
  void skip_layout() {
    while (true) {
      skip_spaces();
      skip_comment();
      if (peek() != '\n') return;
      advance();
    }
  }

  void finish_line() {
    skip_spaces();
    skip_comment();
    if (at_end()) return;
    if (peek() != '\n') error("unexpected trailing characters");
    advance();
  }

  void expect(char c) {
    skip_spaces();
    if (peek() != c) error(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::vector<std::string> read_key_path(char terminator) {
    std::vector<std::string> path;
    while (true) {
      skip_spaces();
      std::string key;
      if (peek() == '"') {
        key = read_string();
      } else {
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                             peek() == '-')) {
          key += text_[pos_++];
        }
      }
      if (key.empty()) error("expected a key");
      path.push_back(key);
      skip_spaces();
      if (peek() == '.') {
        ++pos_;
        continue;
      }
      if (peek() != terminator) error(std::string("expected '") + terminator + "' after key");
      return path;
    }
  }

  json& open_table(json& root, const std::vector<std::string>& path) {
    json* t = &root;
    for (const auto& k : path) {
      json& next = (*t)[k];
      if (next.is_null()) next = json::object();
      if (!next.is_object()) error("'" + k + "' is not a table");
      t = &next;
    }
    return *t;
  }

  std::string read_string() {
    ++pos_;  // opening quote
    std::string s;
    while (true) {
      if (at_end() || peek() == '\n') error("unterminated string");
      char c = text_[pos_++];
      if (c == '"') return s;
      if (c == '\\') {
        if (at_end()) error("unterminated escape");
        const char e = text_[pos_++];
        switch (e) {
          case 'n': s += '\n'; break;
          case 't': s += '\t'; break;
          case '\\': s += '\\'; break;
          case '"': s += '"'; break;
          default: error(std::string("unsupported escape \\") + e);
        }
      } else {
        s += c;
      }
    }
  }

  json read_value() {
    const char c = peek();
    if (c == '"') return read_string();
    if (c == '[') return read_array();
    std::string word;
    while (!at_end() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ',' &&
           peek() != ']' && peek() != '#') {
      word += text_[pos_++];
    }
    if (word.empty()) error("expected a value");
    if (word == "true") return true;
    if (word == "false") return false;
    if (word == "inf" || word == "+inf") return std::numeric_limits<double>::infinity();
    std::string digits;
    for (char ch : word) {
      if (ch != '_') digits += ch;
    }
    const bool integral = digits.find_first_of(".eE") == std::string::npos;
    if (integral) {
      long long v = 0;
      const auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (ec == std::errc() && p == digits.data() + digits.size()) return v;
    }
    double v = 0.0;
    const char* first = digits.data();
    if (!digits.empty() && digits.front() == '+') ++first;
    const auto [p, ec] = std::from_chars(first, digits.data() + digits.size(), v);
    if (ec != std::errc() || p != digits.data() + digits.size()) {
      error("cannot parse value '" + word + "'");
    }
    return v;
  }

  json read_array() {
    ++pos_;  // [
    json arr = json::array();
    while (true) {
      skip_layout();
      if (peek() == ']') {
        ++pos_;
        return arr;
      }
      arr.push_back(read_value());
      skip_layout();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() != ']') error("expected ',' or ']' in array");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

const json& section(const json& doc, const char* name) {
  if (doc.contains(name) && doc.at(name).is_object()) return doc.at(name);
  return doc;
}

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) fail(ErrorKind::ConfigError, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::string text(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    fail(ErrorKind::ConfigError, std::string("missing string '") + key + "'");
  }
  return j.at(key).get<std::string>();
}

std::vector<double> numbers(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    fail(ErrorKind::ConfigError, std::string("missing array '") + key + "'");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) fail(ErrorKind::ConfigError, std::string("'") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

json parse_config(std::string_view text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    try {
      return json::parse(text);
    } catch (const json::exception& e) {
      fail(ErrorKind::ConfigError, std::string("invalid JSON: ") + e.what());
    }
  }
  return TomlReader(text).parse();
}

json load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ConfigError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const Error& e) {
    fail(ErrorKind::ConfigError, path.string() + ": " + e.what());
  }
}

BernsteinSpec spec_from_json(const json& doc, const std::filesystem::path& base_dir) {
  const json& j = section(doc, "spec");
  const std::string family = text(j, "family");
  const double a = number(j, "a", 0.0);
  const double b = number(j, "b", 0.0);
  if (family == "stable") return BernsteinSpec::stable(number(j, "alpha", 0.5), a, b);
  if (family == "tempered") {
    return BernsteinSpec::tempered(number(j, "alpha", 0.5), number(j, "theta", 1.0), a, b);
  }
  if (family == "drift") return BernsteinSpec::drift(a, b);
  if (family == "custom") {
    if (j.contains("knots")) return BernsteinSpec::custom(numbers(j, "knots"), numbers(j, "values"), a, b);
    std::filesystem::path file = text(j, "tail_file");
    if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
    const CsvTable table = read_csv(file);
    std::vector<double> knots;
    std::vector<double> values;
    for (const auto& row : table.rows) {
      if (row.size() < 2) fail(ErrorKind::ConfigError, "tail file rows need s,nu");
      knots.push_back(row[0]);
      values.push_back(row[1]);
    }
    return BernsteinSpec::custom(std::move(knots), std::move(values), a, b);
  }
  fail(ErrorKind::ConfigError, "unknown family '" + family + "'");
}

json spec_to_json(const BernsteinSpec& spec) {
  json j;
  j["a"] = spec.a;
  j["b"] = spec.b;
  if (const auto* s = std::get_if<Stable>(&spec.family)) {
    j["family"] = "stable";
    j["alpha"] = s->alpha;
  } else if (const auto* t = std::get_if<TemperedStable>(&spec.family)) {
    j["family"] = "tempered";
    j["alpha"] = t->alpha;
    j["theta"] = t->theta;
  } else if (const auto* c = std::get_if<CustomTail>(&spec.family)) {
    j["family"] = "custom";
    j["knots"] = std::vector<double>(c->knots().begin(), c->knots().end());
    j["values"] = std::vector<double>(c->values().begin(), c->values().end());
  } else {
    j["family"] = "drift";
  }
  return j;
}

SemigroupSpec semigroup_from_json(const json& doc) {
  const json& j = section(doc, "semigroup");
  const std::string kind = text(j, "kind");
  auto count = [&](const char* key) {
    const double n = number(j, key, -1.0);
    if (!(n >= 0.0) || n != std::floor(n)) {
      fail(ErrorKind::ConfigError, std::string("'") + key + "' must be a non-negative integer");
    }
    return static_cast<std::size_t>(n);
  };
  SemigroupSpec sg;
  if (kind == "scalar") {
    sg = ScalarRelaxation{number(j, "mu", 1.0)};
  } else if (kind == "translation") {
    sg = LeftTranslation{number(j, "lo", 0.0), number(j, "hi", 1.0), count("n")};
  } else if (kind == "heat") {
    sg = Heat1D{number(j, "kappa", 1.0), number(j, "lo", 0.0), number(j, "hi", 1.0), count("n")};
  } else if (kind == "markov") {
    if (!j.contains("q") || !j.at("q").is_array()) fail(ErrorKind::ConfigError, "missing matrix 'q'");
    const auto& rows = j.at("q");
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd q(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto& row = rows.at(static_cast<std::size_t>(r));
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
        fail(ErrorKind::ConfigError, "'q' must be a square array of arrays");
      }
      for (Eigen::Index c = 0; c < n; ++c) q(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    sg = MarkovMatrix{q};
  } else {
    fail(ErrorKind::ConfigError, "unknown semigroup kind '" + kind + "'");
  }
  try {
    validate(sg);
  } catch (const Error& e) {
    fail(ErrorKind::ConfigError, e.what());
  }
  return sg;
}

json semigroup_to_json(const SemigroupSpec& sg) {
  json j;
  if (const auto* s = std::get_if<ScalarRelaxation>(&sg)) {
    j = {{"kind", "scalar"}, {"mu", s->mu}};
  } else if (const auto* t = std::get_if<LeftTranslation>(&sg)) {
    j = {{"kind", "translation"}, {"lo", t->lo}, {"hi", t->hi}, {"n", t->n}};
  } else if (const auto* h = std::get_if<Heat1D>(&sg)) {
    j = {{"kind", "heat"}, {"kappa", h->kappa}, {"lo", h->lo}, {"hi", h->hi}, {"n", h->n}};
  } else {
    const auto& q = std::get<MarkovMatrix>(sg).q;
    json rows = json::array();
    for (Eigen::Index r = 0; r < q.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < q.cols(); ++c) row.push_back(q(r, c));
      rows.push_back(row);
    }
    j = {{"kind", "markov"}, {"q", rows}};
  }
  return j;
}

InversionConfig inversion_from_json(const json& doc) {
  InversionConfig cfg;
  if (!doc.contains("inversion")) return cfg;
  const json& j = doc.at("inversion");
  if (j.contains("method")) {
    const std::string m = text(j, "method");
    if (m == "talbot") {
      cfg.method = InversionMethod::Talbot;
    } else if (m == "stehfest" || m == "gaver-stehfest") {
      cfg.method = InversionMethod::GaverStehfest;
    } else {
      fail(ErrorKind::ConfigError, "unknown inversion method '" + m + "'");
    }
  }
  cfg.n_terms = static_cast<int>(number(j, "n_terms", cfg.n_terms));
  cfg.n_nodes = static_cast<int>(number(j, "n_nodes", cfg.n_nodes));
  cfg.tol = number(j, "tol", cfg.tol);
  cfg.abs_floor = number(j, "abs_floor", cfg.abs_floor);
  if (j.contains("cross_check")) {
    if (!j.at("cross_check").is_boolean()) fail(ErrorKind::ConfigError, "'cross_check' must be a boolean");
    cfg.cross_check = j.at("cross_check").get<bool>();
  }
  cfg.validate();
  return cfg;
}

json inversion_to_json(const InversionConfig& cfg) {
  return {{"method", cfg.method == InversionMethod::Talbot ? "talbot" : "stehfest"},
          {"n_terms", cfg.n_terms},
          {"n_nodes", cfg.n_nodes},
          {"cross_check", cfg.cross_check},
          {"tol", cfg.tol},
          {"abs_floor", cfg.abs_floor}};
}

}  // namespace subflow
