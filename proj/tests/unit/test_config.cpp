#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "subflow/config.hpp"
#include "subflow/csv.hpp"
#include "subflow/error.hpp"

using namespace subflow;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::DomainError;
}

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / ("subflow_test_" + name);
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

}  // namespace

TEST(Config, TomlSubset) {
  const auto doc = parse_config(R"(
# comment
title = "x"   # trailing
[spec]
family = "tempered"
alpha = 0.25
theta = 2e0
b = 1
[inversion]
method = "stehfest"
cross_check = false
n_terms = 16
[semigroup]
kind = "markov"
q = [[-1.0, 1.0],
     [0.5, -0.5]]
)");
  EXPECT_EQ(doc["title"], "x");
  const auto spec = spec_from_json(doc);
  ASSERT_TRUE(std::holds_alternative<TemperedStable>(spec.family));
  EXPECT_DOUBLE_EQ(std::get<TemperedStable>(spec.family).alpha, 0.25);
  EXPECT_DOUBLE_EQ(std::get<TemperedStable>(spec.family).theta, 2.0);
  EXPECT_DOUBLE_EQ(spec.b, 1.0);
  const auto inv = inversion_from_json(doc);
  EXPECT_EQ(inv.method, InversionMethod::GaverStehfest);
  EXPECT_FALSE(inv.cross_check);
  EXPECT_EQ(inv.n_terms, 16);
  const auto sg = semigroup_from_json(doc);
  ASSERT_TRUE(std::holds_alternative<MarkovMatrix>(sg));
  EXPECT_DOUBLE_EQ(std::get<MarkovMatrix>(sg).q(1, 0), 0.5);
}

TEST(Config, JsonAccepted) {
  const auto doc = parse_config(R"({"spec": {"family": "stable", "alpha": 0.7}})");
  EXPECT_DOUBLE_EQ(std::get<Stable>(spec_from_json(doc).family).alpha, 0.7);
}

TEST(Config, RoundTrip) {
  for (const auto& spec : {BernsteinSpec::stable(0.4, 0.1, 0.2), BernsteinSpec::tempered(0.6, 3.0),
                           BernsteinSpec::drift(0.5, 2.0),
                           BernsteinSpec::custom({0.1, 1.0, 10.0}, {3.0, 1.0, 0.5}, 0.2)}) {
    const auto again = spec_from_json(nlohmann::json{{"spec", spec_to_json(spec)}});
    EXPECT_EQ(spec_to_json(again), spec_to_json(spec));
    EXPECT_DOUBLE_EQ(eval_f(again, 1.3), eval_f(spec, 1.3));
  }
  for (const SemigroupSpec& sg : std::vector<SemigroupSpec>{ScalarRelaxation{2.0}, LeftTranslation{-1, 1, 11},
                                                            Heat1D{0.5, 0, 1, 16}}) {
    EXPECT_EQ(semigroup_to_json(semigroup_from_json(nlohmann::json{{"semigroup", semigroup_to_json(sg)}})),
              semigroup_to_json(sg));
  }
}

TEST(Config, CustomTailFile) {
  const fs::path dir = SUBFLOW_TEST_DATA;
  const auto spec = spec_from_json(load_config(dir / "custom_tail.toml"), dir);
  ASSERT_TRUE(std::holds_alternative<CustomTail>(spec.family));
  EXPECT_NEAR(eval_tail(spec, 1.0), 1.0 / std::sqrt(M_PI), 1e-12);
  EXPECT_NEAR(eval_tail(spec, 3.0), 1.0 / std::sqrt(3.0 * M_PI), 1e-12);
}

TEST(Config, Errors) {
  EXPECT_EQ(kind_of([] { parse_config("[spec\nfamily = 1"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_config("x = \"unterminated"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { spec_from_json(parse_config("[spec]\nfamily = \"weird\"")); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { spec_from_json(parse_config("[spec]\nalpha = 0.5")); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { semigroup_from_json(parse_config("[semigroup]\nkind = \"scalar\"\nmu = -1")); }),
            ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { inversion_from_json(parse_config("[inversion]\nn_terms = 7")); }),
            ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { load_config("/nonexistent/file.toml"); }), ErrorKind::ConfigError);
}

TEST(Csv, NumberFormat) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  for (double v : {M_PI, 1e-300, -2.5e17, 1.0 / 3.0}) EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(Csv, WriteReadRoundTrip) {
  CsvTable t{{"x", "y"}, {{0.0, 1.0 / 3.0}, {0.5, std::numeric_limits<double>::quiet_NaN()}}};
  std::ostringstream os;
  write_csv(os, t);
  EXPECT_EQ(os.str(), "x,y\n0,0.33333333333333331\n0.5,\n");
  const auto p = temp_file("rt.csv", os.str());
  const auto back = read_csv(p);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows[0][1], 1.0 / 3.0);
  EXPECT_TRUE(std::isnan(back.rows[1][1]));
}

TEST(Csv, GridFunctionInput) {
  const auto g = read_grid_function(temp_file("g.csv", "t,u\n0,1\n0.5,2\n1,3\n1.5,4\n"));
  EXPECT_EQ(g.size(), 4u);
  EXPECT_DOUBLE_EQ(g.step(), 0.5);
  EXPECT_DOUBLE_EQ(g[3], 4.0);
  EXPECT_EQ(kind_of([] { read_grid_function(temp_file("bad.csv", "0,1\n0.5,2\n1.2,3\n")); }),
            ErrorKind::ConfigError);
}
