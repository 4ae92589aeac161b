/*
 * Copyright 2026 The Synergy Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "synergy/synergy.hpp"
#include "synergy_cli.hpp"

namespace synergy {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "synergy");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

double entry(const Json& report, std::vector<int> coalition) {
  for (const Json& e : report.at("entries")) {
    if (e.at("coalition").get<std::vector<int>>() == coalition) return e.at("value").get<double>();
  }
  throw std::runtime_error("missing coalition");
}

TEST(Cli, QuadraticExampleCsv) {
  const Outcome o = run_cli({"interact", "--expr", "2*x1-3*x2+x1*x3-15", "--x", "1,1,1",
                             "--method", "shapley-taylor", "-k", "2", "--output", "csv"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out,
            "coalition;value\n-;-15\n1;2\n1+2;0\n1+3;1\n2;-3\n2+3;0\n3;0\n");
}

TEST(Cli, JsonAndCsvCarryTheSameNumbers) {
  const std::vector<std::string> base = {"interact", "--expr", "sin(x1*x2) + x1^3*x3", "--x",
                                         "0.3,-0.7,1.1", "--baseline", "0.1,0.2,-0.4", "--method",
                                         "sop", "-k", "2"};
  auto csv_args = base;
  csv_args.insert(csv_args.end(), {"--output", "csv"});
  const Outcome json = run_cli(base);
  const Outcome csv = run_cli(csv_args);
  ASSERT_EQ(json.code, 0) << json.err;
  ASSERT_EQ(csv.code, 0) << csv.err;
  const Json j = Json::parse(json.out);
  std::istringstream lines(csv.out);
  std::string line;
  std::getline(lines, line);
  std::size_t rows = 0;
  for (const Json& e : j.at("entries")) {
    ASSERT_TRUE(std::getline(lines, line));
    const std::string value = line.substr(line.find(';') + 1);
    EXPECT_EQ(std::stod(value), e.at("value").get<double>());
    ++rows;
  }
  EXPECT_EQ(rows, 7u);
}

TEST(Cli, ByteStable) {
  const std::vector<std::string> args = {"interact", "--expr", "exp(x1*x2) + x2*x3^2", "--x",
                                         "0.5,0.25,-1", "--method", "ih", "-k", "3"};
  EXPECT_EQ(run_cli(args).out, run_cli(args).out);
}

TEST(Cli, HighDegreeIg) {
  const Outcome o = run_cli({"interact", "--expr", "x1^100*x2", "--x", "2,2", "--method", "ig"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json j = Json::parse(o.out);
  const double total = std::ldexp(1.0, 101);
  EXPECT_NEAR(entry(j, {1}), 100.0 / 101.0 * total, 1e-12 * total);
  EXPECT_NEAR(entry(j, {2}), total / 101.0, 1e-12 * total);
}

TEST(Cli, TableInput) {
  const std::string path =
      write_temp("synergy_cli_table.json", R"({"n": 2, "values": [1.5, -0.5, 2.25, 7]})");
  const Outcome dec = run_cli({"decompose", "--table", path});
  ASSERT_EQ(dec.code, 0) << dec.err;
  const Json j = Json::parse(dec.out);
  EXPECT_EQ(j.at("values").get<std::vector<double>>(),
            (std::vector<double>{1.5, -2.0, 0.75, 7 + 0.5 - 2.25 + 1.5}));
  const Outcome sh = run_cli({"interact", "--table", path, "--method", "shapley"});
  ASSERT_EQ(sh.code, 0) << sh.err;
  EXPECT_EQ(run_cli({"interact", "--table", path, "--method", "ig"}).code, 2);
  EXPECT_EQ(run_cli({"interact", "--table", path, "--x", "1,1", "--method", "shapley"}).code, 2);
}

TEST(Cli, PolynomialInput) {
  const std::string path = write_temp(
      "synergy_cli_poly.json",
      R"({"n": 2, "terms": [{"m": [1, 1], "c": 2.0}, {"m": [2, 0], "c": -1.0}]})");
  const Outcome o = run_cli({"interact", "--poly", path, "--x", "1,3", "--method", "ih-aug", "-k", "2"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json j = Json::parse(o.out);
  EXPECT_EQ(entry(j, {1, 2}), 6.0);
  EXPECT_EQ(entry(j, {1}), -1.0);
  EXPECT_EQ(entry(j, {2}), 0.0);
}

TEST(Cli, DecomposeSplitsAddends) {
  const Outcome o = run_cli({"decompose", "--expr", "a + b*x1^2 + c*sin(x2) + d*x1*x2^2", "--let",
                             "a=1", "--let", "b=2", "--let", "c=3", "--let", "d=4", "--x",
                             "0.6,-1.3"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json j = Json::parse(o.out);
  const double x1 = 0.6, x2 = -1.3;
  EXPECT_NEAR(entry(j, {}), 1.0, 1e-12);
  EXPECT_NEAR(entry(j, {1}), 2 * x1 * x1, 1e-12);
  EXPECT_NEAR(entry(j, {2}), 3 * std::sin(x2), 1e-12);
  EXPECT_NEAR(entry(j, {1, 2}), 4 * x1 * x2 * x2, 1e-12);
  EXPECT_EQ(j.at("pieces").size(), 3u);
}

TEST(Cli, CompareAgainstIndependentEngine) {
  for (const char* method : {"shapley", "shapley-taylor", "rs", "rs-aug", "ig", "ih", "ih-aug", "sop"}) {
    const Outcome o = run_cli({"compare", "--expr", "x1^2*x2 - x2*x3 + 0.5*x1*x2*x3", "--x",
                               "0.9,-0.4,1.2", "--method", method});
    ASSERT_EQ(o.code, 0) << method << o.err;
    EXPECT_LT(Json::parse(o.out).at("max_residual").get<double>(), 1e-9) << method;
  }
}

TEST(Cli, CompareTwoMethods) {
  const Outcome o = run_cli({"compare", "--expr", "x1*x2*x3", "--x", "1,1,1", "--method",
                             "shapley-taylor", "-k", "3", "--against", "rs-aug", "--output", "csv"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("max_residual;0;"), std::string::npos);
}

TEST(Cli, CheckSubset) {
  const Outcome pass = run_cli({"check", "--trials", "20", "--method", "sop", "--axiom",
                                "completeness", "--output", "csv"});
  EXPECT_EQ(pass.code, 0) << pass.err;
  EXPECT_EQ(pass.out, "method;axiom;status;expected;max_residual\nsop;completeness;pass;pass;" +
                          pass.out.substr(pass.out.rfind(';') + 1));
  const Outcome expected_fail =
      run_cli({"check", "--trials", "20", "--method", "ih", "--axiom", "baseline-test"});
  EXPECT_EQ(expected_fail.code, 0) << expected_fail.err;
  const std::string cfg = write_temp("synergy_cli_cfg.json", R"({"trials": 5, "bogus": 1})");
  EXPECT_EQ(run_cli({"check", "--config", cfg}).code, 2);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"interact", "--expr", "x1 +", "--x", "1"}).code, 2);
  EXPECT_EQ(run_cli({"interact", "--expr", "x1", "--x", "1", "--method", "nope"}).code, 2);
  EXPECT_EQ(run_cli({"interact", "--expr", "x1*x2", "--x", "1,1", "-k", "3"}).code, 2);
  EXPECT_EQ(run_cli({"interact", "--expr", "x1", "--x", "1", "--output", "xml"}).code, 2);
  EXPECT_EQ(run_cli({"interact", "--expr", "x1", "--x", "1", "--poly", "p.json"}).code, 2);
  EXPECT_EQ(run_cli({"interact", "--poly", "/nonexistent/p.json", "--x", "1"}).code, 2);
  const Outcome parse_error = run_cli({"interact", "--expr", "x1 + q", "--x", "1"});
  EXPECT_NE(parse_error.err.find("offset 5"), std::string::npos) << parse_error.err;
}

}  // namespace
}  // namespace synergy
