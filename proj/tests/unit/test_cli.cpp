#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "todacli/config.hpp"
#include "todacli/diff.hpp"
#include "todacli/runner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("toda_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write(const fs::path& dir, const std::string& name, const std::string& text) {
  const auto p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kLiouville = R"({"name": "l", "n": 1, "gamma": [0], "lambda": "auto",
  "c": {"1,0": [0.25, -0.5]}, "seed": 7, "checks": ["construct", "residual"]})";

}  // namespace

TEST(Config, ParsesDefaultsAndAuto) {
  const auto c = todacli::parse_config_text(kLiouville);
  EXPECT_EQ(c.n, 1);
  EXPECT_FALSE(c.lambda.has_value());
  ASSERT_EQ(c.c.size(), 1u);
  EXPECT_EQ(std::get<0>(c.c[0]), 1);
  EXPECT_EQ(std::get<1>(c.c[0]), 0);
  EXPECT_EQ(c.residual.points, 50);
  const auto prep = todacli::prepare(c);
  EXPECT_NEAR(prep.params.lambda[0] * prep.params.lambda[1], 0.25, 1e-16);
}

TEST(Config, SyntaxErrorHasLineAndColumn) {
  try {
    todacli::parse_config_text("{\n  \"n\": 1,\n  \"gamma\": [0,]\n}");
    FAIL();
  } catch (const todacli::ConfigParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_GT(e.column(), 0);
  }
}

TEST(Config, UnknownKeyRejected) {
  try {
    todacli::parse_config_text(R"({"n": 1, "gamma": [0], "grids": {"mass": {"radius": 100, "bogus": 1}}})");
    FAIL();
  } catch (const todacli::ConfigParseError& e) {
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
  EXPECT_THROW(todacli::parse_config_text(R"({"n": 1})"), todacli::ConfigParseError);
  EXPECT_THROW(todacli::parse_config_text(R"({"n": "one", "gamma": [0]})"), todacli::ConfigParseError);
}

TEST(Config, ValidationNamesField) {
  auto c = todacli::parse_config_text(R"({"n": 2, "gamma": [1.5, 0], "c": {"1,0": [0.1, 0]}})");
  try {
    todacli::prepare(c);
    FAIL();
  } catch (const toda::ValidationError& e) {
    EXPECT_EQ(e.field(), "c[1,0]");
  }
  c.autonormalize = true;
  EXPECT_FALSE(todacli::prepare(c).coerced.empty());
  auto wrong = todacli::parse_config_text(R"({"n": 1, "gamma": [0], "lambda": [1, 1]})");
  EXPECT_THROW(todacli::prepare(wrong), toda::ValidationError);
}

TEST(Run, ExitCodesAndFailClosed) {
  const auto dir = scratch("exit");
  std::ostringstream log;
  EXPECT_EQ(todacli::run_command(write(dir, "bad.json", "{\"n\": 1,").string(), (dir / "o2").string(), {}, log), 2);
  EXPECT_FALSE(fs::exists(dir / "o2"));
  EXPECT_EQ(todacli::run_command(write(dir, "neg.json", R"({"n": 1, "gamma": [-1]})").string(), (dir / "o3").string(), {}, log), 3);
  EXPECT_FALSE(fs::exists(dir / "o3"));
  EXPECT_EQ(todacli::run_command((dir / "missing.json").string(), (dir / "o4").string(), {}, log), 2);

  const auto cfg = write(dir, "ok.json", kLiouville);
  EXPECT_EQ(todacli::run_command(cfg.string(), (dir / "ok").string(), {}, log), 0);
  EXPECT_TRUE(fs::exists(dir / "ok" / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "ok" / "metadata.json"));

  // an impossible tolerance makes the check fail and is named in the report
  const auto strict = write(dir, "strict.json", R"({"n": 1, "gamma": [0], "checks": ["residual"],
    "tolerances": {"residual": 1e-30}})");
  EXPECT_EQ(todacli::run_command(strict.string(), (dir / "strict").string(), {}, log), 1);
  const auto rep = json::parse(slurp(dir / "strict" / "report.json"));
  EXPECT_FALSE(rep["passed"].get<bool>());
  EXPECT_EQ(rep["checks"][0]["name"], "residual");
}

TEST(Run, DeterministicReport) {
  const auto dir = scratch("det");
  const auto cfg = write(dir, "c.json", kLiouville);
  std::ostringstream log;
  ASSERT_EQ(todacli::run_command(cfg.string(), (dir / "a").string(), {}, log), 0);
  ASSERT_EQ(todacli::run_command(cfg.string(), (dir / "b").string(), {}, log), 0);
  EXPECT_EQ(slurp(dir / "a" / "report.json"), slurp(dir / "b" / "report.json"));
  todacli::RunOptions other;
  other.seed = 8;
  ASSERT_EQ(todacli::run_command(cfg.string(), (dir / "c").string(), other, log), 0);
  EXPECT_NE(slurp(dir / "a" / "report.json"), slurp(dir / "c" / "report.json"));
}

TEST(Diff, Semantics) {
  json a = {{"schema_version", 1},
            {"config", json::object()},
            {"passed", true},
            {"checks",
             {{{"name", "expand"},
               {"passed", true},
               {"metrics",
                {{{"name", "m1.leading"}, {"value", 1.0}, {"expected", 1.0}, {"tol", 1e-4}, {"kind", "rel"}, {"passed", true}}}}}}}};
  EXPECT_FALSE(todacli::diff_reports(a, a).drifted());

  json b = a;
  b["checks"][0]["metrics"][0]["value"] = 1.0 + 2e-4;
  const auto d = todacli::diff_reports(a, b);
  ASSERT_TRUE(d.drifted());
  EXPECT_NE(d.lines[0].find("m1.leading"), std::string::npos);

  json c = a;
  c["checks"][0]["metrics"][0].erase("kind");
  EXPECT_THROW(todacli::diff_reports(a, c), todacli::SchemaMismatch);

  const auto dir = scratch("diff");
  std::ostringstream out;
  const auto pa = write(dir, "a.json", a.dump()), pb = write(dir, "b.json", b.dump()), pc = write(dir, "c.json", c.dump());
  EXPECT_EQ(todacli::diff_command(pa.string(), pa.string(), out), 0);
  EXPECT_EQ(todacli::diff_command(pa.string(), pb.string(), out), 1);
  EXPECT_EQ(todacli::diff_command(pa.string(), (dir / "none.json").string(), out), 2);
  EXPECT_EQ(todacli::diff_command(pa.string(), pc.string(), out), 3);
}
