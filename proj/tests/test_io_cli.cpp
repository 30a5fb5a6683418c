#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "siou/error.hpp"
#include "siou/io.hpp"

namespace siou {
namespace {

namespace fs = std::filesystem;

TEST(FormatDouble, RoundTripsAndIsShort) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(0.1), "0.1");
  std::mt19937_64 engine(11);
  std::uniform_real_distribution<double> unit(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = unit(engine) * std::pow(10.0, i % 40 - 20);
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
}

TEST(WriteCsv, HeaderThenRows) {
  std::ostringstream out;
  Eigen::MatrixXd m(2, 2);
  m << 1, 0.25, -3, 1e-20;
  const std::vector<std::string> header{corner_label(Corner{0, 0}), corner_label(Corner{1, 0.5})};
  write_csv(out, header, m);
  EXPECT_EQ(out.str(), "\"(0,0)\",\"(1,0.5)\"\n1,0.25\n-3,1e-20\n");
}

TEST(ToJson, Shapes) {
  const std::vector<Corner> b{{1, 2}, {2, 1}};
  const Increment inc(Corner{2, 2}, b);
  const Json f = to_json(frontier(inc));
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[2]["corner"], Json::parse("[1.0,1.0]"));
  EXPECT_EQ(f[2]["sign"], -1);
  EXPECT_EQ(f[2]["coefficient"], -1);

  const KernelParams p(1.0, std::sqrt(2.0), MeasureSpec::lebesgue());
  const Json tp = to_json(transition_params(p, inc));
  EXPECT_EQ(tp["weights"].size(), 3u);
  EXPECT_TRUE(tp["weights"][0].contains("corner"));
  EXPECT_NEAR(tp["variance"].get<double>(), 0.965848, 1e-6);

  const Json r = to_json(make_report("x", std::numeric_limits<double>::infinity(), 1.0));
  EXPECT_EQ(r["statistic"], "inf");
  EXPECT_EQ(r["passed"], false);

  EXPECT_EQ(to_json(MeasureSpec::axis(Eigen::Vector2d(1, 2))), Json::parse(R"({"kind":"axis","alpha":[1.0,2.0]})"));
}

TEST(ParseCorner, AcceptsListsAndRejectsGarbage) {
  EXPECT_EQ(parse_corner("1, 2.5"), (Corner{1, 2.5}));
  EXPECT_EQ(parse_corner_list("1,2;2,1"), (std::vector<Corner>{{1, 2}, {2, 1}}));
  EXPECT_TRUE(parse_corner_list("").empty());
  EXPECT_THROW(parse_corner("1,x"), ConfigError);
  EXPECT_THROW(parse_corner(""), ConfigError);
  EXPECT_THROW(parse_corner("1,-2"), ConfigError);
}

TEST(RunConfig, ParsesAndInfersTheDimension) {
  const auto c = parse_run_config(Json::parse(R"({
    "measure": {"kind": "axis", "alpha": [1, 2]},
    "kernel": {"lambda": 0.5, "sigma": 2},
    "corners": [[1, 0.5], [0.5, 1]],
    "initial": {"kind": "normal", "mu": 1, "var": 0.5},
    "replicates": 10, "seed": 3, "extension": "lexicographic",
    "output": {"csv": "a.csv"}
  })"));
  EXPECT_EQ(c.dimension, 2);
  EXPECT_EQ(c.kernel().lambda(), 0.5);
  EXPECT_EQ(c.corners.size(), 2u);
  EXPECT_EQ(c.seed.value(), 3u);
  EXPECT_EQ(c.extension, LinearExtension::lexicographic);
  EXPECT_EQ(c.csv_path, "a.csv");
  EXPECT_TRUE(c.json_path.empty());
  EXPECT_EQ(std::get<NormalLaw>(c.initial.law()).var, 0.5);
}

TEST(RunConfig, RejectsMalformedInput) {
  auto bad = [](const char* text) { return [text] { parse_run_config(Json::parse(text)); }; };
  EXPECT_THROW(bad(R"({"corners": [[1, 2]], "colour": 1})")(), ConfigError);
  EXPECT_THROW(bad(R"({"corners": [[1, 2], [1]]})")(), ConfigError);
  EXPECT_THROW(bad(R"({"corners": [[1, -2]]})")(), ConfigError);
  EXPECT_THROW(bad(R"({"corners": [[1]], "kernel": {"lambda": 0}})")(), ConfigError);
  EXPECT_THROW(bad(R"({"corners": [[1]], "method": "gibbs"})")(), ConfigError);
  EXPECT_THROW(bad(R"({"corners": [[1]], "replicates": 0})")(), ConfigError);
  EXPECT_THROW(bad(R"({"corners": [[1]], "measure": {"kind": "axis", "alpha": [1, 2]}})")(), ConfigError);
  EXPECT_THROW(bad(R"({"corners": [[1]], "initial": {"kind": "cauchy"}})")(), ConfigError);
  EXPECT_THROW(bad(R"({"sheet": {"alpha": [1, 0]}})")(), ConfigError);
  EXPECT_THROW(bad(R"({})")(), ConfigError);
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("siou_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) const {
    const std::string cmd = std::string("\"") + SIOU_CLI_PATH + "\" " + args + " >" + (dir_ / "stdout").string() +
                            " 2>" + (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return (dir_ / name).string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, FrontierPrintsSignedCorners) {
  ASSERT_EQ(run("frontier --a 2,2 --b \"1,2;2,1\""), 0);
  const Json doc = Json::parse(read("stdout"));
  ASSERT_EQ(doc["results"].size(), 3u);
  EXPECT_EQ(doc["results"][0]["corner"], Json::parse("[1.0,2.0]"));
  EXPECT_EQ(doc["results"][2]["sign"], -1);
}

TEST_F(Cli, StrictFrontierRejectsMultiplicities) {
  EXPECT_EQ(run("frontier --a 2,2,2 --b \"1,2,1;1,1,2;2,1,1\""), 0);
  EXPECT_EQ(run("frontier --a 2,2,2 --b \"1,2,1;1,1,2;2,1,1\" --strict"), 1);
}

TEST_F(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("frontier --a 1,x"), 2);
  EXPECT_EQ(run("verify --suite deterministic"), 2);
  EXPECT_EQ(run("verify --suite nope --seed 1"), 2);
  const auto cfg = write("noseed.json", R"({"corners": [[1, 1]], "replicates": 10})");
  EXPECT_EQ(run("sample --config " + cfg + " --csv " + path("x.csv")), 2);
  EXPECT_EQ(run("sample --config " + cfg + " --seed 1"), 2);
  EXPECT_EQ(run("sample --config " + write("bad.json", "{not json")), 2);
  EXPECT_EQ(run("sample --config " + path("missing.json")), 2);
  const auto cfg2 = write("run.json", R"({"corners": [[1, 1]], "replicates": 10, "seed": 1})");
  EXPECT_EQ(run("sample --config " + cfg2 + " --csv " + path("run.csv")), 2);
  EXPECT_NE(read("run.json").find("corners"), std::string::npos);
}

TEST_F(Cli, KernelQueries) {
  const auto in = write("q.json", R"({
    "kernel": {"lambda": 1, "sigma": 1.4142135623730951},
    "queries": [
      {"op": "cov_stationary", "u": [1, 2], "v": [2, 1]},
      {"op": "cov_dirac", "u": [1], "v": [2]},
      {"op": "mean_dirac", "u": [0.5, 1.5], "x0": 2},
      {"op": "transition", "a": [2, 2], "b": [[1, 2], [2, 1]]}
    ]})");
  ASSERT_EQ(run("kernel --input " + in + " --json " + path("k.json")), 0);
  const Json doc = Json::parse(read("k.json"));
  const auto& r = doc["results"];
  EXPECT_NEAR(r[0]["value"].get<double>(), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(r[1]["value"].get<double>(), std::exp(-1.0) - std::exp(-3.0), 1e-15);
  EXPECT_NEAR(r[2]["value"].get<double>(), 2 * std::exp(-0.75), 1e-15);
  EXPECT_NEAR(r[3]["transition"]["variance"].get<double>(), 0.965848, 1e-6);
  EXPECT_EQ(run("kernel --input " + write("bad_op.json", R"({"queries": [{"op": "nope"}]})")), 2);
}

TEST_F(Cli, SampleWritesCsvAndSidecar) {
  const auto cfg = write("run.json", R"({"corners": [[1, 2], [2, 1]], "replicates": 7, "seed": 5})");
  ASSERT_EQ(run("sample --config " + cfg + " --csv " + path("out.csv")), 0);
  std::istringstream csv(read("out.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "\"(0,0)\",\"(1,1)\",\"(1,2)\",\"(2,1)\"");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 7);
  const Json side = Json::parse(read("out.json"));
  EXPECT_EQ(side["config"]["seed"], 5);
  EXPECT_EQ(side["results"][0]["steps"].size(), 3u);

  ASSERT_EQ(run("sample --config " + cfg + " --csv " + path("again.csv") + " --json " + path("again.json")), 0);
  EXPECT_EQ(read("out.csv"), read("again.csv"));
  ASSERT_EQ(run("sample --config " + cfg + " --csv " + path("other.csv") + " --seed 6"), 0);
  EXPECT_NE(read("out.csv"), read("other.csv"));
}

TEST_F(Cli, SheetWritesLongCsv) {
  const auto cfg = write("sheet.json", R"({
    "replicates": 4, "seed": 1,
    "sheet": {"alpha": [1, 2], "grid": {"width": 0.25, "truncation": 0.5}, "points": [[0.5, 0.5], [1, 0.25]]}
  })");
  ASSERT_EQ(run("sheet --config " + cfg + " --csv " + path("s.csv")), 0);
  std::istringstream csv(read("s.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "replicate,t_1,t_2,value");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 8);
  const Json side = Json::parse(read("s.json"));
  EXPECT_EQ(side["results"][0]["truncation"], 0.5);
  EXPECT_EQ(side["results"][0]["covariances"].size(), 3u);
}

TEST_F(Cli, VerifyExitCodes) {
  EXPECT_EQ(run("verify --suite deterministic --seed 3 --json " + path("v.json")), 0);
  const Json doc = Json::parse(read("v.json"));
  EXPECT_GT(doc["results"].size(), 100u);
  EXPECT_NE(read("stderr").find("PASS "), std::string::npos);
  EXPECT_EQ(run("verify --suite deterministic --seed 3 --sign-flipped"), 1);
  const Json flipped = Json::parse(read("stdout"));
  for (const auto& r : flipped["results"]) EXPECT_EQ(r["passed"], false) << r["name"];
}

}  // namespace
}  // namespace siou
