// End-to-end checks of the wepa command-line tool.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wepa/io.hpp"

namespace wepa {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("wepa_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Result run(const std::string& args) const {
    const std::string out = path("stdout.txt");
    const std::string err = path("stderr.txt");
    const std::string cmd =
        std::string(WEPA_CLI_PATH) + " " + args + " >" + out + " 2>" + err;
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_text_file(out),
            read_text_file(err)};
  }

  void write(const std::string& name, const std::string& text) const {
    write_text_file(path(name), text);
  }

  fs::path dir_;
};

TEST_F(Cli, GenKeyIsDeterministic) {
  ASSERT_EQ(run("gen-key --lambda 16 --degree 2 --vocab 8 --seed 3 -o " + path("a.json")).code, 0);
  ASSERT_EQ(run("gen-key --lambda 16 --degree 2 --vocab 8 --seed 3 -o " + path("b.json")).code, 0);
  EXPECT_EQ(read_text_file(path("a.json")), read_text_file(path("b.json")));
  const Json key = read_json_file(path("a.json"));
  EXPECT_EQ(key.at("bitwidth"), "float");
  EXPECT_EQ(key.at("lambda"), 16);
}

TEST_F(Cli, GenerateDetectPipeline) {
  std::ostringstream corpus;
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) corpus << uniform_below(rng, 8) << ' ';
  write("corpus.txt", corpus.str());
  write("prompt.json", "[1, 2]");
  ASSERT_EQ(run("train-model --integers --order 1 --input " + path("corpus.txt") + " -o " +
                path("model.json"))
                .code,
            0);
  ASSERT_EQ(run("gen-key --lambda 64 --vocab 8 --seed 9 -o " + path("key.json")).code, 0);
  ASSERT_EQ(run("generate --key " + path("key.json") + " --model " + path("model.json") +
                " --prompt-file " + path("prompt.json") + " --length 60 --seed 4 -o " +
                path("wm.json"))
                .code,
            0);
  const Json trace = read_json_file(path("wm.json"));
  EXPECT_EQ(trace.at("tokens").size(), 60U);
  EXPECT_EQ(trace.at("states").size(), 60U);

  const Result wm = run("detect --key " + path("key.json") + " --input " + path("wm.json") +
                        " --null-samples 99 --threshold 0.05 --seed 2");
  ASSERT_EQ(wm.code, 0) << wm.err;
  const Json report = Json::parse(wm.out);
  EXPECT_TRUE(report.at("verdict").get<bool>());
  EXPECT_DOUBLE_EQ(report.at("p_hat").get<double>(), 0.01);

  std::vector<double> plain_p;
  for (int s = 0; s < 9; ++s) {
    ASSERT_EQ(run("generate --plain --model " + path("model.json") + " --length 60 --seed " +
                  std::to_string(100 + s) + " -o " + path("plain.json"))
                  .code,
              0);
    const Result r = run("detect --key " + path("key.json") + " --input " +
                         path("plain.json") + " --null-samples 99 --seed " + std::to_string(s));
    ASSERT_EQ(r.code, 0) << r.err;
    plain_p.push_back(Json::parse(r.out).at("p_hat").get<double>());
  }
  std::sort(plain_p.begin(), plain_p.end());
  EXPECT_GT(plain_p[4], 0.1);
  EXPECT_LT(plain_p[4], 0.9);
}

TEST_F(Cli, BatchDetect) {
  ASSERT_EQ(run("gen-key --lambda 8 --vocab 4 --seed 1 -o " + path("key.json")).code, 0);
  write("batch.jsonl", "[0,1,2,3]\n\n{\"tokens\":[3,3,1]}\n");
  const Result r = run("detect --batch --key " + path("key.json") + " --input " +
                       path("batch.jsonl") + " --null-samples 9");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
}

TEST_F(Cli, AttackDeletes) {
  std::string tokens = "[";
  for (int i = 0; i < 50; ++i) tokens += (i ? "," : "") + std::to_string(i % 5);
  write("y.json", tokens + "]");
  ASSERT_EQ(run("attack --kind delete --epsilon 0.2 --seed 1 --vocab 5 --input " +
                path("y.json") + " -o " + path("out.json"))
                .code,
            0);
  EXPECT_EQ(tokens_from_json(read_json_file(path("out.json"))).size(), 40U);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  for (const std::string args :
       {"", "gen-key", "gen-key --vocab 4 --bitwidth half", "gen-key --vocab 4 --lambda 4 --degree 9",
        "attack --kind rewrite --epsilon 0.1 --vocab 2 --input x", "nonsense"}) {
    const Result r = run(args);
    EXPECT_EQ(r.code, 2) << args;
    EXPECT_TRUE(Json::accept(r.err)) << args << ": " << r.err;
  }
}

TEST_F(Cli, DataErrorsExitThree) {
  write("bad.json", "{ not json");
  write("key.json", R"({"lambda":4,"degree":1,"vocab_size":2,"bitwidth":8,"precision":8})");
  write("oov.json", "[0, 5]");
  const std::vector<std::string> cases{
      "detect --key " + path("bad.json") + " --input " + path("oov.json"),
      "detect --key " + path("key.json") + " --input " + path("oov.json"),
      "detect --key " + path("key.json") + " --input " + path("missing.json"),
      "sweep --config " + path("bad.json"),
  };
  for (const auto& args : cases) {
    const Result r = run(args);
    EXPECT_EQ(r.code, 3) << args;
    const Json err = Json::parse(r.err);
    EXPECT_EQ(err.at("error"), "data");
    EXPECT_EQ(err.at("exit_code"), 3);
  }
}

TEST_F(Cli, SweepWritesCsv) {
  write("sweep.json", R"({
    "model": {"kind": "uniform", "vocab_size": 4},
    "key": {"lambda": 8},
    "trials": 4, "null_samples": 9, "seed": 1,
    "lengths": [5, 10],
    "attacks": {"kinds": ["substitute"], "epsilons": [0.1], "length": 10}
  })");
  const Result r = run("sweep --config " + path("sweep.json") + " -o " + path("out.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = read_text_file(path("out.csv"));
  EXPECT_NE(csv.find("experiment,m,lambda"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

TEST_F(Cli, BenchLpnAndSuffixDemos) {
  const Result bench = run("bench --m 32 64 --lambdas 16 32 --ks 2 4 --lambda-for-k 8 "
                           "--length-for-k 16 --vocab 16 --samples 1 --min-sample-ns 100000");
  ASSERT_EQ(bench.code, 0) << bench.err;
  EXPECT_NE(bench.out.find("baseline-standin"), std::string::npos);
  EXPECT_NE(bench.out.find("slope_m="), std::string::npos);

  const Result lpn = run("lpn-demo --trials 3 --embedded 50");
  ASSERT_EQ(lpn.code, 0) << lpn.err;
  const Json table = Json::parse(lpn.out);
  EXPECT_EQ(table.at("watermarked").size(), 3U);
  EXPECT_NEAR(table.at("entropy_threshold").get<double>(), 0.954, 0.001);

  const Result sam = run("sam-demo --string abaa --check aab --check bb");
  ASSERT_EQ(sam.code, 0) << sam.err;
  const Json demo = Json::parse(sam.out);
  EXPECT_TRUE(demo.at("checks")[0].at("accepted").get<bool>());
  EXPECT_FALSE(demo.at("checks")[1].at("accepted").get<bool>());
  EXPECT_LE(demo.at("states").get<int>(), 16);
}

}  // namespace
}  // namespace wepa
