#include "rair_cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace rair {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("rair_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& body) const { std::ofstream(dir_ / name) << body; }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "rair");
    out_.str("");
    err_.str("");
    return cli::run_command(args, out_, err_);
  }

  void write_dataset() const {
    write("pairs.jsonl",
          "{\"id\":\"1\",\"source\":\"天汽很号\",\"target\":\"天气很好\",\"task\":\"spelling\"}\n"
          "{\"id\":\"2\",\"source\":\"机器外汇交易\",\"target\":\"即期外汇交易\",\"task\":\"spelling\"}\n"
          "{\"id\":\"3\",\"source\":\"没有错误\",\"target\":\"没有错误\",\"task\":\"spelling\"}\n");
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, EvaluatePerfectPredictions) {
  write_dataset();
  write("pred.jsonl",
        "{\"id\":\"1\",\"output\":\"天气很好\"}\n{\"id\":\"2\",\"output\":\"即期外汇交易\"}\n"
        "{\"id\":\"3\",\"output\":\"没有错误\"}\n");
  ASSERT_EQ(run({"evaluate", "--dataset", path("pairs.jsonl"), "--predictions", path("pred.jsonl")}), 0)
      << err_.str();
  EXPECT_NE(out_.str().find("F1 = 100.0"), std::string::npos) << out_.str();
  EXPECT_NE(out_.str().find("CER = 0.0"), std::string::npos) << out_.str();
}

TEST_F(CliTest, EvaluateWithBaselineAndTable) {
  write_dataset();
  write("pred.jsonl",
        "{\"id\":\"1\",\"output\":\"天气很好\"}\n{\"id\":\"2\",\"output\":\"机器外汇交易\"}\n"
        "{\"id\":\"3\",\"output\":\"没有错误\"}\n");
  write("base.jsonl",
        "{\"id\":\"1\",\"output\":\"天汽很号\"}\n{\"id\":\"2\",\"output\":\"机器外汇交易\"}\n"
        "{\"id\":\"3\",\"output\":\"没有错误\"}\n");
  ASSERT_EQ(run({"evaluate", "--dataset", path("pairs.jsonl"), "--predictions", path("pred.jsonl"), "--baseline",
                 path("base.jsonl"), "--table"}),
            0)
      << err_.str();
  EXPECT_NE(out_.str().find("precision\trecall\tF1\tCER\tlength_accuracy\tCERR\n"), std::string::npos) << out_.str();
  EXPECT_NE(out_.str().find("\t50.0\n"), std::string::npos) << out_.str();
}

TEST_F(CliTest, EvaluateMissingPredictionIsDataError) {
  write_dataset();
  write("pred.jsonl", "{\"id\":\"1\",\"output\":\"天气很好\"}\n");
  EXPECT_EQ(run({"evaluate", "--dataset", path("pairs.jsonl"), "--predictions", path("pred.jsonl")}), 2);
  EXPECT_NE(err_.str().find("data error"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}), 1);
  EXPECT_EQ(run({"evaluate"}), 1);
  EXPECT_EQ(run({"frobnicate"}), 1);
  write_dataset();
  EXPECT_EQ(run({"correct", "--dataset", path("pairs.jsonl"), "--out", path("p.jsonl")}), 1);
  EXPECT_NE(err_.str().find("chat backend"), std::string::npos);
}

TEST_F(CliTest, FullPipelineWithMockBackend) {
  write_dataset();
  write("terms.txt", "即期\n");
  write("mock.json", R"({"exhaustion":"repeat_last","default":[{"echo_input":true}],
    "items":{"即期":["即期指交易达成后立即交割。"],"1":["天气很好啊","天气很好"],"2":["即期外汇交易"]}})");

  ASSERT_EQ(run({"build-corpus", "--pairs", path("pairs.jsonl"), "--terms", path("terms.txt"), "--mock-script",
                 path("mock.json"), "--out", path("corpus.jsonl")}),
            0)
      << err_.str();
  EXPECT_NE(out_.str().find("4 docs"), std::string::npos) << out_.str();
  const auto corpus = read("corpus.jsonl");
  EXPECT_EQ(corpus.rfind("{\"_header\":", 0), 0u);
  EXPECT_NE(corpus.find("即期指交易达成后立即交割。"), std::string::npos);

  ASSERT_EQ(run({"index", "--corpus", path("corpus.jsonl"), "--out", path("index.jsonl")}), 0) << err_.str();

  ASSERT_EQ(run({"make-train-data", "--pairs", path("pairs.jsonl"), "--corpus", path("corpus.jsonl"), "--index",
                 path("index.jsonl"), "--out", path("train.jsonl")}),
            0)
      << err_.str();
  EXPECT_NE(out_.str().find("2 samples (1 pairs without errors skipped)"), std::string::npos) << out_.str();
  std::istringstream samples(read("train.jsonl"));
  std::string line;
  std::getline(samples, line);
  EXPECT_TRUE(nlohmann::json::parse(line).contains("_header"));
  std::getline(samples, line);
  const auto first = nlohmann::json::parse(line);
  EXPECT_EQ(first["query"], "天汽很号");
  EXPECT_EQ(first["pos"][0], "天气很好");

  ASSERT_EQ(run({"correct", "--dataset", path("pairs.jsonl"), "--corpus", path("corpus.jsonl"), "--index",
                 path("index.jsonl"), "--mock-script", path("mock.json"), "--out", path("pred.jsonl"), "--trace-out",
                 path("trace.jsonl")}),
            0)
      << err_.str();
  std::istringstream preds(read("pred.jsonl"));
  std::getline(preds, line);
  std::getline(preds, line);
  EXPECT_EQ(line, R"({"id":"1","output":"天气很好","method":"retrieval","rounds_used":1,"switched":false})");

  ASSERT_EQ(run({"evaluate", "--dataset", path("pairs.jsonl"), "--predictions", path("pred.jsonl")}), 0);
  EXPECT_NE(out_.str().find("F1 = 100.0"), std::string::npos) << out_.str();
}

TEST_F(CliTest, CorrectIsDeterministicAcrossRunsAndWorkers) {
  std::string dataset;
  for (int i = 0; i < 20; ++i) {
    dataset += "{\"id\":\"s" + std::to_string(i) + "\",\"source\":\"句子" + std::to_string(i) +
               "错\",\"target\":\"句子" + std::to_string(i) + "错\",\"task\":\"spelling\"}\n";
  }
  write("data.jsonl", dataset);
  write("mock.json", R"({"exhaustion":"repeat_last","default":["多了一些字的回答",{"echo_input":true}]})");
  const std::vector<std::string> base = {"correct", "--dataset", path("data.jsonl"), "--mock-script",
                                         path("mock.json"), "--seed", "3", "--no-background"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  ASSERT_EQ(run(with({"--workers", "1", "--out", path("a.jsonl")})), 0) << err_.str();
  ASSERT_EQ(run(with({"--workers", "4", "--out", path("b.jsonl")})), 0) << err_.str();
  EXPECT_EQ(read("a.jsonl"), read("b.jsonl"));
  EXPECT_NE(read("a.jsonl").find("\"rounds_used\":1"), std::string::npos);
}

TEST_F(CliTest, BackendFailureExitCode) {
  write_dataset();
  write("mock.json", R"({"exhaustion":"error","default":[]})");
  EXPECT_EQ(run({"correct", "--dataset", path("pairs.jsonl"), "--mock-script", path("mock.json"), "--no-background",
                 "--out", path("p.jsonl")}),
            3);
  EXPECT_TRUE(fs::exists(path("p.jsonl")));
}

TEST_F(CliTest, ExpansionFailureExitCode) {
  write_dataset();
  write("terms.txt", "即期\n");
  write("mock.json", R"({"exhaustion":"error","default":[]})");
  EXPECT_EQ(run({"build-corpus", "--pairs", path("pairs.jsonl"), "--terms", path("terms.txt"), "--mock-script",
                 path("mock.json"), "--out", path("corpus.jsonl")}),
            3);
  EXPECT_FALSE(fs::exists(path("corpus.jsonl")));
}

TEST_F(CliTest, BadDatasetExitCode) {
  write("pairs.jsonl", "{\"id\":\"1\",\"source\":\"ab\",\"target\":\"abc\",\"task\":\"spelling\"}\n");
  write("mock.json", R"({"default":["x"]})");
  EXPECT_EQ(run({"correct", "--dataset", path("pairs.jsonl"), "--mock-script", path("mock.json"), "--out",
                 path("p.jsonl")}),
            2);
}

}  // namespace
}  // namespace rair
