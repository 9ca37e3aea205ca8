// Copyright 2025 The MLDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// End-to-end coverage of the command line surface: each subcommand runs in
// a scratch directory against toy inputs.

#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CommandResult RunCommand(const std::string& command) {
  CommandResult result;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (pipe == nullptr) return result;
  std::array<char, 4096> buffer;
  while (fgets(buffer.data(), buffer.size(), pipe) != nullptr) {
    result.output += buffer.data();
  }
  const int status = pclose(pipe);
  result.exit_code = WEXITSTATUS(status);
  return result;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("mldp_cli_" + std::to_string(::getpid()));
    fs::create_directories(root_);
    std::ofstream emb(root_ / "emb.txt", std::ios::binary);
    emb << "alpha 0 0\nbravo 1 0\ncharlie 0 1\ndelta 1 1\necho 2 0\n";
    std::ofstream docs(root_ / "docs.csv", std::ios::binary);
    docs << "text,label\n"
         << "alpha bravo charlie,pos\n"
         << "delta echo alpha,neg\n"
         << "bravo bravo charlie delta,pos\n";
  }
  void TearDown() override {
    std::error_code ec;
    fs::remove_all(root_, ec);
  }

  std::string Cli() const { return std::string(MLDP_CLI_PATH); }
  fs::path root_;
};

TEST_F(CliTest, PerturbWritesTokenizedCorpus) {
  const auto result = RunCommand(
      Cli() + " perturb --mechanism cmp --epsilon 2 --embedding-file " +
      (root_ / "emb.txt").string() + " --input " +
      (root_ / "docs.csv").string() + " --seed 11 --output " +
      (root_ / "pert.txt").string());
  ASSERT_EQ(result.exit_code, 0) << result.output;
  const std::string contents = ReadFile(root_ / "pert.txt");
  EXPECT_EQ(std::count(contents.begin(), contents.end(), '\n'), 3);
  EXPECT_NE(contents.find("pos"), std::string::npos);

  // Same seed, same bytes.
  RunCommand(Cli() + " perturb --mechanism cmp --epsilon 2 --embedding-file " +
             (root_ / "emb.txt").string() + " --input " +
             (root_ / "docs.csv").string() + " --seed 11 --output " +
             (root_ / "pert2.txt").string());
  EXPECT_EQ(contents, ReadFile(root_ / "pert2.txt"));
}

TEST_F(CliTest, PdReportsMeans) {
  const auto result = RunCommand(
      Cli() + " pd --mechanism santext --epsilon 1 --embedding-file " +
      (root_ / "emb.txt").string() + " --input " +
      (root_ / "docs.csv").string() +
      " --seed 3 --probe-count 3 --trials 20");
  ASSERT_EQ(result.exit_code, 0) << result.output;
  EXPECT_NE(result.output.find("N_w ="), std::string::npos);
  EXPECT_NE(result.output.find("S_w ="), std::string::npos);
}

TEST_F(CliTest, MetricsComparesCorpora) {
  RunCommand(Cli() + " perturb --mechanism santext --epsilon 5 " +
             "--embedding-file " + (root_ / "emb.txt").string() + " --input " +
             (root_ / "docs.csv").string() + " --seed 4 --output " +
             (root_ / "pert.txt").string());
  const auto result = RunCommand(
      Cli() + " metrics --input " + (root_ / "docs.csv").string() +
      " --perturbed " + (root_ / "pert.txt").string() + " --embedding-file " +
      (root_ / "emb.txt").string());
  ASSERT_EQ(result.exit_code, 0) << result.output;
  EXPECT_NE(result.output.find("PP  ="), std::string::npos);
  EXPECT_NE(result.output.find("CS  ="), std::string::npos);
  EXPECT_NE(result.output.find("LOW ="), std::string::npos);
}

TEST_F(CliTest, PucReproducesPublishedAnchor) {
  const std::string data_dir = std::string(MLDP_SOURCE_DIR) + "/data/published";
  const auto result = RunCommand(Cli() + " puc --privacy " + data_dir +
                                 "/privacy_imdb.csv --accuracy " + data_dir +
                                 "/accuracy_imdb.csv --alphas 0.75");
  ASSERT_EQ(result.exit_code, 0) << result.output;
  EXPECT_NE(result.output.find("82.22"), std::string::npos);
}

TEST_F(CliTest, RegressOnPublishedMetricsShowsSignPattern) {
  const std::string data_dir = std::string(MLDP_SOURCE_DIR) + "/data/published";
  const auto result =
      RunCommand(Cli() + " regress --metrics " + data_dir + "/privacy_imdb.csv");
  ASSERT_EQ(result.exit_code, 0) << result.output;
  EXPECT_NE(result.output.find("R^2"), std::string::npos);
  EXPECT_NE(result.output.find("epsilon"), std::string::npos);
}

TEST_F(CliTest, RunAndReportEndToEnd) {
  const std::string out_dir = (root_ / "run_out").string();
  const auto result = RunCommand(
      Cli() + " run --dataset " + (root_ / "docs.csv").string() +
      " --embedding 2=" + (root_ / "emb.txt").string() +
      " --mechanisms cmp,santext --epsilons 1,5 --seed 99 --probe-count 3" +
      " --trials 10 --threads 1 --output-dir " + out_dir);
  ASSERT_EQ(result.exit_code, 0) << result.output;
  EXPECT_NE(result.output.find("4/4 grid cells completed"), std::string::npos);
  EXPECT_TRUE(fs::exists(fs::path(out_dir) / "metrics.csv"));

  const auto report = RunCommand(Cli() + " report --dir " + out_dir);
  ASSERT_EQ(report.exit_code, 0) << report.output;
  EXPECT_NE(report.output.find("privacy metrics"), std::string::npos);
}

TEST_F(CliTest, RunRequiresSeed) {
  const auto result = RunCommand(
      Cli() + " run --dataset " + (root_ / "docs.csv").string() +
      " --embedding 2=" + (root_ / "emb.txt").string() +
      " --mechanisms cmp --output-dir " + (root_ / "nope").string());
  EXPECT_NE(result.exit_code, 0);
  EXPECT_NE(result.output.find("seed"), std::string::npos);
}

TEST_F(CliTest, RunExitsNonZeroWhenACellFails) {
  const std::string out_dir = (root_ / "run_fail").string();
  const auto result = RunCommand(
      Cli() + " run --dataset " + (root_ / "docs.csv").string() +
      " --embedding 2=" + (root_ / "emb.txt").string() +
      " --mechanisms gumbel,cmp --epsilons 1 --seed 1 --probe-count 2" +
      " --trials 5 --threads 1 --output-dir " + out_dir);
  EXPECT_EQ(result.exit_code, 1);
  EXPECT_NE(result.output.find("infeasible"), std::string::npos);
  EXPECT_NE(result.output.find("1/2 grid cells completed"), std::string::npos);
}

}  // namespace
