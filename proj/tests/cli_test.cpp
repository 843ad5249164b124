// Copyright 2026 The thermosched Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

const fs::path kData = THERMOSCHED_DATA_DIR;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("thermosched-cli-" + std::string(::testing::UnitTest::GetInstance()
                                                  ->current_test_info()
                                                  ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string(THERMOSCHED_CLI) + " " + args + " > " +
                            (dir_ / "stdout").string() + " 2> " + (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string file(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, GenerateIsReproducibleAndWritesManifest) {
  const std::string args = "generate --n 6 --seed 11 --kernels " +
                           (kData / "kernels-imx8-mixed.csv").string() + " -o ";
  ASSERT_EQ(run(args + path("a.json")), 0);
  ASSERT_EQ(run(args + path("b.json")), 0);
  EXPECT_EQ(file("a.json"), file("b.json"));
  const nlohmann::json manifest = nlohmann::json::parse(file("a.json.manifest.json"));
  EXPECT_EQ(manifest["command"], "generate");
  EXPECT_EQ(manifest["rng_seed"], 11);
  EXPECT_EQ(manifest["exit_code"], 0);
  EXPECT_TRUE(manifest.contains("tool_version"));
  EXPECT_EQ(run("replay --check " + path("a.json.manifest.json")), 0);
}

TEST_F(CliTest, UnseededRunRecordsItsSeed) {
  ASSERT_EQ(run("generate --n 4 --kernels " + (kData / "kernels-imx8-mixed.csv").string() +
                " -o " + path("r.json")),
            0);
  const nlohmann::json manifest = nlohmann::json::parse(file("r.json.manifest.json"));
  ASSERT_TRUE(manifest["rng_seed"].is_number());
  EXPECT_EQ(run("replay --check " + path("r.json.manifest.json")), 0);
}

TEST_F(CliTest, EvaluatesExampleSchedule) {
  ASSERT_EQ(run("evaluate " + (kData / "three-task-window-instance.json").string() + " " +
                (kData / "three-task-window-assignment.json").string() + " --model sm -o " +
                path("sm.json")),
            0);
  const nlohmann::json report = nlohmann::json::parse(file("sm.json"));
  EXPECT_NEAR(report["watts"].get<double>(), 8.58, 0.005);
}

TEST_F(CliTest, SolveExitCodes) {
  const std::string inst = (kData / "seven-task-schedule-instance.json").string();
  EXPECT_EQ(run("solve " + inst + " --method ilp-sm -o " + path("s.json")), 0);
  const nlohmann::json result = nlohmann::json::parse(file("s.json"));
  EXPECT_EQ(result["status"], "optimal");
  EXPECT_EQ(run("export-gantt " + inst + " " + path("s.json") + " -o " + path("g.svg")), 0);
  EXPECT_NE(file("g.svg").find("<svg"), std::string::npos);

  nlohmann::json doc = nlohmann::json::parse(std::ifstream(inst));
  doc["max_windows"] = 2;
  doc["major_frame_ms"] = 150;
  std::ofstream(path("tight.json")) << doc.dump();
  EXPECT_EQ(run("solve " + path("tight.json") + " --method ilp-sm -o " + path("t.json")), 2);
}

TEST_F(CliTest, UsageAndInputErrors) {
  const std::string inst = (kData / "seven-task-schedule-instance.json").string();
  EXPECT_EQ(run("solve " + inst + " --method flow-fixed"), 64);
  EXPECT_EQ(run("solve " + inst + " --method nope"), 64);
  EXPECT_EQ(run("generate --n 3"), 64);
  std::ofstream(path("bad.json")) << "{\"platform\": {}}";
  EXPECT_EQ(run("solve " + path("bad.json") + " --method ilp-sm"), 1);
  EXPECT_NE(file("stderr").find("/platform"), std::string::npos);
}

}  // namespace
