// Copyright 2026 The SchemaForge Authors
//
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

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#ifndef SCHEMAFORGE_CLI
#error "SCHEMAFORGE_CLI must name the command-line tool"
#endif

namespace {

struct CliResult {
  int status;
  std::string output;
};

// Runs the tool through the shell with stderr folded into stdout.
CliResult run(const std::string& args, const std::string& env = "") {
  const std::string command = env + " '" SCHEMAFORGE_CLI "' " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  std::string output;
  std::array<char, 4096> buffer{};
  while (std::fgets(buffer.data(), buffer.size(), pipe) != nullptr) output += buffer.data();
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

const std::string kKey = "sk-cli-secret-4242";

}  // namespace

TEST(Cli, RejectsKeyOnCommandLine) {
  const CliResult r = run("--api-key " + kKey + " infer x.json");
  EXPECT_EQ(r.status, 2);
}

TEST(Cli, KeyFromEnvironmentNeverPrinted) {
  const auto dir = std::filesystem::temp_directory_path() / "sf-cli-test";
  std::filesystem::create_directories(dir);
  const auto doc = dir / "doc.json";
  const auto target = dir / "target.json";
  std::FILE* f = std::fopen(doc.c_str(), "w");
  std::fputs("{\"a\": 1}", f);
  std::fclose(f);
  f = std::fopen(target.c_str(), "w");
  std::fputs("{\"type\": \"object\"}", f);
  std::fclose(f);
  const CliResult r = run("--endpoint http://127.0.0.1:1/v1 map generate --input '" + doc.string() + "' --target-schema '" +
                        target.string() + "'",
                    "SCHEMAFORGE_API_KEY=" + kKey);
  EXPECT_EQ(r.status, 3) << r.output;
  EXPECT_EQ(r.output.find(kKey), std::string::npos) << r.output;
  std::filesystem::remove_all(dir);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("--replay a --record b map apply --input x --mapping y").status, 2);
}

TEST(Cli, ReportsParseErrorsWithPosition) {
  const auto path = std::filesystem::temp_directory_path() / "sf-cli-bad.json";
  std::FILE* f = std::fopen(path.c_str(), "w");
  std::fputs("{\n  \"a\": }", f);
  std::fclose(f);
  const CliResult r = run("infer '" + path.string() + "'");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.output.find("parse error"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find('2'), std::string::npos) << r.output;
  std::filesystem::remove(path);
}
