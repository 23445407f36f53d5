// Copyright 2026 The adaptmpc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "adaptmpc/config.h"
#include "adaptmpc/errors.h"
#include "adaptmpc/weights.h"
#include "json.hpp"
#include "test_util.h"

namespace adaptmpc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("adaptmpc_cfg_" + std::to_string(::getpid()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

json desk() {
  return json::parse(R"({
    "fixed_point": {"frac_bits": 16},
    "adapter": {"h": 2, "r": 8, "s": 1, "scaler": 0.5,
                "d_model": 32, "n_tokens": 8, "n_classes": 10},
    "env": {"label": "WAN"},
    "paths": {"weights_dir": "w", "features_file": "/abs/x.cpft"},
    "seed": 9
  })");
}

TEST(ConfigTest, ParsesAndResolvesPaths) {
  const RunConfig rc = parse_run_config(desk(), "/base/cfg");
  EXPECT_EQ(rc.adapter.h, 2);
  EXPECT_EQ(rc.seed, 9u);
  EXPECT_EQ(rc.env.bandwidth_bps, 400e6);
  EXPECT_EQ(fs::path(rc.paths.weights_dir), fs::path("/base/cfg/w"));
  EXPECT_EQ(rc.paths.features_file, "/abs/x.cpft");
}

TEST(ConfigTest, EnvOverrides) {
  json doc = desk();
  doc["env"] = {{"label", "LAN"}, {"latency_ms", 2}};
  const RunConfig rc = parse_run_config(doc);
  EXPECT_EQ(rc.env.bandwidth_bps, 1e9);
  EXPECT_DOUBLE_EQ(rc.env.latency_s, 2e-3);
}

TEST(ConfigTest, RejectsUnknownKeys) {
  json doc = desk();
  doc["adapter"]["heads"] = 4;
  EXPECT_THROW(parse_run_config(doc), ConfigError);
  doc = desk();
  doc["extra"] = 1;
  EXPECT_THROW(parse_run_config(doc), ConfigError);
}

TEST(ConfigTest, RejectsInvalidAdapter) {
  json doc = desk();
  doc["adapter"]["r"] = 9;  // not divisible by h
  EXPECT_THROW(parse_run_config(doc), ConfigError);
  doc = desk();
  doc["adapter"]["s"] = 0;
  EXPECT_THROW(parse_run_config(doc), ConfigError);
}

TEST(ConfigTest, JsonRoundtrip) {
  const RunConfig rc = parse_run_config(desk(), "/b");
  const RunConfig back = parse_run_config(to_json(rc));
  EXPECT_EQ(back.adapter, rc.adapter);
  EXPECT_EQ(back.seed, rc.seed);
  EXPECT_EQ(back.env.latency_s, rc.env.latency_s);
  EXPECT_EQ(back.paths.weights_dir, rc.paths.weights_dir);
}

TEST(ConfigTest, MissingFile) {
  EXPECT_THROW(load_run_config("/nonexistent/run.json"), IoError);
}

TEST(WeightsTest, Roundtrip) {
  TempDir dir;
  const AdapterConfig c = testing::desk_config(2, 8, 2);
  Prg prg(3);
  auto w = testing::encode_params(random_params(c, prg));
  save_weights(dir.path(), w, c, DType::kU64Ring);
  auto back = load_weights(dir.path(), {});
  EXPECT_EQ(back.config, c);
  std::vector<RingMatrix> a, b;
  w.for_each([&](const std::string&, const FixedTensor& t) { a.push_back(t.values()); });
  back.params.for_each(
      [&](const std::string&, const FixedTensor& t) { b.push_back(t.values()); });
  EXPECT_EQ(a, b);
}

TEST(WeightsTest, MissingFileNamesPath) {
  TempDir dir;
  const AdapterConfig c = testing::desk_config(1, 8, 1);
  Prg prg(4);
  save_weights(dir.path(), testing::encode_params(random_params(c, prg)), c);
  fs::remove(dir.path() / kWeightsFile);
  try {
    load_weights(dir.path(), {});
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find(kWeightsFile), std::string::npos);
  }
}

TEST(WeightsTest, RejectsTrailingBytes) {
  TempDir dir;
  const AdapterConfig c = testing::desk_config(1, 8, 1);
  Prg prg(5);
  save_weights(dir.path(), testing::encode_params(random_params(c, prg)), c);
  std::ofstream(dir.path() / kWeightsFile, std::ios::app) << "x";
  EXPECT_THROW(load_weights(dir.path(), {}), FormatError);
}

TEST(WeightsTest, RejectsShapeMismatch) {
  TempDir dir;
  const AdapterConfig c = testing::desk_config(1, 8, 1);
  Prg prg(6);
  save_weights(dir.path(), testing::encode_params(random_params(c, prg)), c);
  json m = json::parse(std::ifstream(dir.path() / kManifestFile));
  m["tensors"][0]["shape"] = {32, 16};
  std::ofstream(dir.path() / kManifestFile) << m.dump();
  EXPECT_THROW(load_weights(dir.path(), {}), ShapeError);
}

}  // namespace
}  // namespace adaptmpc
