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

#include "adaptmpc/config.h"
#include "adaptmpc/tensor_io.h"

#include <fstream>
#include <initializer_list>
#include <set>

namespace adaptmpc {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out,
              const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for " + where + "." + key);
  }
}

std::string resolve(const std::string& p, const std::filesystem::path& base) {
  if (p.empty() || base.empty()) return p;
  const std::filesystem::path path(p);
  return path.is_absolute() ? p : (base / path).lexically_normal().string();
}

}  // namespace

json adapter_to_json(const AdapterConfig& c) {
  return {{"h", c.h},
          {"r", c.r},
          {"s", c.s},
          {"scaler", c.scaler},
          {"d_model", c.d_model},
          {"n_tokens", c.n_tokens},
          {"n_classes", c.n_classes}};
}

AdapterConfig adapter_from_json(const json& a) {
  reject_unknown(a, {"h", "r", "s", "scaler", "d_model", "n_tokens", "n_classes"},
                 "adapter");
  AdapterConfig c;
  read_opt(a, "h", c.h, "adapter");
  read_opt(a, "r", c.r, "adapter");
  read_opt(a, "s", c.s, "adapter");
  read_opt(a, "scaler", c.scaler, "adapter");
  read_opt(a, "d_model", c.d_model, "adapter");
  read_opt(a, "n_tokens", c.n_tokens, "adapter");
  read_opt(a, "n_classes", c.n_classes, "adapter");
  c.validate();
  return c;
}

void RunConfig::validate() const {
  fixed_point.validate();
  adapter.validate();
  env.validate();
  parse_dtype(paths.features_dtype);
}

RunConfig parse_run_config(const json& doc,
                           const std::filesystem::path& base_dir) {
  reject_unknown(doc, {"fixed_point", "adapter", "env", "paths", "seed"},
                 "config");
  RunConfig rc;
  if (doc.contains("fixed_point")) {
    const auto& fp = doc["fixed_point"];
    reject_unknown(fp, {"frac_bits"}, "fixed_point");
    read_opt(fp, "frac_bits", rc.fixed_point.frac_bits, "fixed_point");
  }
  if (doc.contains("adapter")) rc.adapter = adapter_from_json(doc["adapter"]);
  if (doc.contains("env")) {
    const auto& e = doc["env"];
    reject_unknown(e, {"label", "bandwidth_mbps", "latency_ms"}, "env");
    std::string label = "WAN";
    read_opt(e, "label", label, "env");
    rc.env = (label == "LAN" || label == "WAN") ? NetworkEnv::by_label(label)
                                                : NetworkEnv{label, 0, 0};
    if (e.contains("bandwidth_mbps")) {
      double mbps = 0;
      read_opt(e, "bandwidth_mbps", mbps, "env");
      rc.env.bandwidth_bps = mbps * 1e6;
    }
    if (e.contains("latency_ms")) {
      double ms = 0;
      read_opt(e, "latency_ms", ms, "env");
      rc.env.latency_s = ms * 1e-3;
    }
  }
  if (doc.contains("paths")) {
    const auto& p = doc["paths"];
    reject_unknown(p, {"weights_dir", "features_file", "features_dtype",
                       "utility_table", "output_dir"},
                   "paths");
    read_opt(p, "weights_dir", rc.paths.weights_dir, "paths");
    read_opt(p, "features_file", rc.paths.features_file, "paths");
    read_opt(p, "features_dtype", rc.paths.features_dtype, "paths");
    read_opt(p, "utility_table", rc.paths.utility_table, "paths");
    read_opt(p, "output_dir", rc.paths.output_dir, "paths");
    rc.paths.weights_dir = resolve(rc.paths.weights_dir, base_dir);
    rc.paths.features_file = resolve(rc.paths.features_file, base_dir);
    rc.paths.utility_table = resolve(rc.paths.utility_table, base_dir);
    rc.paths.output_dir = resolve(rc.paths.output_dir, base_dir);
  }
  read_opt(doc, "seed", rc.seed, "config");
  try {
    rc.validate();
  } catch (const FormatError& e) {
    throw ConfigError(e.what());
  }
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_run_config(doc, path.parent_path());
}

json to_json(const RunConfig& c) {
  return {{"fixed_point", {{"frac_bits", c.fixed_point.frac_bits}}},
          {"adapter", adapter_to_json(c.adapter)},
          {"env",
           {{"label", c.env.label},
            {"bandwidth_mbps", c.env.bandwidth_bps / 1e6},
            {"latency_ms", c.env.latency_s * 1e3}}},
          {"paths",
           {{"weights_dir", c.paths.weights_dir},
            {"features_file", c.paths.features_file},
            {"features_dtype", c.paths.features_dtype},
            {"utility_table", c.paths.utility_table},
            {"output_dir", c.paths.output_dir}}},
          {"seed", c.seed}};
}

}  // namespace adaptmpc
