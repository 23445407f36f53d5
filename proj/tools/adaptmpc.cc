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

// Command-line driver: private inference, oracle verification, profiling,
// cost-model fitting, latency estimation, architecture search and reports.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "adaptmpc/config.h"
#include "adaptmpc/cost_model.h"
#include "adaptmpc/errors.h"
#include "adaptmpc/inference.h"
#include "adaptmpc/nas.h"
#include "adaptmpc/plain_nn.h"
#include "adaptmpc/tensor_io.h"
#include "adaptmpc/weights.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace adaptmpc {
namespace {

enum ExitCode : int {
  kExitOk = 0,
  kExitFail = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitProtocol = 4,
};

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool json = false;
};

RunConfig load_config(const Globals& g) {
  RunConfig rc;
  if (!g.config_path.empty()) rc = load_run_config(g.config_path);
  if (g.seed) rc.seed = *g.seed;
  return rc;
}

void emit(const Globals& g, const json& doc,
          const std::function<void(std::ostream&)>& human) {
  if (g.json) {
    std::cout << doc.dump(2) << "\n";
  } else {
    human(std::cout);
  }
}

void write_json_file(const fs::path& path, const json& doc) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << doc.dump(2) << "\n";
}

json arch_json(const Arch& a) { return {{"h", a.h}, {"r", a.r}, {"s", a.s}}; }

Arch arch_of(const AdapterConfig& c) { return {c.h, c.r, c.s}; }

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::vector<CostCoefficients> load_fitted(const std::vector<std::string>& paths) {
  std::vector<CostCoefficients> out;
  for (const auto& p : paths) out.push_back(load_coefficients(p));
  return out;
}

std::string coefficient_source(const CostCoefficients& c,
                               const std::vector<CostCoefficients>& fitted) {
  for (const auto& f : fitted) {
    if (&f == &c) return "fitted";
  }
  return "paper";
}

PipelineParams<FixedTensor> encode(const PipelineParams<RealMatrix>& real,
                                   const FixedPointConfig& fp) {
  return map_params<FixedTensor>(
      real, [&](const RealMatrix& m) { return FixedTensor::from_real(m, fp); });
}

// ---------------------------------------------------------------- gen

struct GenOptions {
  std::string weights_dir;
  std::string features;
  std::string dtype = "f32";
};

int cmd_gen(const Globals& g, const GenOptions& o) {
  RunConfig rc = load_config(g);
  const fs::path wdir = o.weights_dir.empty() ? rc.paths.weights_dir : o.weights_dir;
  const fs::path feat = o.features.empty() ? rc.paths.features_file : o.features;
  if (wdir.empty() || feat.empty()) {
    throw ConfigError("gen needs a weights directory and a features file");
  }
  const DType dtype = parse_dtype(o.dtype);
  Prg prg(rc.seed);
  const auto real = random_params(rc.adapter, prg);
  const RealMatrix x = random_features(rc.adapter, prg);
  save_weights(wdir, encode(real, rc.fixed_point), rc.adapter, dtype);
  if (feat.has_parent_path()) fs::create_directories(feat.parent_path());
  save_tensor(feat, FixedTensor::from_real(x, rc.fixed_point), dtype);

  const RealMatrix ref = pipeline_forward_plain(RealArith{}, x, real, rc.adapter);
  std::vector<double> logits(ref.data(), ref.data() + ref.size());
  const json doc = {{"weights_dir", wdir.string()},
                    {"features_file", feat.string()},
                    {"dtype", o.dtype},
                    {"seed", rc.seed},
                    {"reference_logits", logits}};
  emit(g, doc, [&](std::ostream& os) {
    os << "wrote " << (wdir / kManifestFile).string() << ", "
       << (wdir / kWeightsFile).string() << " and " << feat.string() << "\n";
  });
  return kExitOk;
}

// ---------------------------------------------------------------- infer

struct InferOptions {
  std::string transport = "inproc";
  std::optional<int> role;
  std::string addr = "127.0.0.1:7700";
  int connect_timeout_s = 30;
};

json report_json(const InferenceResult& r, const RunConfig& rc,
                 const std::string& transport) {
  std::vector<double> logits(r.logits.data(), r.logits.data() + r.logits.size());
  return {{"logits", logits},
          {"argmax", r.argmax},
          {"rounds", r.rounds},
          {"bytes", r.bytes},
          {"io_bytes", r.io_bytes},
          {"simulated_comm_time", r.simulated_comm_time},
          {"wall_comp_time", r.wall_comp_time},
          {"env", rc.env.label},
          {"transport", transport},
          {"adapter", adapter_to_json(rc.adapter)}};
}

void print_report(std::ostream& os, const InferenceResult& r,
                  const RunConfig& rc) {
  os << "logits:";
  for (Index i = 0; i < r.logits.cols(); ++i) os << " " << fixed(r.logits(0, i), 4);
  os << "\nargmax:              " << r.argmax
     << "\nrounds:              " << r.rounds
     << "\nbytes (online):      " << r.bytes
     << "\nbytes (in/out):      " << r.io_bytes
     << "\nsimulated comm time: " << fixed(r.simulated_comm_time, 6) << " s ("
     << rc.env.label << ")"
     << "\nwall compute time:   " << fixed(r.wall_comp_time, 6) << " s\n";
}

FixedTensor load_features(const RunConfig& rc) {
  if (rc.paths.features_file.empty()) {
    throw ConfigError("paths.features_file is not set");
  }
  return load_tensor(rc.paths.features_file, parse_dtype(rc.paths.features_dtype),
                     rc.fixed_point);
}

WeightsBundle load_model(const RunConfig& rc) {
  if (rc.paths.weights_dir.empty()) {
    throw ConfigError("paths.weights_dir is not set");
  }
  WeightsBundle w = load_weights(rc.paths.weights_dir, rc.fixed_point);
  if (!(w.config == rc.adapter)) {
    throw ConfigError("adapter config in " + rc.paths.weights_dir +
                      " differs from the run config");
  }
  return w;
}

void save_report(const RunConfig& rc, const json& doc) {
  if (rc.paths.output_dir.empty()) return;
  fs::create_directories(rc.paths.output_dir);
  write_json_file(fs::path(rc.paths.output_dir) / "report.json", doc);
}

int cmd_infer(const Globals& g, const InferOptions& o) {
  const RunConfig rc = load_config(g);
  const auto timeout = std::chrono::seconds(o.connect_timeout_s);

  if (o.role) {
    // Party 0 listens, party 1 connects.
    const auto [host, port] = parse_address(o.addr);
    if (*o.role == 1) {
      const WeightsBundle w = load_model(rc);
      Channel chan(1, tcp_connect(host, port, timeout));
      run_model_server(chan, rc.adapter, w.params, rc.seed);
      const json doc = {{"role", 1}, {"status", "done"},
                        {"rounds", chan.meter().rounds()},
                        {"bytes_sent", chan.meter().bytes_sent()}};
      emit(g, doc, [&](std::ostream& os) {
        os << "model server finished: " << chan.meter().rounds() << " rounds, "
           << chan.meter().bytes_sent() << " bytes sent\n";
      });
      return kExitOk;
    }
    const FixedTensor x = load_features(rc);
    TcpListener listener(host, port);
    Channel chan(0, listener.accept(timeout));
    const InferenceResult r = run_model_user(chan, rc.adapter, x, rc.seed, rc.env);
    const json doc = report_json(r, rc, "tcp");
    save_report(rc, doc);
    emit(g, doc, [&](std::ostream& os) { print_report(os, r, rc); });
    return kExitOk;
  }

  TransportKind kind;
  if (o.transport == "inproc") {
    kind = TransportKind::kInProcess;
  } else if (o.transport == "tcp") {
    kind = TransportKind::kTcpLoopback;
  } else {
    throw ConfigError("transport must be inproc or tcp");
  }
  const FixedTensor x = load_features(rc);
  const WeightsBundle w = load_model(rc);
  const InferenceResult r = infer_local(rc.adapter, x, w.params, rc.seed, rc.env, kind);
  const json doc = report_json(r, rc, o.transport);
  save_report(rc, doc);
  emit(g, doc, [&](std::ostream& os) { print_report(os, r, rc); });
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
  int inputs = 100;
  double tolerance = 1e-2;
  double min_agreement = 0.98;
};

int cmd_verify(const Globals& g, const VerifyOptions& o) {
  const RunConfig rc = load_config(g);
  if (o.inputs < 1) throw ConfigError("--inputs must be >= 1");
  Prg wprg(rc.seed);
  const auto real = random_params(rc.adapter, wprg);
  const auto weights = encode(real, rc.fixed_point);

  double worst = 0;
  std::uint64_t worst_seed = 0;
  int agree = 0;
  std::uint64_t rounds = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < o.inputs; ++i) {
    const std::uint64_t input_seed = rc.seed + 1 + static_cast<std::uint64_t>(i);
    Prg xprg(input_seed);
    const RealMatrix x = random_features(rc.adapter, xprg);
    const auto r = infer_local(rc.adapter, FixedTensor::from_real(x, rc.fixed_point),
                               weights, input_seed, rc.env);
    const RealMatrix ref = pipeline_forward_plain(RealArith{}, x, real, rc.adapter);
    const double err = (r.logits - ref).cwiseAbs().maxCoeff();
    if (err > worst || i == 0) {
      worst = err;
      worst_seed = input_seed;
    }
    Index ref_arg = 0;
    ref.row(0).maxCoeff(&ref_arg);
    agree += ref_arg == r.argmax;
    rounds = r.rounds;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double agreement = static_cast<double>(agree) / o.inputs;
  const bool pass = worst <= o.tolerance && agreement >= o.min_agreement;

  const json doc = {{"inputs", o.inputs},
                    {"max_abs_error", worst},
                    {"worst_input_seed", worst_seed},
                    {"argmax_agreement", agreement},
                    {"tolerance", o.tolerance},
                    {"min_agreement", o.min_agreement},
                    {"rounds_per_inference", rounds},
                    {"seconds", seconds},
                    {"pass", pass}};
  emit(g, doc, [&](std::ostream& os) {
    os << "inputs:            " << o.inputs
       << "\nmax abs error:     " << std::scientific << std::setprecision(3) << worst
       << std::defaultfloat << " (tolerance " << o.tolerance << ")"
       << "\nargmax agreement:  " << fixed(100 * agreement, 1) << "% (need "
       << fixed(100 * o.min_agreement, 1) << "%)"
       << "\nrounds/inference:  " << rounds
       << "\nelapsed:           " << fixed(seconds, 2) << " s\n"
       << (pass ? "PASS" : "FAIL");
    if (!pass) os << " (worst-case input seed " << worst_seed << ")";
    os << "\n";
  });
  return pass ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------- estimate

struct EstimateOptions {
  std::optional<int> h, r, s;
  std::string env;
  std::vector<std::string> coefficients;
};

int cmd_estimate(const Globals& g, const EstimateOptions& o) {
  const RunConfig rc = load_config(g);
  Arch a = arch_of(rc.adapter);
  if (o.h) a.h = *o.h;
  if (o.r) a.r = *o.r;
  if (o.s) a.s = *o.s;
  if (a.h < 1 || a.r < 1 || a.s < 1) throw ConfigError("h, r, s must be >= 1");
  const std::string env = o.env.empty() ? rc.env.label : o.env;
  const auto fitted = load_fitted(o.coefficients);
  const CostCoefficients& c = coefficients_for(env, fitted);
  const auto est = estimate_latency(a, c);
  const std::string source = coefficient_source(c, fitted);

  const json doc = {{"arch", arch_json(a)},
                    {"env", env},
                    {"rounds", estimate_rounds(a.s)},
                    {"comm_gb", estimate_comm_gb(a)},
                    {"comm_time_s", est.comm_time},
                    {"comp_time_s", est.comp_time},
                    {"latency_s", est.total()},
                    {"coefficients", source}};
  emit(g, doc, [&](std::ostream& os) {
    os << "config " << to_string(a) << ", " << env << " (" << source
       << " coefficients)\n"
       << "rounds:     " << estimate_rounds(a.s) << "\n"
       << "comm:       " << fixed(estimate_comm_gb(a), 4) << " GB\n"
       << "comm time:  " << fixed(est.comm_time, 4) << " s\n"
       << "comp time:  " << fixed(est.comp_time, 4) << " s\n"
       << "latency:    " << fixed(est.total(), 2) << " s\n";
  });
  return kExitOk;
}

// ---------------------------------------------------------------- profile

struct ProfileOptions {
  std::vector<int> heads{1, 2, 4};
  std::vector<int> ranks{4, 8, 16};
  std::vector<int> s_values{1, 2, 3};
  std::string out;
  std::string transport = "inproc";
};

int cmd_profile(const Globals& g, const ProfileOptions& o) {
  const RunConfig rc = load_config(g);
  std::vector<Arch> grid;
  for (int s : o.s_values)
    for (int h : o.heads)
      for (int r : o.ranks)
        if (h > 0 && r % h == 0) grid.push_back({h, r, s});
  if (grid.empty()) throw ConfigError("profile grid is empty");
  const TransportKind kind = o.transport == "tcp" ? TransportKind::kTcpLoopback
                                                  : TransportKind::kInProcess;
  const auto samples = profile_pipeline(grid, rc.adapter, rc.env, rc.seed, kind);

  fs::path out = o.out;
  if (out.empty() && !rc.paths.output_dir.empty()) {
    fs::create_directories(rc.paths.output_dir);
    out = fs::path(rc.paths.output_dir) / "profile.csv";
  }
  if (!out.empty()) save_profile_csv(out, samples);

  json rows = json::array();
  for (const auto& p : samples) {
    rows.push_back({{"h", p.arch.h}, {"r", p.arch.r}, {"s", p.arch.s},
                    {"comm_time_s", p.comm_time_s}, {"comp_time_s", p.comp_time_s},
                    {"rounds", p.rounds}, {"bytes", p.bytes}});
  }
  const json doc = {{"env", rc.env.label}, {"samples", rows},
                    {"csv", out.string()}};
  emit(g, doc, [&](std::ostream& os) {
    if (out.empty()) {
      write_profile_csv(os, samples);
    } else {
      os << "profiled " << samples.size() << " configs under " << rc.env.label
         << ", wrote " << out.string() << "\n";
    }
  });
  return kExitOk;
}

// ---------------------------------------------------------------- fit

struct FitOptions {
  std::string profile;
  std::string env;
  std::string out;
};

int cmd_fit(const Globals& g, const FitOptions& o) {
  const RunConfig rc = load_config(g);
  const std::string env = o.env.empty() ? rc.env.label : o.env;
  const auto samples = load_profile_csv(o.profile);
  const auto c = fit_cost_model(samples, env);
  if (!o.out.empty()) save_coefficients(o.out, c);
  emit(g, to_json(c), [&](std::ostream& os) {
    auto line = [&](const char* name, const std::array<double, 4>& k, double r2) {
      os << name << " = (" << std::setprecision(6) << k[0] << " h + " << k[1]
         << " r + " << k[2] << ") s + " << k[3] << "   R^2 = " << fixed(r2, 4)
         << "\n";
    };
    os << "env " << env << ", " << samples.size() << " samples\n";
    line("comm_time", c.comm, c.r2_comm);
    line("comp_time", c.comp, c.r2_comp);
    if (!o.out.empty()) os << "wrote " << o.out << "\n";
  });
  return kExitOk;
}

// ---------------------------------------------------------------- search

struct SearchCliOptions {
  std::vector<int> heads{1, 2, 4, 6, 12};
  std::vector<int> ranks{60, 120, 180, 240, 300};
  int s_max = 2;
  int h_init = 0;
  int r_init = 0;
  double u_target = 0.95;
  double l_target = 3.0;
  int t_target = 40;
  std::string controller = "softmax";
  double lr = 0.1;
  std::uint64_t max_samples = 10000;
  std::string utility_table;
  std::string evaluator_cmd;
  std::string env;
  std::vector<std::string> coefficients;
  bool brute_force = false;
};

json result_json(const SearchResult& r) {
  json doc = {{"found", r.found},
              {"met_target", r.met_target},
              {"samples", r.samples},
              {"evaluations", r.evaluations.size()}};
  if (r.found) {
    doc["arch"] = arch_json(r.arch);
    doc["utility"] = r.utility;
    doc["latency_s"] = r.latency;
  }
  return doc;
}

void print_result(std::ostream& os, const char* label, const SearchResult& r) {
  os << label;
  if (!r.found) {
    os << "no feasible config\n";
    return;
  }
  os << to_string(r.arch) << "  U = " << fixed(r.utility, 4)
     << "  latency = " << fixed(r.latency, 4) << " s  "
     << (r.met_target ? "(target met)" : "(target not met)") << ", "
     << r.evaluations.size() << " evaluations, " << r.samples << " samples\n";
}

int cmd_search(const Globals& g, const SearchCliOptions& o) {
  const RunConfig rc = load_config(g);
  SearchSpace space;
  space.heads = o.heads;
  space.ranks = o.ranks;
  space.s_max = o.s_max;
  space.h_init = o.h_init;
  space.r_init = o.r_init;
  const SearchTargets targets{o.u_target, o.l_target, o.t_target};
  space.validate();
  targets.validate();

  const std::string env = o.env.empty() ? rc.env.label : o.env;
  const auto fitted = load_fitted(o.coefficients);
  const CostCoefficients& coeffs = coefficients_for(env, fitted);
  const LatencyModel latency = latency_model(coeffs);

  std::unique_ptr<UtilityEvaluator> evaluator;
  if (!o.evaluator_cmd.empty()) {
    evaluator = std::make_unique<CommandEvaluator>(o.evaluator_cmd);
  } else {
    const std::string table =
        o.utility_table.empty() ? rc.paths.utility_table : o.utility_table;
    if (table.empty()) {
      throw ConfigError("search needs --utility-table, paths.utility_table or "
                        "--evaluator-cmd");
    }
    evaluator = std::make_unique<TableEvaluator>(TableEvaluator::load(table));
  }

  std::optional<Controller> controller;
  if (o.controller == "exhaustive") {
    controller.emplace(Controller::exhaustive(space.valid_pairs()));
  } else if (o.controller == "softmax") {
    ControllerOptions copt;
    copt.learning_rate = o.lr;
    controller.emplace(space.valid_pairs(), rc.seed, copt);
  } else {
    throw ConfigError("controller must be softmax or exhaustive");
  }

  const SearchResult res =
      nas_search(targets, latency, space, *evaluator, *controller, {o.max_samples});
  std::optional<SearchResult> oracle;
  if (o.brute_force) {
    oracle = brute_force_search(targets, latency, space, *evaluator);
  }

  json doc = result_json(res);
  doc["controller"] = o.controller;
  doc["env"] = env;
  doc["coefficients"] = coefficient_source(coeffs, fitted);
  doc["targets"] = {{"u_target", o.u_target}, {"l_target", o.l_target},
                    {"t_target", o.t_target}};
  if (oracle) {
    doc["brute_force"] = result_json(*oracle);
    doc["matches_brute_force"] =
        oracle->found == res.found && (!res.found || oracle->arch == res.arch);
  }
  emit(g, doc, [&](std::ostream& os) {
    os << "search space: " << space.valid_pairs().size() << " (h, r) pairs x s <= "
       << space.s_max << ", " << o.controller << " controller, " << env
       << " latency model\n";
    print_result(os, "search:      ", res);
    if (oracle) print_result(os, "brute force: ", *oracle);
  });
  return kExitOk;
}

// ---------------------------------------------------------------- report

struct ReportOptions {
  std::string env = "WAN";
  std::vector<std::string> coefficients;
};

int cmd_report(const Globals& g, const ReportOptions& o) {
  const RunConfig rc = load_config(g);
  const auto fitted = load_fitted(o.coefficients);
  const CostCoefficients& coeffs = coefficients_for(o.env, fitted);
  const BaselineCosts& base = sft_baseline(o.env);

  struct Row {
    std::string label;
    Arch arch;
    std::string arch_source;
    std::optional<double> published;
    std::string published_source;
  };
  std::vector<Row> rows;
  for (const auto& p : kWanEfficiencyFirst) {
    std::optional<double> pub;
    if (o.env == "WAN") pub = p.wan_estimate_s;
    rows.push_back({p.dataset, p.arch, p.arch_source, pub, p.estimate_source});
  }
  rows.push_back({"run config", arch_of(rc.adapter), "", {}, ""});

  json baseline = {{"method", "SFT (last layer)"},
                   {"env", base.env},
                   {"comm_gb", base.comm_gb},
                   {"rounds", base.rounds},
                   {"comm_time_s", base.comm_time_s},
                   {"total_time_s", base.total_time_s},
                   {"source", base.source}};
  json out_rows = json::array();
  for (const auto& row : rows) {
    const auto rounds = estimate_rounds(row.arch.s);
    const double gb = estimate_comm_gb(row.arch);
    const double lat = estimate_latency(row.arch, coeffs).total();
    json j = {{"label", row.label},
              {"arch", arch_json(row.arch)},
              {"rounds", rounds},
              {"comm_gb", gb},
              {"est_latency_s", lat},
              {"speedup_rounds", static_cast<double>(base.rounds) / rounds},
              {"speedup_comm", base.comm_gb / gb},
              {"speedup_latency", base.total_time_s / lat}};
    if (!row.arch_source.empty()) j["arch_source"] = row.arch_source;
    if (row.published) {
      j["published_estimate_s"] = *row.published;
      j["published_source"] = row.published_source;
    }
    out_rows.push_back(j);
  }
  const json doc = {{"env", o.env},
                    {"coefficients", coefficient_source(coeffs, fitted)},
                    {"baseline", baseline},
                    {"rows", out_rows}};

  emit(g, doc, [&](std::ostream& os) {
    os << "Private inference cost, " << o.env << " ("
       << coefficient_source(coeffs, fitted) << " coefficients)\n"
       << "Baseline SFT (last layer): " << base.comm_gb << " GB [" << base.source
       << "], " << base.rounds << " rounds [" << base.source << "], "
       << base.total_time_s << " s total [" << base.source << "]\n\n";
    os << std::left << std::setw(24) << "config" << std::right << std::setw(7)
       << "rounds" << std::setw(9) << "GB" << std::setw(12) << "est. lat."
       << std::setw(16) << "published" << std::setw(11) << "x rounds"
       << std::setw(10) << "x GB" << std::setw(11) << "x latency" << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      const json& j = out_rows[i];
      std::string pub = "-";
      if (row.published) {
        pub = fixed(*row.published, 2) + " [" + row.published_source + "]";
      }
      std::ostringstream cfg;
      cfg << row.label << " {" << row.arch.h << "," << row.arch.r << ","
          << row.arch.s << "}";
      if (!row.arch_source.empty()) cfg << "*";
      os << std::left << std::setw(24) << cfg.str() << std::right << std::setw(7)
         << j["rounds"].get<std::uint64_t>() << std::setw(9)
         << fixed(j["comm_gb"].get<double>(), 4) << std::setw(12)
         << fixed(j["est_latency_s"].get<double>(), 2) << std::setw(16) << pub
         << std::setw(10) << fixed(j["speedup_rounds"].get<double>(), 2) << "x"
         << std::setw(9) << fixed(j["speedup_comm"].get<double>(), 2) << "x"
         << std::setw(10) << fixed(j["speedup_latency"].get<double>(), 2) << "x"
         << "\n";
    }
    os << "\n* architecture from " << kWanEfficiencyFirst[0].arch_source
       << " (efficiency-first, WAN)\n";
  });
  return kExitOk;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ShapeError*>(&e) ||
      dynamic_cast<const OverflowError*>(&e) ||
      dynamic_cast<const UnderdeterminedError*>(&e)) {
    return kExitUsage;
  }
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const FormatError*>(&e)) {
    return kExitIo;
  }
  if (dynamic_cast<const ProtocolError*>(&e) ||
      dynamic_cast<const TransportError*>(&e)) {
    return kExitProtocol;
  }
  return kExitFail;
}

}  // namespace
}  // namespace adaptmpc

int main(int argc, char** argv) {
  using namespace adaptmpc;
  CLI::App app{"Two-party private inference for adapter pipelines"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "Run configuration (JSON)")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Override the configured seed");
  app.add_flag("--json", g.json, "Print JSON to stdout");

  std::function<int()> run;

  GenOptions gen;
  auto* c_gen = app.add_subcommand("gen", "Write random weights and features");
  c_gen->add_option("--weights-dir", gen.weights_dir);
  c_gen->add_option("--features", gen.features);
  c_gen->add_option("--dtype", gen.dtype)->check(CLI::IsMember({"f32", "u64ring"}));
  c_gen->callback([&] { run = [&] { return cmd_gen(g, gen); }; });

  InferOptions inf;
  auto* c_inf = app.add_subcommand("infer", "Run one private inference");
  c_inf->add_option("--transport", inf.transport, "inproc or tcp (loopback)")
      ->check(CLI::IsMember({"inproc", "tcp"}));
  c_inf->add_option("--role", inf.role, "0: model user, 1: model server")
      ->check(CLI::IsMember({0, 1}));
  c_inf->add_option("--addr", inf.addr, "host:port; role 0 listens, role 1 connects");
  c_inf->add_option("--connect-timeout", inf.connect_timeout_s, "Seconds");
  c_inf->callback([&] { run = [&] { return cmd_infer(g, inf); }; });

  VerifyOptions ver;
  auto* c_ver = app.add_subcommand("verify", "Private vs plaintext over seeded inputs");
  c_ver->add_option("--inputs", ver.inputs);
  c_ver->add_option("--tolerance", ver.tolerance);
  c_ver->add_option("--min-agreement", ver.min_agreement);
  c_ver->callback([&] { run = [&] { return cmd_verify(g, ver); }; });

  EstimateOptions est;
  auto* c_est = app.add_subcommand("estimate", "Rounds, volume and latency from the cost model");
  c_est->set_help_flag("--help", "Print this help message and exit");
  c_est->add_option("--h", est.h);
  c_est->add_option("--r", est.r);
  c_est->add_option("--s", est.s);
  c_est->add_option("--env", est.env, "Environment label (default: config env)");
  c_est->add_option("--coefficients", est.coefficients, "Fitted coefficients JSON")
      ->check(CLI::ExistingFile);
  c_est->callback([&] { run = [&] { return cmd_estimate(g, est); }; });

  ProfileOptions prof;
  auto* c_prof = app.add_subcommand("profile", "Measure the engine over a grid");
  c_prof->add_option("--heads", prof.heads)->delimiter(',');
  c_prof->add_option("--ranks", prof.ranks)->delimiter(',');
  c_prof->add_option("--s-values", prof.s_values)->delimiter(',');
  c_prof->add_option("--out", prof.out, "CSV path");
  c_prof->add_option("--transport", prof.transport)
      ->check(CLI::IsMember({"inproc", "tcp"}));
  c_prof->callback([&] { run = [&] { return cmd_profile(g, prof); }; });

  FitOptions fit;
  auto* c_fit = app.add_subcommand("fit", "Least-squares latency model from a profile");
  c_fit->add_option("--profile", fit.profile)->required()->check(CLI::ExistingFile);
  c_fit->add_option("--env", fit.env);
  c_fit->add_option("--out", fit.out, "Coefficients JSON path");
  c_fit->callback([&] { run = [&] { return cmd_fit(g, fit); }; });

  SearchCliOptions sea;
  auto* c_sea = app.add_subcommand("search", "Latency-constrained architecture search");
  c_sea->add_option("--heads", sea.heads)->delimiter(',');
  c_sea->add_option("--ranks", sea.ranks)->delimiter(',');
  c_sea->add_option("--s-max", sea.s_max);
  c_sea->add_option("--h-init", sea.h_init);
  c_sea->add_option("--r-init", sea.r_init);
  c_sea->add_option("--u-target", sea.u_target);
  c_sea->add_option("--l-target", sea.l_target, "Seconds");
  c_sea->add_option("--t-target", sea.t_target, "Patience");
  c_sea->add_option("--controller", sea.controller)
      ->check(CLI::IsMember({"softmax", "exhaustive"}));
  c_sea->add_option("--lr", sea.lr);
  c_sea->add_option("--max-samples", sea.max_samples);
  c_sea->add_option("--utility-table", sea.utility_table)->check(CLI::ExistingFile);
  c_sea->add_option("--evaluator-cmd", sea.evaluator_cmd);
  c_sea->add_option("--env", sea.env);
  c_sea->add_option("--coefficients", sea.coefficients)->check(CLI::ExistingFile);
  c_sea->add_flag("--brute-force", sea.brute_force, "Also run the exhaustive oracle");
  c_sea->callback([&] { run = [&] { return cmd_search(g, sea); }; });

  ReportOptions rep;
  auto* c_rep = app.add_subcommand("report", "Cost table against the SFT baseline");
  c_rep->add_option("--env", rep.env);
  c_rep->add_option("--coefficients", rep.coefficients)->check(CLI::ExistingFile);
  c_rep->callback([&] { run = [&] { return cmd_report(g, rep); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return run();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
