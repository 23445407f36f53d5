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

#include "adaptmpc/cost_model.h"

#include <fstream>
#include <set>
#include <sstream>

#include <Eigen/QR>

#include "adaptmpc/errors.h"
#include "adaptmpc/inference.h"
#include "adaptmpc/share.h"

namespace adaptmpc {

namespace {

double affine(const std::array<double, 4>& c, const Arch& a) {
  return (c[0] * a.h + c[1] * a.r + c[2]) * a.s + c[3];
}

double r_squared(const Eigen::VectorXd& y, const Eigen::VectorXd& fit) {
  const double ss_res = (y - fit).squaredNorm();
  const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
  if (ss_tot == 0) return ss_res == 0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

const char* const kCsvHeader = "h,r,s,comm_time_s,comp_time_s,rounds,bytes";

}  // namespace

std::string to_string(const Arch& a) {
  return "{h=" + std::to_string(a.h) + ", r=" + std::to_string(a.r) +
         ", s=" + std::to_string(a.s) + "}";
}

double CostCoefficients::comm_time(const Arch& a) const {
  return affine(comm, a);
}

double CostCoefficients::comp_time(const Arch& a) const {
  return affine(comp, a);
}

CostCoefficients CostCoefficients::paper_wan() {
  CostCoefficients c;
  c.env = "WAN";
  c.comm = {0.02117, 0.00344, 0.35828, 0.15541};
  c.comp = {0.01711, 0.00121, 0.12311, 0.16581};
  c.r2_comm = 0.9975;
  c.r2_comp = 0.9873;
  return c;
}

std::uint64_t estimate_rounds(int s) {
  if (s < 1) throw ConfigError("s must be >= 1");
  return 26 * static_cast<std::uint64_t>(s) + 3;
}

double estimate_comm_gb(const Arch& a) {
  return (0.001153 * a.h + 0.000187 * a.r + 0.000578) * a.s + 0.005692;
}

LatencyEstimate estimate_latency(const Arch& a, const CostCoefficients& c) {
  return {c.comm_time(a), c.comp_time(a)};
}

const CostCoefficients& coefficients_for(
    const std::string& label, std::span<const CostCoefficients> fitted) {
  for (const auto& c : fitted) {
    if (c.env == label) return c;
  }
  static const CostCoefficients wan = CostCoefficients::paper_wan();
  if (label == wan.env) return wan;
  throw ConfigError("no cost coefficients for env '" + label +
                    "' (fit them with `adaptmpc fit`)");
}

const BaselineCosts& sft_baseline(const std::string& env_label) {
  if (env_label == "LAN") return kSftBaselineLan;
  if (env_label == "WAN") return kSftBaselineWan;
  throw ConfigError("no baseline constants for env '" + env_label + "'");
}

CostCoefficients fit_cost_model(std::span<const ProfileSample> samples,
                                const std::string& env) {
  if (samples.size() < 5) {
    throw UnderdeterminedError("need at least 5 samples, got " +
                               std::to_string(samples.size()));
  }
  std::set<int> hs, rs, ss;
  for (const auto& p : samples) {
    hs.insert(p.arch.h);
    rs.insert(p.arch.r);
    ss.insert(p.arch.s);
  }
  std::string missing;
  if (hs.size() < 2) missing += " h";
  if (rs.size() < 2) missing += " r";
  if (ss.size() < 2) missing += " s";
  if (!missing.empty()) {
    throw UnderdeterminedError("samples do not vary in:" + missing);
  }

  const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd x(n, 4);
  Eigen::VectorXd y_comm(n), y_comp(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Arch& a = samples[i].arch;
    x(i, 0) = static_cast<double>(a.h) * a.s;
    x(i, 1) = static_cast<double>(a.r) * a.s;
    x(i, 2) = a.s;
    x(i, 3) = 1.0;
    y_comm(i) = samples[i].comm_time_s;
    y_comp(i) = samples[i].comp_time_s;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < 4) {
    throw UnderdeterminedError(
        "design matrix (h s, r s, s, 1) is rank deficient: h, r and s vary "
        "together");
  }
  const Eigen::VectorXd b_comm = qr.solve(y_comm);
  const Eigen::VectorXd b_comp = qr.solve(y_comp);

  CostCoefficients c;
  c.env = env;
  for (int k = 0; k < 4; ++k) {
    c.comm[k] = b_comm(k);
    c.comp[k] = b_comp(k);
  }
  c.r2_comm = r_squared(y_comm, x * b_comm);
  c.r2_comp = r_squared(y_comp, x * b_comp);
  return c;
}

std::vector<ProfileSample> profile_pipeline(std::span<const Arch> grid,
                                            const AdapterConfig& base,
                                            const NetworkEnv& env,
                                            std::uint64_t seed,
                                            TransportKind kind) {
  const FixedPointConfig fixed;
  std::vector<ProfileSample> out;
  out.reserve(grid.size());
  bool warm = false;
  for (const Arch& a : grid) {
    AdapterConfig cfg = base;
    cfg.h = a.h;
    cfg.r = a.r;
    cfg.s = a.s;
    cfg.validate();
    Prg prg(seed);
    const auto real = random_params(cfg, prg);
    const auto weights = map_params<FixedTensor>(real, [&](const RealMatrix& m) {
      return FixedTensor::from_real(m, fixed);
    });
    const auto x = FixedTensor::from_real(random_features(cfg, prg), fixed);
    if (!warm) {
      // Untimed first run: page in code and allocator state.
      infer_local(cfg, x, weights, seed, env, kind);
      warm = true;
    }
    const auto res = infer_local(cfg, x, weights, seed, env, kind);
    out.push_back({a, res.simulated_comm_time, res.wall_comp_time, res.rounds,
                   res.bytes});
  }
  return out;
}

void write_profile_csv(std::ostream& os,
                       std::span<const ProfileSample> samples) {
  os << kCsvHeader << "\n";
  os.precision(17);
  for (const auto& p : samples) {
    os << p.arch.h << "," << p.arch.r << "," << p.arch.s << ","
       << p.comm_time_s << "," << p.comp_time_s << "," << p.rounds << ","
       << p.bytes << "\n";
  }
}

std::vector<ProfileSample> read_profile_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw FormatError(std::string("profile CSV must start with '") +
                      kCsvHeader + "'");
  }
  std::vector<ProfileSample> out;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    ProfileSample p;
    char c1, c2, c3, c4, c5, c6;
    ls >> p.arch.h >> c1 >> p.arch.r >> c2 >> p.arch.s >> c3 >> p.comm_time_s >>
        c4 >> p.comp_time_s >> c5 >> p.rounds >> c6 >> p.bytes;
    if (!ls || c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',' || c5 != ',' ||
        c6 != ',' || (ls >> std::ws).peek() != std::char_traits<char>::eof()) {
      throw FormatError("malformed profile CSV line " + std::to_string(lineno));
    }
    if (p.comm_time_s < 0 || p.comp_time_s < 0) {
      throw FormatError("negative time on profile CSV line " +
                        std::to_string(lineno));
    }
    out.push_back(p);
  }
  return out;
}

void save_profile_csv(const std::filesystem::path& path,
                      std::span<const ProfileSample> samples) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  write_profile_csv(os, samples);
}

std::vector<ProfileSample> load_profile_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return read_profile_csv(is);
}

nlohmann::json to_json(const CostCoefficients& c) {
  return {{"env", c.env},
          {"comm", c.comm},
          {"comp", c.comp},
          {"r2_comm", c.r2_comm},
          {"r2_comp", c.r2_comp}};
}

CostCoefficients coefficients_from_json(const nlohmann::json& doc) {
  try {
    CostCoefficients c;
    c.env = doc.at("env").get<std::string>();
    c.comm = doc.at("comm").get<std::array<double, 4>>();
    c.comp = doc.at("comp").get<std::array<double, 4>>();
    c.r2_comm = doc.value("r2_comm", 0.0);
    c.r2_comp = doc.value("r2_comp", 0.0);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad coefficients JSON: ") + e.what());
  }
}

void save_coefficients(const std::filesystem::path& path,
                       const CostCoefficients& c) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << to_json(c).dump(2) << "\n";
}

CostCoefficients load_coefficients(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  try {
    return coefficients_from_json(nlohmann::json::parse(is));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace adaptmpc
