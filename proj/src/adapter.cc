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

#include "adaptmpc/adapter.h"

#include <cmath>
#include <map>
#include <mutex>
#include <random>

namespace adaptmpc {

void AdapterConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (h < 1) fail("h must be >= 1");
  if (r < 1) fail("r must be >= 1");
  if (s < 1) fail("s must be >= 1");
  if (r % h != 0) {
    fail("r=" + std::to_string(r) + " is not divisible by h=" +
         std::to_string(h));
  }
  if (!(scaler >= 0.0 && scaler <= 4.0)) fail("scaler must be in [0, 4]");
  if (d_model < 2) fail("d_model must be >= 2");
  if (n_tokens < 1) fail("n_tokens must be >= 1");
  if (n_classes < 1) fail("n_classes must be >= 1");
}

std::vector<std::pair<std::string, std::array<Index, 2>>> param_shapes(
    const AdapterConfig& c) {
  c.validate();
  PipelineParams<std::array<Index, 2>> shapes;
  const AdapterParams<std::array<Index, 2>> one{
      .down_proj = {c.d_model, c.r},
      .w_q = {c.r, c.r},
      .w_k = {c.r, c.r},
      .w_v = {c.r, c.r},
      .w_l = {c.n_tokens, c.n_tokens},
      .attn_out = {c.r, c.r},
      .up_proj = {c.r, c.d_model},
      .mlp_fc1 = {c.r, c.mlp_hidden()},
      .mlp_fc2 = {c.mlp_hidden(), c.r},
      .ln1_gain = {1, c.r},
      .ln1_bias = {1, c.r},
      .ln2_gain = {1, c.r},
      .ln2_bias = {1, c.r},
  };
  shapes.adapters.assign(static_cast<std::size_t>(c.s), one);
  shapes.norm_gain = {1, c.d_model};
  shapes.norm_bias = {1, c.d_model};
  shapes.classifier = {c.d_model, c.n_classes};

  std::vector<std::pair<std::string, std::array<Index, 2>>> out;
  shapes.for_each(
      [&](const std::string& name, const auto& shape) { out.emplace_back(name, shape); });
  return out;
}

namespace {

RealMatrix gaussian(Prg& prg, Index rows, Index cols, double stddev,
                    double mean = 0.0) {
  std::normal_distribution<double> dist(mean, stddev);
  RealMatrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = dist(prg);
  return m;
}

}  // namespace

PipelineParams<RealMatrix> random_params(const AdapterConfig& c, Prg& prg) {
  c.validate();
  const double d = c.d_model;
  const double r = c.r;
  const double n = c.n_tokens;
  PipelineParams<RealMatrix> p;
  for (int i = 0; i < c.s; ++i) {
    AdapterParams<RealMatrix> a;
    a.down_proj = gaussian(prg, c.d_model, c.r, 1.0 / std::sqrt(d));
    a.w_q = gaussian(prg, c.r, c.r, 1.0 / std::sqrt(r));
    a.w_k = gaussian(prg, c.r, c.r, 1.0 / std::sqrt(r));
    a.w_v = gaussian(prg, c.r, c.r, 1.0 / std::sqrt(r));
    // The attention branch is cubic in its input; keep it small so the
    // LayerNorm variances stay inside the inverse square root's fit interval.
    a.w_l = gaussian(prg, c.n_tokens, c.n_tokens,
                     1.0 / (16.0 * n * c.head_dim()));
    a.attn_out = gaussian(prg, c.r, c.r, 1.0 / std::sqrt(r));
    a.up_proj = gaussian(prg, c.r, c.d_model, 0.5 / std::sqrt(r));
    a.mlp_fc1 = gaussian(prg, c.r, c.mlp_hidden(), 1.0 / std::sqrt(r));
    a.mlp_fc2 = gaussian(prg, c.mlp_hidden(), c.r, 1.0 / std::sqrt(2 * r));
    a.ln1_gain = gaussian(prg, 1, c.r, 0.1, 1.0);
    a.ln1_bias = gaussian(prg, 1, c.r, 0.1);
    a.ln2_gain = gaussian(prg, 1, c.r, 0.1, 1.0);
    a.ln2_bias = gaussian(prg, 1, c.r, 0.1);
    p.adapters.push_back(std::move(a));
  }
  p.norm_gain = gaussian(prg, 1, c.d_model, 0.1, 1.0);
  p.norm_bias = gaussian(prg, 1, c.d_model, 0.1);
  p.classifier = gaussian(prg, c.d_model, c.n_classes, 1.0 / std::sqrt(d));
  return p;
}

RealMatrix random_features(const AdapterConfig& c, Prg& prg) {
  c.validate();
  return gaussian(prg, c.n_tokens, c.d_model, 1.0);
}

std::vector<double> fit_rsqrt_poly(int degree, double lo, double hi) {
  // Lawson's iteratively reweighted least squares converges to the minimax
  // fit of the relative error p(v) * sqrt(v) - 1.
  constexpr int kPoints = 400;
  constexpr int kIterations = 300;
  Eigen::MatrixXd a(kPoints, degree + 1);
  for (int i = 0; i < kPoints; ++i) {
    const double v = lo * std::pow(hi / lo, i / double(kPoints - 1));
    double pw = 1.0;
    for (int j = 0; j <= degree; ++j) {
      a(i, j) = pw * std::sqrt(v);
      pw *= v;
    }
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(kPoints);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(kPoints, 1.0 / kPoints);
  Eigen::VectorXd coef;
  for (int it = 0; it < kIterations; ++it) {
    const Eigen::VectorXd sw = w.cwiseSqrt();
    coef = (sw.asDiagonal() * a).colPivHouseholderQr().solve(sw.cwiseProduct(ones));
    const Eigen::VectorXd err = (a * coef - ones).cwiseAbs();
    w = w.cwiseProduct(err);
    const double total = w.sum();
    if (!(total > 0)) break;
    w /= total;
  }
  return {coef.data(), coef.data() + coef.size()};
}

const std::vector<double>& rsqrt_poly(int round_budget) {
  static std::mutex mu;
  static std::map<int, std::vector<double>> cache;
  if (round_budget != 2 && round_budget != 3) {
    throw ConfigError("layernorm round budget must be 2 or 3");
  }
  std::lock_guard lock(mu);
  auto it = cache.find(round_budget);
  if (it == cache.end()) {
    const int degree = round_budget == 3 ? 3 : 1;
    it = cache.emplace(round_budget, fit_rsqrt_poly(degree, kRsqrtLo, kRsqrtHi))
             .first;
  }
  return it->second;
}

double eval_poly(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace adaptmpc
