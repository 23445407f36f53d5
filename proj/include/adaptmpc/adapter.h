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

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "adaptmpc/ring.h"
#include "adaptmpc/share.h"

namespace adaptmpc {

// Searchable adapter architecture plus the backbone dimensions it attaches
// to. Defaults are desk scale.
struct AdapterConfig {
  int h = 1;            // attention heads
  int r = 8;            // low-rank width
  int s = 1;            // stacked adapters
  double scaler = 0.5;  // weight of the adapter branch in the residual
  int d_model = 32;
  int n_tokens = 8;     // N, including [CLS] at row 0
  int n_classes = 10;

  void validate() const;
  int head_dim() const { return r / h; }
  int mlp_hidden() const { return 2 * r; }

  friend bool operator==(const AdapterConfig&, const AdapterConfig&) = default;
};

// Per-adapter parameters. T is RealMatrix / RingMatrix / FixedTensor /
// ArithShare depending on who holds them.
template <typename T>
struct AdapterParams {
  T down_proj;   // d_model x r
  T w_q;         // r x r
  T w_k;         // r x r
  T w_v;         // r x r
  T w_l;         // N x N, shared by all heads
  T attn_out;    // r x r
  T up_proj;     // r x d_model
  T mlp_fc1;     // r x 2r
  T mlp_fc2;     // 2r x r
  T ln1_gain;    // 1 x r
  T ln1_bias;    // 1 x r
  T ln2_gain;    // 1 x r
  T ln2_bias;    // 1 x r

  template <typename Self, typename F>
  static void visit(Self& self, F&& f) {
    f("down_proj", self.down_proj);
    f("w_q", self.w_q);
    f("w_k", self.w_k);
    f("w_v", self.w_v);
    f("w_l", self.w_l);
    f("attn_out", self.attn_out);
    f("up_proj", self.up_proj);
    f("mlp_fc1", self.mlp_fc1);
    f("mlp_fc2", self.mlp_fc2);
    f("ln1_gain", self.ln1_gain);
    f("ln1_bias", self.ln1_bias);
    f("ln2_gain", self.ln2_gain);
    f("ln2_bias", self.ln2_bias);
  }
};

template <typename T>
struct PipelineParams {
  std::vector<AdapterParams<T>> adapters;
  T norm_gain;   // 1 x d_model
  T norm_bias;   // 1 x d_model
  T classifier;  // d_model x n_classes

  // Calls f(name, tensor) for every tensor in manifest order.
  template <typename F>
  void for_each(F&& f) {
    visit_impl(*this, f);
  }
  template <typename F>
  void for_each(F&& f) const {
    visit_impl(*this, f);
  }

 private:
  template <typename Self, typename F>
  static void visit_impl(Self& self, F& f) {
    for (std::size_t i = 0; i < self.adapters.size(); ++i) {
      const std::string prefix = "adapter" + std::to_string(i) + ".";
      AdapterParams<T>::visit(self.adapters[i],
                              [&](const char* name, auto& t) { f(prefix + name, t); });
    }
    f(std::string("head.norm_gain"), self.norm_gain);
    f(std::string("head.norm_bias"), self.norm_bias);
    f(std::string("head.classifier"), self.classifier);
  }
};

// Converts every tensor with `fn`, keeping the layout.
template <typename U, typename T, typename F>
PipelineParams<U> map_params(const PipelineParams<T>& in, F&& fn) {
  PipelineParams<U> out;
  out.adapters.resize(in.adapters.size());
  for (std::size_t i = 0; i < in.adapters.size(); ++i) {
    const auto& a = in.adapters[i];
    auto& b = out.adapters[i];
    b.down_proj = fn(a.down_proj);
    b.w_q = fn(a.w_q);
    b.w_k = fn(a.w_k);
    b.w_v = fn(a.w_v);
    b.w_l = fn(a.w_l);
    b.attn_out = fn(a.attn_out);
    b.up_proj = fn(a.up_proj);
    b.mlp_fc1 = fn(a.mlp_fc1);
    b.mlp_fc2 = fn(a.mlp_fc2);
    b.ln1_gain = fn(a.ln1_gain);
    b.ln1_bias = fn(a.ln1_bias);
    b.ln2_gain = fn(a.ln2_gain);
    b.ln2_bias = fn(a.ln2_bias);
  }
  out.norm_gain = fn(in.norm_gain);
  out.norm_bias = fn(in.norm_bias);
  out.classifier = fn(in.classifier);
  return out;
}

// (name, rows x cols) for every tensor of the pipeline, in manifest order.
std::vector<std::pair<std::string, std::array<Index, 2>>> param_shapes(
    const AdapterConfig& config);

// Random weights scaled so that, for N(0, 1) features, every LayerNorm input
// variance stays inside [kRsqrtLo, kRsqrtHi] at desk scale.
PipelineParams<RealMatrix> random_params(const AdapterConfig& config, Prg& prg);
// N x d_model standard-normal features.
RealMatrix random_features(const AdapterConfig& config, Prg& prg);

// Polynomial p with p(var) ~ 1/sqrt(var), coefficients in increasing degree.
// Round budget 3 uses a cubic, budget 2 an affine map; both are
// relative-error minimax fits on [kRsqrtLo, kRsqrtHi].
inline constexpr double kRsqrtLo = 0.1;
inline constexpr double kRsqrtHi = 10.0;
const std::vector<double>& rsqrt_poly(int round_budget);
std::vector<double> fit_rsqrt_poly(int degree, double lo, double hi);
double eval_poly(const std::vector<double>& coeffs, double x);

}  // namespace adaptmpc
