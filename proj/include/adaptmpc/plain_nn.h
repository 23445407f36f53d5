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

#include <vector>

#include "adaptmpc/adapter.h"
#include "adaptmpc/ring.h"

namespace adaptmpc {

// Arithmetic policies for the plaintext reference pipeline. RealArith works
// in double precision; FixedArith mirrors the fixed-point encoding with one
// truncation after every product.
struct RealArith {
  using Scalar = double;
  using Mat = RealMatrix;

  Mat lift(const RealMatrix& x) const { return x; }
  RealMatrix lower(const Mat& x) const { return x; }

  Mat matmul(const Mat& a, const Mat& b) const { return a * b; }
  Mat mul(const Mat& a, const Mat& b) const {
    const auto [r, c] = broadcast_shape(a.rows(), a.cols(), b.rows(), b.cols());
    return broadcast_to(a, r, c).cwiseProduct(broadcast_to(b, r, c));
  }
  Mat add(const Mat& a, const Mat& b) const {
    const auto [r, c] = broadcast_shape(a.rows(), a.cols(), b.rows(), b.cols());
    return broadcast_to(a, r, c) + broadcast_to(b, r, c);
  }
  Mat sub(const Mat& a, const Mat& b) const {
    const auto [r, c] = broadcast_shape(a.rows(), a.cols(), b.rows(), b.cols());
    return broadcast_to(a, r, c) - broadcast_to(b, r, c);
  }
  Mat scale(const Mat& a, double c) const { return a * c; }
  Mat row_mean(const Mat& a) const { return a.rowwise().mean(); }
  Mat relu(const Mat& a) const { return a.cwiseMax(0.0); }
};

struct FixedArith {
  using Scalar = Ring;
  using Mat = RingMatrix;

  FixedPointConfig config;

  Mat lift(const RealMatrix& x) const { return encode_fixed(x, config); }
  RealMatrix lower(const Mat& x) const { return decode_fixed(x, config); }

  Mat matmul(const Mat& a, const Mat& b) const {
    return arshift(a * b, config.frac_bits);
  }
  Mat mul(const Mat& a, const Mat& b) const {
    const auto [r, c] = broadcast_shape(a.rows(), a.cols(), b.rows(), b.cols());
    return arshift(broadcast_to(a, r, c).cwiseProduct(broadcast_to(b, r, c)),
                   config.frac_bits);
  }
  Mat add(const Mat& a, const Mat& b) const {
    const auto [r, c] = broadcast_shape(a.rows(), a.cols(), b.rows(), b.cols());
    return broadcast_to(a, r, c) + broadcast_to(b, r, c);
  }
  Mat sub(const Mat& a, const Mat& b) const {
    const auto [r, c] = broadcast_shape(a.rows(), a.cols(), b.rows(), b.cols());
    return broadcast_to(a, r, c) - broadcast_to(b, r, c);
  }
  Mat scale(const Mat& a, double c) const {
    return arshift(a * encode_fixed(c, config), config.frac_bits);
  }
  Mat row_mean(const Mat& a) const {
    return scale(a.rowwise().sum(), 1.0 / static_cast<double>(a.cols()));
  }
  Mat relu(const Mat& a) const {
    return a.unaryExpr([](Ring v) { return to_signed(v) < 0 ? Ring{0} : v; });
  }
};

// LayerNorm with the polynomial inverse square root of the given round
// budget: out = (x - mean) * gain * p(var) + bias.
template <typename Arith>
typename Arith::Mat layernorm_plain(const Arith& ar, const typename Arith::Mat& x,
                                    const typename Arith::Mat& gain,
                                    const typename Arith::Mat& bias,
                                    int round_budget) {
  const std::vector<double>& p = rsqrt_poly(round_budget);
  const auto centered = ar.sub(x, ar.row_mean(x));
  const auto var = ar.row_mean(ar.mul(centered, centered));
  const auto u = ar.mul(centered, gain);
  auto out = ar.scale(u, p[0]);
  if (round_budget == 2) {
    out = ar.add(out, ar.scale(ar.mul(u, var), p[1]));
  } else {
    const auto var2 = ar.mul(var, var);
    const auto uv = ar.mul(u, var);
    out = ar.add(out, ar.scale(uv, p[1]));
    out = ar.add(out, ar.scale(ar.mul(u, var2), p[2]));
    out = ar.add(out, ar.scale(ar.mul(uv, var2), p[3]));
  }
  return ar.add(out, bias);
}

// L(Q K^T) V per head; heads are column blocks of width r/h.
template <typename Arith>
typename Arith::Mat linatten_plain(const Arith& ar, const typename Arith::Mat& q,
                                   const typename Arith::Mat& k,
                                   const typename Arith::Mat& v,
                                   const typename Arith::Mat& w_l, int heads) {
  using Mat = typename Arith::Mat;
  const Index n = q.rows();
  const Index dh = q.cols() / heads;
  Mat scores(n, n * heads);
  for (int i = 0; i < heads; ++i) {
    const Mat qi = q.middleCols(i * dh, dh);
    const Mat kt = k.middleCols(i * dh, dh).transpose();
    scores.middleCols(i * n, n) = ar.matmul(qi, kt);
  }
  const Mat mixed = ar.matmul(w_l, scores);
  Mat out(n, q.cols());
  for (int i = 0; i < heads; ++i) {
    const Mat ti = mixed.middleCols(i * n, n);
    const Mat vi = v.middleCols(i * dh, dh);
    out.middleCols(i * dh, dh) = ar.matmul(ti, vi);
  }
  return out;
}

template <typename Arith>
typename Arith::Mat adapter_forward_plain(
    const Arith& ar, const typename Arith::Mat& x,
    const AdapterParams<typename Arith::Mat>& w, const AdapterConfig& config) {
  const auto u = ar.matmul(x, w.down_proj);
  const auto n1 = layernorm_plain(ar, u, w.ln1_gain, w.ln1_bias, 3);
  const auto q = ar.matmul(n1, w.w_q);
  const auto k = ar.matmul(n1, w.w_k);
  const auto v = ar.matmul(n1, w.w_v);
  const auto att = linatten_plain(ar, q, k, v, w.w_l, config.h);
  const auto a = ar.add(u, ar.matmul(att, w.attn_out));
  const auto n2 = layernorm_plain(ar, a, w.ln2_gain, w.ln2_bias, 3);
  const auto hidden = ar.relu(ar.matmul(n2, w.mlp_fc1));
  const auto z = ar.add(a, ar.matmul(hidden, w.mlp_fc2));
  return ar.add(x, ar.scale(ar.matmul(z, w.up_proj), config.scaler));
}

// s adapters, final norm on the [CLS] row, classifier. Returns 1 x n_classes.
template <typename Arith>
typename Arith::Mat pipeline_forward_plain(
    const Arith& ar, const typename Arith::Mat& x,
    const PipelineParams<typename Arith::Mat>& w, const AdapterConfig& config) {
  typename Arith::Mat h = x;
  for (const auto& a : w.adapters) h = adapter_forward_plain(ar, h, a, config);
  const typename Arith::Mat cls = h.topRows(1);
  const auto normed = layernorm_plain(ar, cls, w.norm_gain, w.norm_bias, 2);
  return ar.matmul(normed, w.classifier);
}

}  // namespace adaptmpc
