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

#include "adaptmpc/private_nn.h"

#include <array>

namespace adaptmpc {

namespace {

ArithShare transpose(const ArithShare& x) {
  return {x.party, x.data.transpose(), x.config};
}

ArithShare cols(const ArithShare& x, Index start, Index count) {
  return {x.party, x.data.middleCols(start, count), x.config};
}

ArithShare row_mean(const ArithShare& x) {
  ArithShare sum{x.party, x.data.rowwise().sum(), x.config};
  return scale_public(sum, 1.0 / static_cast<double>(x.cols()));
}

ArithShare broadcast_sub(const ArithShare& x, const ArithShare& col) {
  return {x.party, x.data - broadcast_to(col.data, x.rows(), x.cols()),
          x.config};
}

ArithShare broadcast_add(const ArithShare& x, const ArithShare& row) {
  return {x.party, x.data + broadcast_to(row.data, x.rows(), x.cols()),
          x.config};
}

std::vector<ArithShare> multiply_truncated(Party& party,
                                           std::span<const ProductTerm> terms) {
  auto out = multiply(party, terms);
  for (auto& z : out) z = truncate_share(z);
  return out;
}

// Openings made while this is alive must be Beaver-masked.
class AuditScope {
 public:
  explicit AuditScope(Channel& ch) : ch_(ch), prev_(ch.audit()) {
    ch_.set_audit(true);
  }
  ~AuditScope() { ch_.set_audit(prev_); }

 private:
  Channel& ch_;
  bool prev_;
};

}  // namespace

ArithShare linear_private(Party& party, const ArithShare& x,
                          const ArithShare& w, const ArithShare* bias) {
  MeterScope scope(party.meter(), "linear");
  ArithShare y = truncate_share(matmul_beaver(party, x, w));
  if (bias != nullptr) y = broadcast_add(y, *bias);
  return y;
}

ArithShare relu_private(Party& party, const ArithShare& x) {
  MeterScope scope(party.meter(), "relu");
  const ArithShare negative = ltz(party, x);
  const ArithShare keep = add_public(neg(negative), Ring{1});
  // keep is 0/1 at integer scale, so the product is already at scale 2^f.
  return mul_beaver(party, keep, x);
}

ArithShare layernorm_private(Party& party, const ArithShare& x,
                             const ArithShare& gain, const ArithShare& bias,
                             int round_budget) {
  MeterScope scope(party.meter(), "layernorm");
  const std::vector<double>& p = rsqrt_poly(round_budget);
  if (x.cols() < 2) throw ShapeError("layernorm needs at least 2 features");

  const ArithShare centered = broadcast_sub(x, row_mean(x));
  const std::array round1{ProductTerm{centered, centered},
                          ProductTerm{centered, gain}};
  const auto r1 = multiply_truncated(party, round1);
  const ArithShare var = row_mean(r1[0]);
  const ArithShare& u = r1[1];

  ArithShare out = scale_public(u, p[0]);
  if (round_budget == 2) {
    const std::array round2{ProductTerm{u, var}};
    const auto r2 = multiply_truncated(party, round2);
    out = add(out, scale_public(r2[0], p[1]));
  } else {
    const std::array round2{ProductTerm{var, var}, ProductTerm{u, var}};
    const auto r2 = multiply_truncated(party, round2);
    const ArithShare& var2 = r2[0];
    const ArithShare& uv = r2[1];
    const std::array round3{ProductTerm{u, var2}, ProductTerm{uv, var2}};
    const auto r3 = multiply_truncated(party, round3);
    out = add(out, scale_public(uv, p[1]));
    out = add(out, scale_public(r3[0], p[2]));
    out = add(out, scale_public(r3[1], p[3]));
  }
  return broadcast_add(out, bias);
}

ArithShare linatten_private(Party& party, const ArithShare& q,
                            const ArithShare& k, const ArithShare& v,
                            const ArithShare& w_l, int heads) {
  MeterScope scope(party.meter(), "linatten");
  if (heads < 1 || q.cols() % heads != 0) {
    throw ShapeError("linatten: width " + std::to_string(q.cols()) +
                     " not divisible by " + std::to_string(heads) + " heads");
  }
  if (k.rows() != q.rows() || k.cols() != q.cols() || v.rows() != q.rows() ||
      v.cols() != q.cols()) {
    throw ShapeError("linatten: Q, K, V shapes differ");
  }
  if (w_l.rows() != q.rows() || w_l.cols() != q.rows()) {
    throw ShapeError("linatten: W_L must be N x N");
  }
  const Index n = q.rows();
  const Index dh = q.cols() / heads;

  std::vector<ArithShare> qs, kts;
  for (int i = 0; i < heads; ++i) {
    qs.push_back(cols(q, i * dh, dh));
    kts.push_back(transpose(cols(k, i * dh, dh)));
  }
  std::vector<ArithShare> scores;
  {
    MeterScope mm(party.meter(), "matmul");
    std::vector<ProductTerm> terms;
    for (int i = 0; i < heads; ++i) {
      terms.push_back({qs[static_cast<std::size_t>(i)],
                       kts[static_cast<std::size_t>(i)], Product::kMatmul});
    }
    scores = multiply_truncated(party, terms);
  }
  ArithShare stacked{q.party, RingMatrix(n, n * heads), q.config};
  for (int i = 0; i < heads; ++i) {
    stacked.data.middleCols(i * n, n) = scores[static_cast<std::size_t>(i)].data;
  }
  const ArithShare mixed = linear_private(party, w_l, stacked);

  std::vector<ArithShare> ts, vs;
  for (int i = 0; i < heads; ++i) {
    ts.push_back(cols(mixed, i * n, n));
    vs.push_back(cols(v, i * dh, dh));
  }
  std::vector<ArithShare> heads_out;
  {
    MeterScope mm(party.meter(), "matmul");
    std::vector<ProductTerm> terms;
    for (int i = 0; i < heads; ++i) {
      terms.push_back({ts[static_cast<std::size_t>(i)],
                       vs[static_cast<std::size_t>(i)], Product::kMatmul});
    }
    heads_out = multiply_truncated(party, terms);
  }
  ArithShare out{q.party, RingMatrix(n, q.cols()), q.config};
  for (int i = 0; i < heads; ++i) {
    out.data.middleCols(i * dh, dh) = heads_out[static_cast<std::size_t>(i)].data;
  }
  return out;
}

ArithShare adapter_forward_private(Party& party, const ArithShare& x,
                                   const AdapterParams<ArithShare>& w,
                                   const AdapterConfig& config) {
  MeterScope scope(party.meter(), "adapter");
  const ArithShare u = linear_private(party, x, w.down_proj);
  const ArithShare n1 = layernorm_private(party, u, w.ln1_gain, w.ln1_bias, 3);
  const ArithShare q = linear_private(party, n1, w.w_q);
  const ArithShare k = linear_private(party, n1, w.w_k);
  const ArithShare v = linear_private(party, n1, w.w_v);
  const ArithShare att = linatten_private(party, q, k, v, w.w_l, config.h);
  const ArithShare a = add(u, linear_private(party, att, w.attn_out));
  const ArithShare n2 = layernorm_private(party, a, w.ln2_gain, w.ln2_bias, 3);
  const ArithShare hidden =
      relu_private(party, linear_private(party, n2, w.mlp_fc1));
  const ArithShare z = add(a, linear_private(party, hidden, w.mlp_fc2));
  return add(x, scale_public(linear_private(party, z, w.up_proj),
                             config.scaler));
}

ArithShare pipeline_forward_private(Party& party, const ArithShare& x,
                                    const PipelineParams<ArithShare>& w,
                                    const AdapterConfig& config) {
  config.validate();
  if (static_cast<int>(w.adapters.size()) != config.s) {
    throw ShapeError("pipeline: expected " + std::to_string(config.s) +
                     " adapters, got " + std::to_string(w.adapters.size()));
  }
  if (x.rows() != config.n_tokens || x.cols() != config.d_model) {
    throw ShapeError("pipeline: features must be " +
                     std::to_string(config.n_tokens) + "x" +
                     std::to_string(config.d_model));
  }
  AuditScope audit(party.channel());
  MeterScope scope(party.meter(), "pipeline");
  ArithShare h = x;
  for (const auto& a : w.adapters) {
    h = adapter_forward_private(party, h, a, config);
  }
  const ArithShare cls{h.party, h.data.topRows(1), h.config};
  const ArithShare normed =
      layernorm_private(party, cls, w.norm_gain, w.norm_bias, 2);
  return linear_private(party, normed, w.classifier);
}

}  // namespace adaptmpc
