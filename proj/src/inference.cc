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

#include "adaptmpc/inference.h"

#include <chrono>
#include <cstring>
#include <vector>

#include "adaptmpc/private_nn.h"
#include "adaptmpc/protocols.h"
#include "adaptmpc/share.h"

namespace adaptmpc {

namespace {

class Fnv1a {
 public:
  template <typename T>
  void add(T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    for (unsigned char b : buf) {
      h_ ^= b;
      h_ *= 0x100000001b3ULL;
    }
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

std::vector<Shape> weight_shapes(const AdapterConfig& config) {
  std::vector<Shape> out;
  for (const auto& [name, shape] : param_shapes(config)) out.push_back(shape);
  return out;
}

}  // namespace

std::uint64_t session_digest(const AdapterConfig& config,
                             const FixedPointConfig& fixed,
                             std::uint64_t seed) {
  Fnv1a f;
  f.add(config.h);
  f.add(config.r);
  f.add(config.s);
  f.add(config.scaler);
  f.add(config.d_model);
  f.add(config.n_tokens);
  f.add(config.n_classes);
  f.add(fixed.frac_bits);
  f.add(seed);
  return f.value();
}

InferenceResult run_model_user(Channel& chan, const AdapterConfig& config,
                               const FixedTensor& features, std::uint64_t seed,
                               const NetworkEnv& env) {
  config.validate();
  const FixedPointConfig& fixed = features.config();
  if (features.rows() != config.n_tokens || features.cols() != config.d_model) {
    throw ShapeError("features must be " + std::to_string(config.n_tokens) +
                     "x" + std::to_string(config.d_model));
  }
  Party party(chan, seed, fixed);
  chan.handshake(session_digest(config, fixed, seed));

  // Send [x]_1, receive [W]_0 for every weight tensor.
  auto [x0, x1] = share_arith(features, party.prg());
  const std::vector<RingMatrix> out{x1.data};
  const auto shapes = weight_shapes(config);
  auto incoming = chan.exchange_io(out, shapes);

  PipelineParams<ArithShare> w;
  w.adapters.resize(config.s);
  std::size_t i = 0;
  w.for_each([&](const std::string&, ArithShare& t) {
    t = ArithShare{0, std::move(incoming[i++]), fixed};
  });

  const auto t0 = std::chrono::steady_clock::now();
  const ArithShare logits0 = pipeline_forward_private(party, x0, w, config);
  const auto t1 = std::chrono::steady_clock::now();

  // Output delivery: the server's logit share and its online counters.
  const std::vector<Shape> back{Shape{1, config.n_classes}, Shape{1, 2}};
  const auto delivered = chan.exchange_io({}, back);

  InferenceResult res;
  res.logits = decode_fixed(RingMatrix(logits0.data + delivered[0]), fixed);
  res.logits.row(0).maxCoeff(&res.argmax);
  const std::uint64_t peer_rounds = delivered[1](0, 0);
  const std::uint64_t peer_bytes = delivered[1](0, 1);
  res.rounds = std::max(chan.meter().rounds(), peer_rounds);
  res.bytes = chan.meter().bytes_sent() + peer_bytes;
  res.simulated_comm_time = simulate_latency(res.rounds, res.bytes, env);
  res.wall_comp_time = std::chrono::duration<double>(t1 - t0).count();
  res.meter = chan.meter();
  res.io_bytes = res.meter.io_bytes();
  return res;
}

void run_model_server(Channel& chan, const AdapterConfig& config,
                      const PipelineParams<FixedTensor>& weights,
                      std::uint64_t seed) {
  config.validate();
  if (weights.adapters.size() != static_cast<std::size_t>(config.s)) {
    throw ConfigError("server holds " + std::to_string(weights.adapters.size()) +
                      " adapters, config says " + std::to_string(config.s));
  }
  const FixedPointConfig fixed = weights.classifier.config();
  Party party(chan, seed, fixed);
  chan.handshake(session_digest(config, fixed, seed));

  // Keep [W]_1, send [W]_0; receive [x]_1.
  const auto expected = param_shapes(config);
  std::vector<RingMatrix> out;
  PipelineParams<ArithShare> w;
  w.adapters.resize(config.s);
  std::size_t i = 0;
  std::vector<const FixedTensor*> plain;
  weights.for_each([&](const std::string& name, const FixedTensor& t) {
    if (t.shape() != expected[i].second) {
      throw ShapeError("weight " + name + " does not match the adapter config");
    }
    plain.push_back(&t);
    ++i;
  });
  i = 0;
  w.for_each([&](const std::string&, ArithShare& t) {
    auto [s0, s1] = share_arith(*plain[i++], party.prg());
    out.push_back(std::move(s0.data));
    t = std::move(s1);
  });
  const std::vector<Shape> in{Shape{config.n_tokens, config.d_model}};
  auto incoming = chan.exchange_io(out, in);
  const ArithShare x1{1, std::move(incoming[0]), fixed};

  const ArithShare logits1 = pipeline_forward_private(party, x1, w, config);

  RingMatrix stats(1, 2);
  stats(0, 0) = chan.meter().rounds();
  stats(0, 1) = chan.meter().bytes_sent();
  const std::vector<RingMatrix> back{logits1.data, stats};
  chan.exchange_io(back, {});
}

InferenceResult infer_local(const AdapterConfig& config,
                            const FixedTensor& features,
                            const PipelineParams<FixedTensor>& weights,
                            std::uint64_t seed, const NetworkEnv& env,
                            TransportKind kind) {
  auto run = run_two_party(
      [&](Channel& c) {
        return run_model_user(c, config, features, seed, env);
      },
      [&](Channel& c) {
        run_model_server(c, config, weights, seed);
        return 0;
      },
      kind);
  return std::move(run.output0);
}

}  // namespace adaptmpc
