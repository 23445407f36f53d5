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

#include <gtest/gtest.h>

#include "adaptmpc/inference.h"
#include "adaptmpc/plain_nn.h"
#include "adaptmpc/protocols.h"
#include "adaptmpc/runtime.h"
#include "test_util.h"

namespace adaptmpc {
namespace {

using testing::desk_config;
using testing::encode_params;

RealMatrix run_real(const RealMatrix& x, const PipelineParams<RealMatrix>& w,
                    const AdapterConfig& c) {
  return pipeline_forward_plain(RealArith{}, x, w, c);
}

TEST(PipelineTest, MatchesDoubleReference) {
  const AdapterConfig c = desk_config(2, 8, 1);
  Prg prg(7);
  const auto w = random_params(c, prg);
  const RealMatrix x = random_features(c, prg);
  const FixedPointConfig fp;
  const auto res = infer_local(c, FixedTensor::from_real(x, fp),
                               encode_params(w, fp), 11, NetworkEnv::wan());
  const RealMatrix ref = run_real(x, w, c);
  EXPECT_LT((res.logits - ref).cwiseAbs().maxCoeff(), 1e-2);
  EXPECT_EQ(res.rounds, 29u);
}

TEST(PipelineTest, RoundsFollowLedger) {
  for (int s = 1; s <= 3; ++s) {
    const AdapterConfig c = desk_config(4, 16, s);
    Prg prg(s);
    const auto w = encode_params(random_params(c, prg));
    const auto x = FixedTensor::from_real(random_features(c, prg), {});
    const auto res = infer_local(c, x, w, 3, NetworkEnv::lan());
    EXPECT_EQ(res.rounds, 26u * s + 3) << "s=" << s;
    EXPECT_EQ(res.meter.stats_within("adapter").rounds, 26u * s);
    EXPECT_EQ(res.meter.stats_within("relu").rounds, 9u * s);
  }
}

TEST(PipelineTest, FixedPointReferenceAgrees) {
  const AdapterConfig c = desk_config(1, 8, 2);
  Prg prg(21);
  const auto w = random_params(c, prg);
  const RealMatrix x = random_features(c, prg);
  const FixedArith fa{};
  const auto wf = map_params<RingMatrix>(
      w, [&](const RealMatrix& m) { return fa.lift(m); });
  const RealMatrix fixed =
      fa.lower(pipeline_forward_plain(fa, fa.lift(x), wf, c));
  EXPECT_LT((fixed - run_real(x, w, c)).cwiseAbs().maxCoeff(), 1e-2);
}

TEST(PipelineTest, ZeroScalerIsClassifierOnInput) {
  AdapterConfig c = desk_config(1, 8, 1);
  c.scaler = 0.0;
  Prg prg(5);
  const auto w = random_params(c, prg);
  const RealMatrix x = random_features(c, prg);
  const auto res = infer_local(c, FixedTensor::from_real(x, {}),
                               encode_params(w), 9, NetworkEnv::wan());
  const RealMatrix cls = x.topRows(1);
  const RealMatrix ref =
      layernorm_plain(RealArith{}, cls, w.norm_gain, w.norm_bias, 2) *
      w.classifier;
  EXPECT_LT((res.logits - ref).cwiseAbs().maxCoeff(), 1e-2);
}

TEST(PipelineTest, RejectsWrongFeatureShape) {
  const AdapterConfig c = desk_config(1, 8, 1);
  Prg prg(1);
  const auto w = encode_params(random_params(c, prg));
  const auto x = FixedTensor::from_real(RealMatrix::Zero(3, 32), {});
  EXPECT_THROW(infer_local(c, x, w, 1, NetworkEnv::wan()), ShapeError);
}

TEST(PipelineTest, MismatchedSeedsFailHandshake) {
  const AdapterConfig c = desk_config(1, 8, 1);
  Prg prg(1);
  const auto w = encode_params(random_params(c, prg));
  const auto x = FixedTensor::from_real(random_features(c, prg), {});
  EXPECT_THROW(run_two_party(
                   [&](Channel& ch) {
                     return run_model_user(ch, c, x, 1, NetworkEnv::wan());
                   },
                   [&](Channel& ch) {
                     run_model_server(ch, c, w, 2);
                     return 0;
                   }),
               ProtocolError);
}

TEST(LinearTest, OneRoundWithinOneUlpPerTerm) {
  run_two_party(
      [](Channel& ch) {
        Party p(ch, 4);
        const FixedPointConfig fp;
        Prg prg(99);
        const RealMatrix x = RealMatrix::Random(4, 6);
        const RealMatrix w = RealMatrix::Random(6, 3);
        // Party 0 plays dealer of both inputs here: peer receives zeros.
        ArithShare xs{0, encode_fixed(x, fp), fp};
        ArithShare ws{0, encode_fixed(w, fp), fp};
        const auto y = linear_private(p, xs, ws);
        const auto peer = ch.exchange_io({}, std::vector<Shape>{{4, 3}});
        EXPECT_EQ(ch.meter().rounds(), 1u);
        const RealMatrix got = decode_fixed(RingMatrix(y.data + peer[0]), fp);
        EXPECT_LT((got - x * w).cwiseAbs().maxCoeff(), 1e-3);
        return 0;
      },
      [](Channel& ch) {
        Party p(ch, 4);
        const FixedPointConfig fp;
        ArithShare xs{1, RingMatrix::Zero(4, 6), fp};
        ArithShare ws{1, RingMatrix::Zero(6, 3), fp};
        const auto y = linear_private(p, xs, ws);
        const std::vector<RingMatrix> out{y.data};
        ch.exchange_io(out, {});
        return 0;
      });
}

TEST(ReluTest, ExactOnFixedPointGrid) {
  run_two_party(
      [](Channel& ch) {
        Party p(ch, 8);
        const FixedPointConfig fp;
        RealMatrix x(1, 6);
        x << -3.5, -1e-4, 0.0, 1e-4, 2.25, -100.0;
        Prg prg(3);
        auto [s0, s1] = share_arith(FixedTensor::from_real(x, fp), prg);
        const std::vector<RingMatrix> out{s1.data};
        ch.exchange_io(out, {});
        const auto y = relu_private(p, s0);
        EXPECT_EQ(ch.meter().rounds(), 9u);
        const auto peer = ch.exchange_io({}, std::vector<Shape>{{1, 6}});
        const RingMatrix got = y.data + peer[0];
        const RingMatrix want = FixedArith{fp}.relu(encode_fixed(x, fp));
        EXPECT_EQ(got, want);
        return 0;
      },
      [](Channel& ch) {
        Party p(ch, 8);
        const FixedPointConfig fp;
        const auto in = ch.exchange_io({}, std::vector<Shape>{{1, 6}});
        const auto y = relu_private(p, ArithShare{1, in[0], fp});
        const std::vector<RingMatrix> out{y.data};
        ch.exchange_io(out, {});
        return 0;
      });
}

TEST(LayerNormTest, PrivateMatchesFixedReference) {
  for (int budget : {2, 3}) {
    run_two_party(
        [budget](Channel& ch) {
          Party p(ch, 12);
          const FixedPointConfig fp;
          Prg prg(17);
          const RealMatrix x = RealMatrix::Random(3, 8) * 2.0;
          const RealMatrix g = RealMatrix::Constant(1, 8, 1.1);
          const RealMatrix b = RealMatrix::Constant(1, 8, -0.2);
          auto [s0, s1] = share_arith(FixedTensor::from_real(x, fp), prg);
          const std::vector<RingMatrix> out{s1.data};
          ch.exchange_io(out, {});
          const ArithShare gs{0, encode_fixed(g, fp), fp};
          const ArithShare bs{0, encode_fixed(b, fp), fp};
          const auto y = layernorm_private(p, s0, gs, bs, budget);
          EXPECT_EQ(ch.meter().rounds(), static_cast<std::uint64_t>(budget));
          const auto peer = ch.exchange_io({}, std::vector<Shape>{{3, 8}});
          const RealMatrix got = decode_fixed(RingMatrix(y.data + peer[0]), fp);
          const RealMatrix want =
              layernorm_plain(RealArith{}, x, g, b, budget);
          EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 5e-3);
          return 0;
        },
        [budget](Channel& ch) {
          Party p(ch, 12);
          const FixedPointConfig fp;
          const auto in = ch.exchange_io({}, std::vector<Shape>{{3, 8}});
          const ArithShare z{1, RingMatrix::Zero(1, 8), fp};
          const auto y =
              layernorm_private(p, ArithShare{1, in[0], fp}, z, z, budget);
          const std::vector<RingMatrix> out{y.data};
          ch.exchange_io(out, {});
          return 0;
        });
  }
}

}  // namespace
}  // namespace adaptmpc
