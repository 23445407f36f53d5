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

#include "adaptmpc/adapter.h"
#include "adaptmpc/protocols.h"

namespace adaptmpc {

// Every operator below runs inside one party and must be called in the same
// order by both parties. Round counts are exact.

// x W (+ bias), truncated back to scale 2^f. One round.
ArithShare linear_private(Party& party, const ArithShare& x,
                          const ArithShare& w,
                          const ArithShare* bias = nullptr);

// max(0, x) via the sign bit: (1 - ltz(x)) * x. Nine rounds.
ArithShare relu_private(Party& party, const ArithShare& x);

// Row-wise LayerNorm. Budget 3 uses a cubic inverse square root (3 rounds),
// budget 2 an affine one (2 rounds). The gain product shares round 1 with
// the variance.
ArithShare layernorm_private(Party& party, const ArithShare& x,
                             const ArithShare& gain, const ArithShare& bias,
                             int round_budget);

// L(Q K^T) V over all heads: one batched Q K^T round, one linear round for
// W_L, one batched (.)V round. No comparison anywhere.
ArithShare linatten_private(Party& party, const ArithShare& q,
                            const ArithShare& k, const ArithShare& v,
                            const ArithShare& w_l, int heads);

// 26 rounds: 9 linear, 2 share x share matmul, 2 x 3 LayerNorm, 9 ReLU.
ArithShare adapter_forward_private(Party& party, const ArithShare& x,
                                   const AdapterParams<ArithShare>& weights,
                                   const AdapterConfig& config);

// s adapters, tail LayerNorm (2 rounds) on [CLS], classifier (1 round):
// 26 s + 3 rounds. Returns shares of the 1 x n_classes logits. Openings are
// audited: only Beaver-masked values may be opened on this path.
ArithShare pipeline_forward_private(Party& party, const ArithShare& x,
                                    const PipelineParams<ArithShare>& weights,
                                    const AdapterConfig& config);

}  // namespace adaptmpc
