// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "moelab/moe/config.h"
#include "moelab/moe/feed_forward.h"
#include "moelab/moe/routing.h"

namespace moelab::moe {

struct SwitchFfnParams {
    Tensor router;  // [d x N]
    std::vector<FeedForward> experts;

    static SwitchFfnParams create(ParameterStore& params, const std::string& prefix, std::size_t d_model,
                                  const MoEConfig& config, Rng& rng);
    static SwitchFfnParams bind(const ParameterStore& params, const std::string& prefix, const MoEConfig& config);
};

struct SwitchOutput {
    Tensor y;  // p_e(x) * E_e(x) for routed tokens, zero rows for dropped ones
    Tensor aux_loss;
    ExpertLoadStats stats;
    RoutingDecision decision;
    Tensor probs;
};

/// Switch FFN over all tokens of a batch, x[T x d]. The caller adds the residual.
SwitchOutput switch_ffn_forward(const Tensor& x, const MoEConfig& config, std::span<const FeedForward> experts,
                                const Tensor& router, Rng* noise_rng = nullptr);

} // namespace moelab::moe
