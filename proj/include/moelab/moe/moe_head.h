// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Sparsely-gated mixture-of-experts layer: y = sum_i G(x)_i E_i(x) over the
// top-k experts of each token, plus the load-balancing auxiliary loss.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "moelab/moe/config.h"
#include "moelab/moe/feed_forward.h"
#include "moelab/moe/routing.h"

namespace moelab::moe {

struct MoEOutput {
    Tensor y;
    Tensor aux_loss;
    ExpertLoadStats stats;
    RoutingDecision decision;
    Tensor probs;
};

struct MoEHeadParams {
    Tensor gate;  // [d_in x N]
    std::vector<FeedForward> experts;

    static MoEHeadParams create(ParameterStore& params, const std::string& prefix, std::size_t d_in,
                                std::size_t d_out, const MoEConfig& config, Rng& rng);
    static MoEHeadParams bind(const ParameterStore& params, const std::string& prefix, const MoEConfig& config);
};

/// gate_probs -> top_k_select -> experts on their routed tokens only -> weighted combination.
/// noise_rng is used only when config.noisy_gating is set.
MoEOutput moe_head_forward(const Tensor& x, const MoEConfig& config, std::span<const FeedForward> experts,
                           const Tensor& gate, Rng* noise_rng = nullptr);

} // namespace moelab::moe
