// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/moe/moe_head.h"

#include "moelab/core/error.h"
#include "moelab/core/rng.h"

namespace moelab::moe {

MoEHeadParams MoEHeadParams::create(ParameterStore& params, const std::string& prefix, std::size_t d_in,
                                    std::size_t d_out, const MoEConfig& config, Rng& rng) {
    config.validate();
    MoEHeadParams p;
    p.gate = params.add(prefix + ".gate", normal_init({d_in, config.n_experts}, 0.02, rng));
    for (std::size_t i = 0; i < config.n_experts; ++i) {
        p.experts.push_back(FeedForward::create(params, prefix + ".experts." + std::to_string(i), d_in,
                                                config.expert_hidden, d_out, rng));
    }
    return p;
}

MoEHeadParams MoEHeadParams::bind(const ParameterStore& params, const std::string& prefix, const MoEConfig& config) {
    MoEHeadParams p;
    p.gate = params.get(prefix + ".gate");
    for (std::size_t i = 0; i < config.n_experts; ++i) {
        p.experts.push_back(FeedForward::bind(params, prefix + ".experts." + std::to_string(i)));
    }
    return p;
}

MoEOutput moe_head_forward(const Tensor& x, const MoEConfig& config, std::span<const FeedForward> experts,
                           const Tensor& gate, Rng* noise_rng) {
    config.validate();
    if (experts.size() != config.n_experts || gate.rank() != 2 || gate.cols() != config.n_experts) {
        throw ConfigError("moe_head_forward: config has " + std::to_string(config.n_experts) + " experts but got " +
                          std::to_string(experts.size()) + " experts and gate " + shape_str(gate.shape()));
    }
    MoEOutput out;
    out.probs = (config.noisy_gating && noise_rng != nullptr)
                    ? noisy_gate_probs(x, gate, config.noise_std, *noise_rng)
                    : gate_probs(x, gate);
    out.decision = top_k_select(out.probs, config.k);
    const std::size_t d_out = experts.front().d_out();
    out.y = dispatch_experts(
        x, out.decision, [&](std::size_t i, const Tensor& rows) { return experts[i].forward(rows); }, d_out);
    out.stats = load_stats(out.probs, out.decision, config.f_basis);
    out.aux_loss = load_balance_loss(out.stats, config.alpha);
    return out;
}

} // namespace moelab::moe
