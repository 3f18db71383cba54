// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/moe/switch_ffn.h"

#include "moelab/core/error.h"
#include "moelab/core/rng.h"

namespace moelab::moe {

SwitchFfnParams SwitchFfnParams::create(ParameterStore& params, const std::string& prefix, std::size_t d_model,
                                        const MoEConfig& config, Rng& rng) {
    MoEConfig top1 = config;
    top1.k = 1;
    top1.validate();
    SwitchFfnParams p;
    p.router = params.add(prefix + ".router", normal_init({d_model, config.n_experts}, 0.02, rng));
    for (std::size_t i = 0; i < config.n_experts; ++i) {
        p.experts.push_back(FeedForward::create(params, prefix + ".experts." + std::to_string(i), d_model,
                                                config.expert_hidden, d_model, rng));
    }
    return p;
}

SwitchFfnParams SwitchFfnParams::bind(const ParameterStore& params, const std::string& prefix,
                                      const MoEConfig& config) {
    SwitchFfnParams p;
    p.router = params.get(prefix + ".router");
    for (std::size_t i = 0; i < config.n_experts; ++i) {
        p.experts.push_back(FeedForward::bind(params, prefix + ".experts." + std::to_string(i)));
    }
    return p;
}

SwitchOutput switch_ffn_forward(const Tensor& x, const MoEConfig& config, std::span<const FeedForward> experts,
                                const Tensor& router, Rng* noise_rng) {
    if (experts.size() != config.n_experts || router.rank() != 2 || router.cols() != config.n_experts) {
        throw ConfigError("switch_ffn_forward: config has " + std::to_string(config.n_experts) +
                          " experts but got " + std::to_string(experts.size()) + " experts and router " +
                          shape_str(router.shape()));
    }
    SwitchOutput out;
    out.probs = (config.noisy_gating && noise_rng != nullptr)
                    ? noisy_gate_probs(x, router, config.noise_std, *noise_rng)
                    : gate_probs(x, router);
    out.decision = switch_route(out.probs, config.capacity_factor);
    out.y = dispatch_experts(
        x, out.decision, [&](std::size_t i, const Tensor& rows) { return experts[i].forward(rows); }, x.cols());
    out.stats = load_stats(out.probs, out.decision, config.f_basis);
    out.aux_loss = load_balance_loss(out.stats, config.alpha);
    return out;
}

} // namespace moelab::moe
