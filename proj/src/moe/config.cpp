// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/moe/config.h"

#include <cmath>

#include "moelab/core/error.h"

namespace moelab::moe {

void MoEConfig::validate() const {
    if (n_experts == 0) throw ConfigError("n_experts must be at least 1");
    if (k < 1 || k > n_experts) {
        throw ConfigError("k must satisfy 1 <= k <= n_experts (k=" + std::to_string(k) +
                          ", n_experts=" + std::to_string(n_experts) + ")");
    }
    if (expert_hidden == 0) throw ConfigError("expert_hidden must be positive");
    if (!(capacity_factor > 0.0) || !std::isfinite(capacity_factor)) {
        throw ConfigError("capacity_factor must be a positive number");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be nonnegative");
    if (noisy_gating && !(noise_std >= 0.0)) throw ConfigError("noise_std must be nonnegative");
}

std::string to_string(DispatchBasis basis) {
    return basis == DispatchBasis::kPreCapacity ? "pre_capacity" : "post_capacity";
}

std::string to_string(HeadOutput output) { return output == HeadOutput::kHidden ? "hidden" : "span_logits"; }

DispatchBasis parse_dispatch_basis(const std::string& text) {
    if (text == "pre_capacity") return DispatchBasis::kPreCapacity;
    if (text == "post_capacity") return DispatchBasis::kPostCapacity;
    throw ConfigError("unknown dispatch basis '" + text + "' (expected pre_capacity or post_capacity)");
}

HeadOutput parse_head_output(const std::string& text) {
    if (text == "hidden") return HeadOutput::kHidden;
    if (text == "span_logits") return HeadOutput::kSpanLogits;
    throw ConfigError("unknown head output '" + text + "' (expected hidden or span_logits)");
}

} // namespace moelab::moe
