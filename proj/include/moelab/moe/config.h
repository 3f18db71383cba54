// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

namespace moelab::moe {

/// Which token counts feed f in the load-balancing loss.
enum class DispatchBasis {
    kPreCapacity,   // argmax assignment, before capacity drops (router intent)
    kPostCapacity,  // tokens actually processed by the expert
};

/// Output space of the experts in the MoE output head.
enum class HeadOutput {
    kHidden,      // experts map hidden -> hidden, shared span head follows
    kSpanLogits,  // experts map hidden -> (start, end) logits directly
};

struct MoEConfig {
    std::size_t n_experts = 4;
    std::size_t k = 2;                  // experts combined per token; Switch layers always use 1
    std::size_t expert_hidden = 3072;   // width of each expert's hidden layer
    double capacity_factor = 1.25;      // Switch layers only
    double alpha = 0.01;                // load-balancing loss coefficient
    bool noisy_gating = false;
    double noise_std = 1.0;
    DispatchBasis f_basis = DispatchBasis::kPreCapacity;
    HeadOutput head_output = HeadOutput::kHidden;

    /// Throws ConfigError with an actionable message.
    void validate() const;
};

std::string to_string(DispatchBasis basis);
std::string to_string(HeadOutput output);
DispatchBasis parse_dispatch_basis(const std::string& text);
HeadOutput parse_head_output(const std::string& text);

} // namespace moelab::moe
