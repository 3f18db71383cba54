// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Post-LN transformer encoder for extractive QA.
//
//   h0 = LN(embed(ids) + positions)
//   per layer:  h = LN(h + MHA(h));  h = LN(h + FFN(h))
//
// FFN is a dense Linear-GELU-Linear or a Switch layer routed over all tokens
// of the batch. An optional MoE head transforms the final hidden states
// before the span projection (or replaces it, see moe::HeadOutput).

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "moelab/core/parameters.h"
#include "moelab/core/tensor.h"
#include "moelab/model/model_config.h"
#include "moelab/model/span.h"
#include "moelab/moe/moe_head.h"
#include "moelab/moe/switch_ffn.h"

namespace moelab {
class Rng;
}

namespace moelab::model {

struct AttentionParams {
    Tensor wq, bq, wk, bk, wv, bv, wo, bo;
};

struct EncoderLayer {
    FfnKind kind = FfnKind::kDense;
    AttentionParams attention;
    Tensor ln1_gain, ln1_bias, ln2_gain, ln2_bias;
    moe::FeedForward dense;        // kDense
    moe::SwitchFfnParams switch_;  // kSwitch
};

/// Routing summary of one Switch layer (or the MoE head) for one batch.
struct RouteRecord {
    std::size_t layer = 0;  // n_layers for the MoE head
    bool moe_head = false;
    std::size_t tokens = 0;
    std::vector<double> f;
    std::vector<double> P;
    double aux_loss = 0.0;
    std::size_t dropped_count = 0;
};

struct ForwardOptions {
    Rng* dropout_rng = nullptr;  // dropout is active only when set and config.dropout > 0
    Rng* noise_rng = nullptr;    // gate noise, when a config enables noisy gating
};

struct ForwardOutput {
    std::vector<Tensor> hidden;      // per sequence, [T_i x d_model]
    std::vector<SpanLogits> logits;  // per sequence
    std::vector<Tensor> aux_losses;  // one scalar per routed layer, already scaled by alpha
    std::vector<RouteRecord> routes;
};

class QAModel {
public:
    /// Fresh parameters. The span projection starts at zero so every position
    /// begins with equal logits.
    static QAModel create(const ModelConfig& config, Rng& init_rng);
    /// Adopts parameters (for example from a checkpoint); names and shapes must match create().
    static QAModel from_parameters(const ModelConfig& config, const std::map<std::string, Tensor>& values);

    [[nodiscard]] const ModelConfig& config() const { return config_; }
    [[nodiscard]] ParameterStore& parameters() { return params_; }
    [[nodiscard]] const ParameterStore& parameters() const { return params_; }

    /// Encoder output for each sequence. Routed layers append to aux_losses/routes when given.
    std::vector<Tensor> encode(std::span<const std::vector<std::size_t>> batch, const ForwardOptions& options = {},
                               std::vector<Tensor>* aux_losses = nullptr,
                               std::vector<RouteRecord>* routes = nullptr) const;
    Tensor encode(const std::vector<std::size_t>& ids) const;

    ForwardOutput forward(std::span<const std::vector<std::size_t>> batch, const ForwardOptions& options = {}) const;

    // Parameter handles; they alias the tensors in parameters().
    Tensor token_embedding;
    Tensor position_embedding;  // learned positions only
    Tensor embed_ln_gain, embed_ln_bias;
    std::vector<EncoderLayer> layers;
    std::optional<moe::MoEHeadParams> head;
    Tensor span_weight, span_bias;  // absent when the MoE head emits span logits

private:
    void bind();

    ModelConfig config_;
    ParameterStore params_;
};

/// Multi-head self-attention over one sequence x[T x d].
Tensor self_attention(const Tensor& x, const AttentionParams& p, std::size_t n_heads);

/// PE[pos, 2i] = sin(pos / 10000^(2i/d)), PE[pos, 2i+1] = cos(same).
Tensor sinusoidal_positions(std::size_t length, std::size_t d_model);

} // namespace moelab::model
