// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "moelab/moe/config.h"

namespace moelab::model {

enum class FfnKind { kDense, kSwitch };
enum class Positional { kSinusoidal, kLearned };

struct ModelConfig {
    std::size_t vocab_size = 0;
    std::size_t d_model = 64;
    std::size_t n_layers = 2;
    std::size_t n_heads = 4;
    std::size_t ffn_hidden = 256;
    std::size_t max_seq_len = 128;
    /// One entry per layer; empty means every layer is dense.
    std::vector<FfnKind> ffn_kinds;
    /// Required when any layer is a Switch layer. Its k is ignored (always top-1).
    std::optional<moe::MoEConfig> switch_ffn;
    /// Optional mixture-of-experts output head before the span projection.
    std::optional<moe::MoEConfig> moe_head;
    Positional positional = Positional::kSinusoidal;
    double dropout = 0.0;
    double layer_norm_eps = 1e-5;

    [[nodiscard]] FfnKind ffn_kind(std::size_t layer) const;
    [[nodiscard]] std::size_t switch_layer_count() const;
    /// Marks the given layer indices as Switch layers and the rest as dense.
    void set_switch_layers(const std::vector<std::size_t>& layers);

    /// Throws ConfigError with the offending field.
    void validate() const;
};

std::string to_string(FfnKind kind);
FfnKind parse_ffn_kind(const std::string& text);
std::string to_string(Positional positional);
Positional parse_positional(const std::string& text);

nlohmann::json to_json(const moe::MoEConfig& config);
moe::MoEConfig moe_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const nlohmann::json& doc);

} // namespace moelab::model
