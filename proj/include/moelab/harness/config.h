// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: a flat "key = value" file. Lines starting with
// '#' are comments; list values are comma separated. Every key has a
// default, so an empty file is a valid (dense, synthetic-free) template that
// only fails validation for lack of training data.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "moelab/augment/eda.h"
#include "moelab/model/model_config.h"
#include "moelab/model/trainer.h"
#include "moelab/moe/config.h"

namespace moelab::harness {

struct DataConfig {
    std::vector<std::string> in_domain;
    std::vector<std::size_t> in_domain_counts;  // empty: every example
    std::vector<std::string> out_of_domain;
    std::vector<std::size_t> out_of_domain_counts;
    std::string validation;
    /// When positive, a generated corpus of this size is used as in-domain training data.
    std::size_t synthetic = 0;
    std::size_t synthetic_palette = 2;
    std::uint64_t synthetic_seed = 0;
    double synthetic_unanswerable = 0.0;
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    std::string output_dir = "runs/default";

    DataConfig data;

    model::ModelConfig model;  // vocab_size, ffn_kinds and the MoE blocks are filled by model_config()
    std::vector<std::size_t> switch_layers;
    std::size_t min_count = 1;
    moe::MoEConfig moe;  // Switch layers
    bool head_enabled = false;
    moe::MoEConfig head;

    model::TrainConfig train;

    bool augment_enabled = false;
    augment::AugmentationRecipe recipe;
    std::string lexicon = "data/lexicon.tsv";
    std::string translator = "mock";

    ExperimentConfig();

    /// Full model configuration for a vocabulary of the given size.
    [[nodiscard]] model::ModelConfig model_config(std::size_t vocab_size) const;

    /// Rejects inconsistent settings; with check_files, also missing input files.
    void validate(bool check_files = true) const;
};

/// Applies one "key=value" assignment. Unknown keys and bad values are ConfigErrors.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);
void apply_override(ExperimentConfig& config, std::string_view assignment);

ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Every key with its current value, one "key = value" per line, in a fixed order.
std::string canonical_text(const ExperimentConfig& config);
/// 16 hex digits of FNV-1a over canonical_text.
std::string config_hash(const ExperimentConfig& config);
std::vector<std::string> config_keys();

/// {"config_hash", "seed", "tool"} block attached to every output file.
nlohmann::json provenance(const ExperimentConfig& config);

} // namespace moelab::harness
