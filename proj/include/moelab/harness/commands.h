// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Subcommand implementations behind the moelab CLI. Each returns the JSON it
// wrote so callers (and tests) can inspect results without re-reading files.

#pragma once

#include <filesystem>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "moelab/augment/pipeline.h"
#include "moelab/data/qa_example.h"
#include "moelab/harness/config.h"

namespace moelab::harness {

struct TrainingData {
    data::Dataset train;
    data::Dataset validation;
    std::size_t in_domain = 0;
    std::size_t out_of_domain = 0;
    std::size_t augmented = 0;
    std::vector<std::string> warnings;
    nlohmann::json augment_report;  // null when augmentation is off
};

/// Loads and samples every source; augmentation touches only the out-of-domain part.
TrainingData prepare_training_data(const ExperimentConfig& config);

std::unique_ptr<augment::Translator> make_translator(const std::string& name);

/// Writes model.json, trace.csv, routes.jsonl and metrics.json under
/// config.output_dir and returns the metrics document.
nlohmann::json cmd_train(const ExperimentConfig& config, std::ostream& log);

/// Scores a checkpoint on a SQuAD file; writes `out` when non-empty.
nlohmann::json cmd_evaluate(const std::filesystem::path& checkpoint, const std::filesystem::path& data,
                            const std::filesystem::path& out, std::size_t max_answer_len = 30);

/// Scores an {id: answer} predictions file without a model.
nlohmann::json cmd_evaluate_predictions(const std::filesystem::path& predictions, const std::filesystem::path& data,
                                        const std::filesystem::path& out);

/// Writes the augmented SQuAD file to `out` and the report next to it
/// ("<out>.report.json"). Returns the report.
nlohmann::json cmd_augment(const std::filesystem::path& data, const augment::AugmentationRecipe& recipe,
                           const std::filesystem::path& lexicon, const std::string& translator,
                           const std::filesystem::path& out, bool include_original);

/// Per routed layer: mean f and P over the dataset, drop rate and load
/// entropy. Writes route_stats.json and one SVG per layer into out_dir.
nlohmann::json cmd_route_stats(const std::filesystem::path& checkpoint, const std::filesystem::path& data,
                               const std::filesystem::path& out_dir, std::size_t batch_size = 16);

/// Trains one model per value of `axis` ("n_experts" or "alpha"), each in
/// its own subdirectory of template.output_dir, and writes sweep.csv there.
/// Returns the CSV text.
std::string cmd_sweep(const ExperimentConfig& template_config, const std::string& axis,
                      const std::vector<std::string>& values, std::ostream& log);

/// Applies one sweep value; n_experts also updates the MoE head when enabled.
ExperimentConfig sweep_variant(const ExperimentConfig& base, const std::string& axis, const std::string& value);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace moelab::harness
