// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "moelab/data/metrics.h"
#include "moelab/data/qa_example.h"
#include "moelab/model/features.h"
#include "moelab/model/qa_model.h"
#include "moelab/model/tokenizer.h"

namespace moelab::model {

struct TrainConfig {
    std::size_t epochs = 5;
    std::size_t batch_size = 16;
    double learning_rate = 3e-5;
    std::size_t max_answer_len = 30;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TraceRow {
    std::size_t step = 0;  // 1-based optimiser step
    std::size_t epoch = 0;
    double loss = 0.0;
    double ce_loss = 0.0;
    double aux_loss = 0.0;
    double f_entropy = 0.0;  // mean load entropy over routed layers, 0 without routing
};

struct EpochRecord {
    std::size_t epoch = 0;
    double mean_loss = 0.0;
    double mean_f_entropy = 0.0;
    bool has_validation = false;
    double val_exact_match = 0.0;
    double val_f1 = 0.0;
};

struct StepRoute {
    std::size_t step = 0;
    RouteRecord record;
};

struct TrainResult {
    std::vector<TraceRow> trace;
    std::vector<EpochRecord> epochs;
    std::vector<StepRoute> routes;
    /// Training examples whose answer did not survive truncation.
    std::size_t skipped_truncated = 0;
};

/// Mini-batch Adam training with a seeded shuffle per epoch. The batch loss is
/// the mean span cross entropy plus the auxiliary losses of every routed layer.
/// Validation (when given) is scored after each epoch.
TrainResult train(QAModel& model, const Vocabulary& vocab, const data::Dataset& train_set,
                  const data::Dataset* validation, const TrainConfig& config);

/// Best-span predictions (empty string for no-answer), batched without recording.
std::map<std::string, std::string> predict(const QAModel& model, const Vocabulary& vocab,
                                           const data::Dataset& dataset, std::size_t max_answer_len,
                                           std::size_t batch_size = 16);

std::string trace_csv(const std::vector<TraceRow>& trace);
nlohmann::json to_json(const StepRoute& route);

/// Checkpoint with the model config and vocabulary stored in its meta block.
void save_model(const std::filesystem::path& path, const QAModel& model, const Vocabulary& vocab,
                const nlohmann::json& extra_meta = nlohmann::json::object());

struct LoadedModel {
    QAModel model;
    Vocabulary vocab;
    nlohmann::json meta;
};
LoadedModel load_model(const std::filesystem::path& path);

} // namespace moelab::model
