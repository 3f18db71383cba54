// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0
//
// SQuAD-style answer scoring. Answers are compared after normalisation:
// ASCII lowercase, ASCII punctuation removed, articles (a, an, the) dropped,
// whitespace collapsed. An empty string stands for "no answer".

#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "moelab/data/qa_example.h"

namespace moelab::data {

std::vector<std::string> normalize_answer(std::string_view text);

double exact_match(std::string_view prediction, std::string_view gold);
double f1_score(std::string_view prediction, std::string_view gold);
/// Maximum over the references.
double exact_match(std::string_view prediction, std::span<const std::string> golds);
double f1_score(std::string_view prediction, std::span<const std::string> golds);

/// Reference strings for an example: its answer texts, or {""} when unanswerable.
std::vector<std::string> gold_texts(const QAExample& example);

struct ExampleScore {
    std::string id;
    double em = 0.0;
    double f1 = 0.0;
    bool missing = false;
};

struct EvalResult {
    std::vector<ExampleScore> scores;
    double exact_match = 0.0;
    double f1 = 0.0;
    std::vector<std::string> missing_ids;
};

/// Ids without a prediction score 0 on both metrics and are listed in missing_ids.
EvalResult evaluate(const std::map<std::string, std::string>& predictions, const Dataset& dataset);

nlohmann::json to_json(const EvalResult& result);
/// id,em,f1,missing rows followed by a final "__mean__" row.
std::string to_csv(const EvalResult& result);

} // namespace moelab::data
