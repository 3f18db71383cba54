// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Model input layout: [CLS] question [SEP] context [SEP]. Position 0 ([CLS])
// doubles as the no-answer target. Long inputs lose context tokens from the
// end first, then question tokens.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "moelab/data/qa_example.h"
#include "moelab/model/tokenizer.h"

namespace moelab::model {

struct Features {
    std::vector<std::size_t> ids;
    /// Half-open range of context token positions inside ids.
    std::size_t context_begin = 0;
    std::size_t context_end = 0;
    /// Byte offsets of each kept context token, indexed by position - context_begin.
    std::vector<Token> context_tokens;
    /// Gold positions; (0, 0) for unanswerable examples.
    std::size_t gold_start = 0;
    std::size_t gold_end = 0;
    bool answerable = false;
    /// False when the gold answer was cut off by truncation.
    bool answer_in_window = true;
};

/// Needs max_seq_len >= 4 so that at least one question and one context token fit.
Features make_features(const data::QAExample& example, const Vocabulary& vocab, std::size_t max_seq_len);

/// Context text covered by token positions [start, end] (inclusive).
std::string span_text(const data::QAExample& example, const Features& features, std::size_t start,
                      std::size_t end);

} // namespace moelab::model
