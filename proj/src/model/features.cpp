// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/model/features.h"

#include <algorithm>

#include "moelab/core/error.h"

namespace moelab::model {

Features make_features(const data::QAExample& example, const Vocabulary& vocab, std::size_t max_seq_len) {
    if (max_seq_len < 4) throw ConfigError("max_seq_len must be at least 4");
    auto question = tokenize(example.question);
    auto context = tokenize(example.context);
    const std::size_t budget = max_seq_len - 3;
    if (question.size() + context.size() > budget) {
        const std::size_t keep_question = std::min(question.size(), budget - std::min<std::size_t>(budget, 1));
        question.resize(std::min(question.size(), keep_question));
        context.resize(std::min(context.size(), budget - question.size()));
    }

    Features f;
    f.ids.push_back(Vocabulary::kCls);
    for (const auto& t : question) f.ids.push_back(vocab.id(t.text));
    f.ids.push_back(Vocabulary::kSep);
    f.context_begin = f.ids.size();
    for (const auto& t : context) f.ids.push_back(vocab.id(t.text));
    f.context_end = f.ids.size();
    f.ids.push_back(Vocabulary::kSep);
    f.context_tokens = std::move(context);

    f.answerable = example.answerable && !example.answers.empty();
    if (!f.answerable) return f;
    const auto& ans = example.answers.front();
    const std::size_t a_begin = ans.start, a_end = ans.start + ans.text.size();
    std::size_t first = f.context_tokens.size(), last = f.context_tokens.size();
    for (std::size_t i = 0; i < f.context_tokens.size(); ++i) {
        const auto& t = f.context_tokens[i];
        if (t.end > a_begin && t.begin < a_end) {
            if (first == f.context_tokens.size()) first = i;
            last = i;
        }
    }
    // The whole answer must survive truncation.
    if (first == f.context_tokens.size() || f.context_tokens[last].end < a_end) {
        f.answer_in_window = false;
        return f;
    }
    f.gold_start = f.context_begin + first;
    f.gold_end = f.context_begin + last;
    return f;
}

std::string span_text(const data::QAExample& example, const Features& features, std::size_t start, std::size_t end) {
    if (start < features.context_begin || end >= features.context_end || start > end) {
        throw IndexError("span [" + std::to_string(start) + ", " + std::to_string(end) +
                         "] is outside the context positions [" + std::to_string(features.context_begin) + ", " +
                         std::to_string(features.context_end) + ")");
    }
    const auto& a = features.context_tokens[start - features.context_begin];
    const auto& b = features.context_tokens[end - features.context_begin];
    return example.context.substr(a.begin, b.end - a.begin);
}

} // namespace moelab::model
