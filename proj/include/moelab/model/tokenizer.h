// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Word-level tokenizer: ASCII-lowercased runs of non-space, non-punctuation
// bytes form words; each ASCII punctuation character is its own token.
// Offsets are bytes into the original text.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "moelab/data/qa_example.h"

namespace moelab::model {

struct Token {
    std::string text;
    std::size_t begin = 0;
    std::size_t end = 0;
};

std::vector<Token> tokenize(std::string_view text);

class Vocabulary {
public:
    static constexpr std::size_t kCls = 0;
    static constexpr std::size_t kSep = 1;
    static constexpr std::size_t kUnk = 2;

    Vocabulary();
    explicit Vocabulary(std::vector<std::string> words);

    /// Words from contexts and questions, sorted for a deterministic id order.
    static Vocabulary build(const data::Dataset& corpus, std::size_t min_count = 1);

    /// kUnk for words not in the vocabulary.
    [[nodiscard]] std::size_t id(std::string_view word) const;
    [[nodiscard]] const std::string& word(std::size_t id) const;
    [[nodiscard]] std::size_t size() const { return words_.size(); }
    [[nodiscard]] const std::vector<std::string>& words() const { return words_; }

    [[nodiscard]] nlohmann::json to_json() const;
    static Vocabulary from_json(const nlohmann::json& doc);

private:
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::size_t> index_;
};

} // namespace moelab::model
