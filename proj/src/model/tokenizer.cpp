// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/model/tokenizer.h"

#include <algorithm>
#include <cctype>
#include <map>

#include "moelab/core/error.h"

namespace moelab::model {

namespace {

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_punct(unsigned char c) { return c < 0x80 && std::ispunct(c); }

const std::vector<std::string>& specials() {
    static const std::vector<std::string> names{"[CLS]", "[SEP]", "[UNK]"};
    return names;
}

} // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (is_space(c)) {
            ++i;
        } else if (is_punct(c)) {
            out.push_back({std::string(1, static_cast<char>(c)), i, i + 1});
            ++i;
        } else {
            Token t;
            t.begin = i;
            while (i < text.size()) {
                const auto d = static_cast<unsigned char>(text[i]);
                if (is_space(d) || is_punct(d)) break;
                t.text.push_back(static_cast<char>(std::tolower(d)));
                ++i;
            }
            t.end = i;
            out.push_back(std::move(t));
        }
    }
    return out;
}

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(std::vector<std::string> words) {
    words_ = specials();
    for (auto& w : words) {
        if (std::find(specials().begin(), specials().end(), w) != specials().end()) continue;
        words_.push_back(std::move(w));
    }
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (!index_.emplace(words_[i], i).second) throw VocabularyError("duplicate vocabulary entry '" + words_[i] + "'");
    }
}

Vocabulary Vocabulary::build(const data::Dataset& corpus, std::size_t min_count) {
    std::map<std::string, std::size_t> counts;
    for (const auto& ex : corpus) {
        for (const auto& t : tokenize(ex.context)) ++counts[t.text];
        for (const auto& t : tokenize(ex.question)) ++counts[t.text];
    }
    std::vector<std::string> words;
    for (const auto& [w, n] : counts) {
        if (n >= min_count) words.push_back(w);
    }
    return Vocabulary(std::move(words));
}

std::size_t Vocabulary::id(std::string_view word) const {
    auto it = index_.find(std::string(word));
    return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::word(std::size_t id) const {
    if (id >= words_.size()) {
        throw VocabularyError("token id " + std::to_string(id) + " outside vocabulary of size " +
                              std::to_string(words_.size()));
    }
    return words_[id];
}

nlohmann::json Vocabulary::to_json() const {
    return std::vector<std::string>(words_.begin() + static_cast<std::ptrdiff_t>(specials().size()), words_.end());
}

Vocabulary Vocabulary::from_json(const nlohmann::json& doc) {
    if (!doc.is_array()) throw ParseError("vocabulary must be a JSON array of words");
    return Vocabulary(doc.get<std::vector<std::string>>());
}

} // namespace moelab::model
