// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/augment/text.h"

#include <cctype>

namespace moelab::augment {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_punct(char c) {
    const auto u = static_cast<unsigned char>(c);
    return u < 0x80 && std::ispunct(u);
}

} // namespace

std::vector<Sentence> split_sentences(std::string_view text) {
    std::vector<Sentence> out;
    std::size_t i = 0;
    std::size_t start = 0;
    while (i < text.size() && is_space(text[i])) ++i;
    if (i > 0) out.push_back({"", std::string(text.substr(0, i))});
    start = i;
    while (i < text.size()) {
        const char c = text[i];
        if ((c == '.' || c == '!' || c == '?') && i + 1 < text.size() && is_space(text[i + 1])) {
            std::size_t j = i + 1;
            while (j < text.size() && is_space(text[j])) ++j;
            out.push_back({std::string(text.substr(start, i + 1 - start)), std::string(text.substr(i + 1, j - i - 1))});
            start = j;
            i = j;
        } else {
            ++i;
        }
    }
    if (start < text.size()) {
        // Trailing whitespace of the final sentence becomes its separator.
        std::size_t end = text.size();
        while (end > start && is_space(text[end - 1])) --end;
        out.push_back({std::string(text.substr(start, end - start)), std::string(text.substr(end))});
    }
    return out;
}

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        const std::size_t b = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i > b) out.emplace_back(text.substr(b, i - b));
    }
    return out;
}

WordParts split_word(std::string_view word) {
    std::size_t b = 0, e = word.size();
    while (b < e && is_punct(word[b])) ++b;
    while (e > b && is_punct(word[e - 1])) --e;
    return {std::string(word.substr(0, b)), std::string(word.substr(b, e - b)), std::string(word.substr(e))};
}

std::string to_lower_ascii(std::string_view text) {
    std::string out(text);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string replace_core(std::string_view word, std::string_view replacement) {
    auto parts = split_word(word);
    std::string core(replacement);
    if (!parts.core.empty() && std::isupper(static_cast<unsigned char>(parts.core[0])) && !core.empty()) {
        core[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(core[0])));
    }
    return parts.prefix + core + parts.suffix;
}

Padded split_padding(std::string_view text) {
    std::size_t b = 0, e = text.size();
    while (b < e && is_space(text[b])) ++b;
    while (e > b && is_space(text[e - 1])) --e;
    return {std::string(text.substr(0, b)), std::string(text.substr(b, e - b)), std::string(text.substr(e))};
}

} // namespace moelab::augment
