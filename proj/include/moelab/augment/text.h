// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace moelab::augment {

/// A sentence and the whitespace that followed it in the source text.
struct Sentence {
    std::string text;
    std::string separator;
};

/// Splits after '.', '!' or '?' when followed by whitespace. Concatenating
/// text + separator over the result reproduces the input exactly (leading
/// whitespace becomes an empty first sentence's separator).
std::vector<Sentence> split_sentences(std::string_view text);

/// Whitespace-separated words; punctuation stays attached.
std::vector<std::string> split_words(std::string_view text);

/// A word split into leading punctuation, core and trailing punctuation.
struct WordParts {
    std::string prefix;
    std::string core;
    std::string suffix;
};
WordParts split_word(std::string_view word);

std::string to_lower_ascii(std::string_view text);

/// Replaces the core of `word` with `replacement`, keeping its punctuation and
/// an initial capital.
std::string replace_core(std::string_view word, std::string_view replacement);

/// Leading whitespace, body, trailing whitespace.
struct Padded {
    std::string lead;
    std::string body;
    std::string trail;
};
Padded split_padding(std::string_view text);

} // namespace moelab::augment
