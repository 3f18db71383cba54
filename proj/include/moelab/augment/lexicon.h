// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace moelab::augment {

/// Lowercase word -> synonyms. A word is never listed as its own synonym.
class SynonymLexicon {
public:
    SynonymLexicon() = default;

    /// Self-references and duplicates are dropped.
    void add(std::string_view word, const std::vector<std::string>& synonyms);

    /// Empty for unknown words. Lookup is by lowercase form.
    [[nodiscard]] const std::vector<std::string>& synonyms(std::string_view word) const;
    [[nodiscard]] bool has_synonyms(std::string_view word) const { return !synonyms(word).empty(); }
    [[nodiscard]] std::size_t size() const { return entries_.size(); }

    /// UTF-8 lines "word<TAB>syn1,syn2,...". Blank lines and lines starting
    /// with '#' are ignored; a line without a tab is a ParseError.
    static SynonymLexicon parse(std::string_view text, const std::string& source = "<lexicon>");
    static SynonymLexicon load(const std::filesystem::path& path);

private:
    std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

} // namespace moelab::augment
