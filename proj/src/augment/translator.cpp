// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/augment/translator.h"

#include <algorithm>

#include "moelab/augment/text.h"
#include "moelab/core/error.h"

namespace moelab::augment {

namespace {

std::string shift_letters(std::string_view word, int shift) {
    std::string out(word);
    for (auto& c : out) {
        if (c >= 'a' && c <= 'z') c = static_cast<char>('a' + ((c - 'a' + shift) % 26 + 26) % 26);
        if (c >= 'A' && c <= 'Z') c = static_cast<char>('A' + ((c - 'A' + shift) % 26 + 26) % 26);
    }
    return out;
}

bool starts_upper(std::string_view s) { return !s.empty() && s[0] >= 'A' && s[0] <= 'Z'; }

std::string map_core(std::string_view core, const std::map<std::string, std::string, std::less<>>& table,
                     int shift) {
    const auto it = table.find(to_lower_ascii(core));
    if (it == table.end()) return shift_letters(core, shift);
    std::string out = it->second;
    if (starts_upper(core) && !out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 32);
    return out;
}

std::string map_words(std::string_view text, const MockTranslator::Language& lang, bool to_foreign) {
    auto words = split_words(text);
    if (!to_foreign && words.size() > 1) std::rotate(words.rbegin(), words.rbegin() + 1, words.rend());
    for (auto& w : words) {
        auto parts = split_word(w);
        if (parts.core.empty()) continue;
        parts.core = to_foreign ? map_core(parts.core, lang.forward, lang.shift)
                                : map_core(parts.core, lang.back, -lang.shift);
        w = parts.prefix + parts.core + parts.suffix;
    }
    if (to_foreign && words.size() > 1) std::rotate(words.begin(), words.begin() + 1, words.end());
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

MockTranslator::Language make_language(int shift, std::vector<std::pair<std::string, std::string>> pairs,
                                       std::vector<std::pair<std::string, std::string>> paraphrases) {
    MockTranslator::Language lang;
    lang.shift = shift;
    for (const auto& [en, xx] : pairs) {
        lang.forward[en] = xx;
        lang.back[xx] = en;
    }
    for (const auto& [xx, en] : paraphrases) lang.back[xx] = en;
    return lang;
}

} // namespace

MockTranslator::MockTranslator() : MockTranslator(Failures{}) {}

MockTranslator::MockTranslator(Failures failures) : failures_(std::move(failures)) {
    languages_["es"] = make_language(3,
                                     {{"the", "el"}, {"is", "es"}, {"big", "grande"}, {"small", "pequeno"},
                                      {"house", "casa"}, {"walked", "camino"}, {"city", "ciudad"}},
                                     {{"grande", "large"}, {"camino", "went"}});
    languages_["fr"] = make_language(5,
                                     {{"the", "le"}, {"is", "est"}, {"big", "grand"}, {"small", "petit"},
                                      {"house", "maison"}, {"quickly", "vite"}, {"city", "ville"}},
                                     {{"petit", "little"}, {"vite", "fast"}});
    languages_["de"] = make_language(7,
                                     {{"the", "das"}, {"is", "ist"}, {"big", "gross"}, {"small", "klein"},
                                      {"house", "haus"}, {"began", "begann"}, {"city", "stadt"}},
                                     {{"haus", "home"}, {"begann", "started"}});
}

const MockTranslator::Language& MockTranslator::language(std::string_view code) const {
    const auto it = languages_.find(code);
    if (it == languages_.end()) throw ConfigError("mock translator has no language '" + std::string(code) + "'");
    return it->second;
}

std::vector<std::string> MockTranslator::languages() const {
    std::vector<std::string> out;
    for (const auto& [code, _] : languages_) out.push_back(code);
    return out;
}

std::optional<std::string> MockTranslator::translate(std::string_view text, std::string_view source,
                                                     std::string_view target) {
    ++calls_;
    if (failures_.always) return std::nullopt;
    for (const auto& s : failures_.substrings) {
        if (!s.empty() && text.find(s) != std::string_view::npos) return std::nullopt;
    }
    if (failures_.max_words != 0 && split_words(text).size() > failures_.max_words) return std::nullopt;
    if (source == "en" && languages_.count(target) != 0) return map_words(text, language(target), true);
    if (target == "en" && languages_.count(source) != 0) return map_words(text, language(source), false);
    return std::nullopt;
}

} // namespace moelab::augment
