// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/augment/back_translation.h"

#include <algorithm>
#include <cctype>

#include "moelab/augment/text.h"

namespace moelab::augment {

namespace {

bool is_blank(std::string_view text) {
    return std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

// Round-trips the non-whitespace body and restores the original padding.
std::optional<std::string> translate_side(std::string_view text, std::string_view language, Translator& translator,
                                          std::vector<std::string>& warnings, const std::string& label) {
    if (is_blank(text)) return std::string(text);
    const auto padded = split_padding(text);
    auto result = fallback_segment_translate(padded.body, language, translator);
    for (auto& w : result.warnings) warnings.push_back(label + ": " + w);
    if (result.total_failure()) return std::nullopt;
    return padded.lead + result.text + padded.trail;
}

} // namespace

std::optional<std::string> round_trip(std::string_view text, std::string_view language, Translator& translator) {
    const auto there = translator.translate(text, "en", language);
    if (!there) return std::nullopt;
    return translator.translate(*there, language, "en");
}

SegmentTranslation fallback_segment_translate(std::string_view text, std::string_view language,
                                              Translator& translator) {
    SegmentTranslation out;
    if (is_blank(text)) {
        out.text = std::string(text);
        return out;
    }
    if (auto whole = round_trip(text, language, translator)) {
        out.text = std::move(*whole);
        out.segments = 1;
        return out;
    }
    for (const auto& sentence : split_sentences(text)) {
        if (is_blank(sentence.text)) continue;
        ++out.segments;
        auto translated = round_trip(sentence.text, language, translator);
        if (!translated) {
            ++out.failed;
            out.warnings.push_back("segment left untranslated (" + std::string(language) + "): " + sentence.text);
        }
        if (!out.text.empty()) out.text += ' ';
        out.text += translated ? *translated : sentence.text;
    }
    return out;
}

std::vector<data::QAExample> back_translate(const data::QAExample& example, const std::vector<std::string>& languages,
                                            Translator& translator, AugmentReport& report) {
    std::size_t begin = example.context.size();
    std::size_t end = example.context.size();
    if (!example.answers.empty()) {
        begin = example.answers.front().start;
        end = 0;
        for (const auto& a : example.answers) {
            begin = std::min(begin, a.start);
            end = std::max(end, a.start + a.text.size());
        }
    }
    const std::string_view context = example.context;
    const auto prefix = context.substr(0, begin);
    const auto middle = context.substr(begin, end - begin);
    const auto suffix = context.substr(end);

    std::vector<data::QAExample> out;
    for (const auto& lang : languages) {
        std::vector<std::string> warnings;
        const auto new_prefix = translate_side(prefix, lang, translator, warnings, example.id + " prefix");
        const auto new_suffix = translate_side(suffix, lang, translator, warnings, example.id + " suffix");
        report.warnings.insert(report.warnings.end(), warnings.begin(), warnings.end());
        if (!new_prefix || !new_suffix) {
            ++report.dropped_translation;
            continue;
        }
        data::QAExample aug = example;
        aug.id = example.id + "-bt-" + lang;
        aug.context = *new_prefix + std::string(middle) + *new_suffix;
        for (auto& a : aug.answers) a.start = new_prefix->size() + (a.start - begin);
        ++report.emitted;
        out.push_back(std::move(aug));
    }
    return out;
}

} // namespace moelab::augment
