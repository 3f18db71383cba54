// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "moelab/augment/eda.h"
#include "moelab/augment/translator.h"
#include "moelab/data/qa_example.h"

namespace moelab::augment {

/// English -> language -> English. nullopt if either leg fails.
std::optional<std::string> round_trip(std::string_view text, std::string_view language, Translator& translator);

struct SegmentTranslation {
    std::string text;
    std::size_t segments = 0;
    std::size_t failed = 0;
    std::vector<std::string> warnings;

    /// True when the text had content and no part of it could be translated.
    [[nodiscard]] bool total_failure() const { return segments > 0 && failed == segments; }
};

/// Round-trips `text` as a whole; on failure, sentence by sentence, rejoined
/// with single spaces. Sentences that still fail pass through unchanged.
SegmentTranslation fallback_segment_translate(std::string_view text, std::string_view language,
                                              Translator& translator);

/// One example per language, ids "<id>-bt-<lang>". The context is cut around
/// the answers (from the earliest start to the latest end); the text before
/// and after is round-tripped with its surrounding whitespace kept, and the
/// answer region is copied verbatim. A language is skipped (and counted in
/// `report.dropped_translation`) when a non-empty side fails completely.
std::vector<data::QAExample> back_translate(const data::QAExample& example, const std::vector<std::string>& languages,
                                            Translator& translator, AugmentReport& report);

} // namespace moelab::augment
