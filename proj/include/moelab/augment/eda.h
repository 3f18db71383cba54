// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Easy data augmentation on whitespace tokens with answer protection.
//
// Operation counts use round-half-up of rate x count. Random draws, in order:
//   synonym_replace: partial Fisher-Yates over eligible positions
//                    (uniform_int(E - i) for i < m), then one
//                    uniform_int(#synonyms) per chosen position in choice order.
//   random_insert:   per insertion uniform_int(#candidates) for the source
//                    word, uniform_int(#synonyms), uniform_int(#allowed slots).
//   random_swap:     per swap a = uniform_int(U), b = uniform_int(U - 1),
//                    b shifted past a, over the unprotected positions U.
//   random_delete:   one bernoulli(rd) per unprotected token in order; when
//                    nothing would remain, uniform_int(n) picks the survivor.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "moelab/augment/lexicon.h"
#include "moelab/data/qa_example.h"

namespace moelab {
class Rng;
}

namespace moelab::augment {

struct AugmentationRecipe {
    double sr = 0.1;
    double rs = 0.1;
    double ri = 0.1;
    double rd = 0.1;
    std::size_t n_aug = 4;
    /// Intermediate languages for back translation, in order; empty disables it.
    std::vector<std::string> languages;
    std::uint64_t seed = 0;

    void validate() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

struct EdaToken {
    std::string text;
    bool is_protected = false;
};

struct AugmentReport {
    std::size_t input_count = 0;
    std::size_t emitted = 0;
    std::size_t dropped_rematch = 0;
    std::size_t dropped_translation = 0;
    std::vector<std::string> warnings;

    AugmentReport& operator+=(const AugmentReport& other);
    [[nodiscard]] nlohmann::json to_json() const;
};

std::size_t round_half_up(double x);

/// Normalised words of every answer of the example.
std::set<std::string> answer_words(const std::vector<data::Answer>& answers);
/// Indices into split_words(context) whose normalised form shares a word with an answer.
std::set<std::size_t> protected_tokens(const std::string& context, const std::vector<data::Answer>& answers);

std::vector<EdaToken> make_tokens(const std::string& sentence, const std::set<std::string>& protected_words);
std::string join_tokens(const std::vector<EdaToken>& tokens);

void eda_synonym_replace(std::vector<EdaToken>& tokens, double sr, const SynonymLexicon& lexicon, Rng& rng);
void eda_random_insert(std::vector<EdaToken>& tokens, double ri, const SynonymLexicon& lexicon, Rng& rng);
void eda_random_swap(std::vector<EdaToken>& tokens, double rs, Rng& rng);
void eda_random_delete(std::vector<EdaToken>& tokens, double rd, Rng& rng);

/// Finds `answer` in `context`: first occurrence at or after relative
/// position `relative` (0..1) of the context, else the first anywhere.
std::optional<std::size_t> rematch(const std::string& context, const std::string& answer, double relative);

/// n_aug variants with ids "<id>-eda<k>" (k from 1). Each sentence gets
/// synonym replacement, insertion, swap and deletion in that order; unchanged
/// sentences keep their original bytes. Variants whose answers cannot be
/// rematched are dropped and counted.
std::vector<data::QAExample> eda_augment(const data::QAExample& example, const AugmentationRecipe& recipe,
                                         const SynonymLexicon& lexicon, Rng& rng, AugmentReport& report);

} // namespace moelab::augment
