// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "moelab/augment/back_translation.h"
#include "moelab/augment/eda.h"
#include "moelab/augment/lexicon.h"
#include "moelab/augment/translator.h"
#include "moelab/data/qa_example.h"

namespace moelab::augment {

struct AugmentOutput {
    data::Dataset examples;
    AugmentReport report;
};

/// EDA variants followed by back-translated variants for every input, in
/// input order. Originals are not included. Each example draws from
/// Rng(recipe.seed).substream("augment:" + id), so results do not depend on
/// dataset order or on other examples.
AugmentOutput augment_dataset(const data::Dataset& dataset, const AugmentationRecipe& recipe,
                              const SynonymLexicon& lexicon, Translator& translator);

/// Parses "key = value" lines (sr, rs, ri, rd, n_aug, languages, seed);
/// languages is comma separated. Unknown keys are a ConfigError.
AugmentationRecipe parse_recipe(std::string_view text, const std::string& source = "<recipe>");
AugmentationRecipe load_recipe(const std::string& path);

} // namespace moelab::augment
