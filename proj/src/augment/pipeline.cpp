// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/augment/pipeline.h"

#include <fstream>
#include <sstream>

#include "moelab/augment/text.h"
#include "moelab/core/error.h"
#include "moelab/core/rng.h"

namespace moelab::augment {

AugmentOutput augment_dataset(const data::Dataset& dataset, const AugmentationRecipe& recipe,
                              const SynonymLexicon& lexicon, Translator& translator) {
    recipe.validate();
    AugmentOutput out;
    out.report.input_count = dataset.size();
    const Rng root(recipe.seed);
    for (const auto& ex : dataset) {
        auto rng = root.substream("augment:" + ex.id);
        for (auto& aug : eda_augment(ex, recipe, lexicon, rng, out.report)) out.examples.push_back(std::move(aug));
        for (auto& aug : back_translate(ex, recipe.languages, translator, out.report)) {
            out.examples.push_back(std::move(aug));
        }
    }
    return out;
}

namespace {

double parse_double(const std::string& key, const std::string& value, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used == value.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(where + ": '" + key + "' expects a number, got '" + value + "'");
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value, const std::string& where) {
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError(where + ": '" + key + "' expects a non-negative integer, got '" + value + "'");
    }
    return std::stoull(value);
}

} // namespace

AugmentationRecipe parse_recipe(std::string_view text, const std::string& source) {
    AugmentationRecipe recipe;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = split_padding(line).body;
        if (body.empty() || body[0] == '#') continue;
        const auto eq = body.find('=');
        const auto where = source + ":" + std::to_string(line_no);
        if (eq == std::string::npos) throw ParseError(where + ": expected 'key = value'");
        const auto key = split_padding(body.substr(0, eq)).body;
        const auto value = split_padding(body.substr(eq + 1)).body;
        if (key == "sr") {
            recipe.sr = parse_double(key, value, where);
        } else if (key == "rs") {
            recipe.rs = parse_double(key, value, where);
        } else if (key == "ri") {
            recipe.ri = parse_double(key, value, where);
        } else if (key == "rd") {
            recipe.rd = parse_double(key, value, where);
        } else if (key == "n_aug") {
            recipe.n_aug = parse_unsigned(key, value, where);
        } else if (key == "seed") {
            recipe.seed = parse_unsigned(key, value, where);
        } else if (key == "languages") {
            recipe.languages.clear();
            std::stringstream parts(value);
            std::string item;
            while (std::getline(parts, item, ',')) {
                auto lang = split_padding(item).body;
                if (!lang.empty()) recipe.languages.push_back(lang);
            }
        } else {
            throw ConfigError(where + ": unknown recipe key '" + key + "'");
        }
    }
    recipe.validate();
    return recipe;
}

AugmentationRecipe load_recipe(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("recipe file not found: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_recipe(buf.str(), path);
}

} // namespace moelab::augment
