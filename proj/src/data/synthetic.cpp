// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/data/synthetic.h"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moelab/core/error.h"
#include "moelab/core/rng.h"

namespace moelab::data {

namespace {

constexpr std::array<std::string_view, 12> kNouns = {"car",  "house", "boat",  "kite",  "lamp",  "chair",
                                                     "door", "bike",  "train", "fence", "table", "coat"};
constexpr std::array<std::string_view, 6> kColours = {"red", "blue", "green", "yellow", "black", "white"};
constexpr std::array<std::string_view, 8> kNames = {"anna", "ben", "clara", "david", "ella", "frank", "grace", "hugo"};
constexpr std::array<std::string_view, 6> kPlaces = {"old mill", "city library", "north harbor",
                                                     "market square", "train station", "river bank"};
constexpr std::array<std::string_view, 10> kFillers = {
    "It rained for most of the morning.",
    "Nobody in the village could remember a quieter week.",
    "A small dog slept under the bench.",
    "The shop on the corner opened late.",
    "Several children played near the school.",
    "The wind moved slowly across the hills.",
    "Everyone waited for the evening bus.",
    "A letter arrived just after lunch.",
    "The baker sold bread until noon.",
    "Some birds sang on the roof.",
};

template <typename Pool>
std::string pick(const Pool& pool, Rng& rng) {
    return std::string(pool[rng.uniform_int(pool.size())]);
}

std::string capitalise(std::string s) {
    if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

} // namespace

Dataset generate_synthetic(const SyntheticOptions& options) {
    if (options.min_filler > options.max_filler) throw ConfigError("synthetic: min_filler exceeds max_filler");
    if (options.unanswerable_fraction < 0.0 || options.unanswerable_fraction > 1.0) {
        throw ConfigError("synthetic: unanswerable_fraction must be in [0, 1]");
    }
    if (options.palette == 0 || options.palette > kColours.size()) {
        throw ConfigError("synthetic: palette must be in [1, " + std::to_string(kColours.size()) + "]");
    }
    const std::span<const std::string_view> palette(kColours.data(), options.palette);
    Rng rng = Rng(options.seed).substream("synthetic");
    Dataset out;
    for (std::size_t n = 0; n < options.count; ++n) {
        QAExample ex;
        ex.id = "syn-" + std::to_string(n);
        ex.title = "synthetic";
        const bool colour = options.colours_only || rng.bernoulli(0.5);
        const bool answerable = !rng.bernoulli(options.unanswerable_fraction);

        std::string key_sentence, answer, question;
        if (colour) {
            const auto noun = pick(kNouns, rng);
            answer = pick(palette, rng);
            key_sentence = "The " + noun + " is " + answer + ".";
            std::string asked = noun;
            while (!answerable && asked == noun) asked = pick(kNouns, rng);
            question = "What color is the " + asked + "?";
        } else {
            const auto name = pick(kNames, rng);
            answer = pick(kPlaces, rng);
            key_sentence = capitalise(name) + " walked to the " + answer + ".";
            std::string asked = name;
            while (!answerable && asked == name) asked = pick(kNames, rng);
            question = "Where did " + capitalise(asked) + " walk?";
        }

        const std::size_t fillers = options.min_filler + rng.uniform_int(options.max_filler - options.min_filler + 1);
        std::vector<std::string> sentences;
        for (std::size_t i = 0; i < fillers; ++i) sentences.push_back(pick(kFillers, rng));
        const std::size_t slot = rng.uniform_int(fillers + 1);
        sentences.insert(sentences.begin() + static_cast<std::ptrdiff_t>(slot), key_sentence);

        std::size_t answer_start = 0;
        for (std::size_t i = 0; i < sentences.size(); ++i) {
            if (i > 0) ex.context += ' ';
            if (i == slot) answer_start = ex.context.size() + sentences[i].rfind(answer);
            ex.context += sentences[i];
        }
        ex.question = question;
        ex.answerable = answerable;
        if (answerable) ex.answers.push_back({answer, answer_start});
        out.push_back(std::move(ex));
    }
    return out;
}

} // namespace moelab::data
