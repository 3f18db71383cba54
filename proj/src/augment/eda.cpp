// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/augment/eda.h"

#include <algorithm>
#include <cmath>

#include "moelab/augment/text.h"
#include "moelab/core/error.h"
#include "moelab/core/rng.h"
#include "moelab/data/metrics.h"

namespace moelab::augment {

namespace {

const std::vector<std::string>& synonyms_of(const EdaToken& t, const SynonymLexicon& lexicon) {
    return lexicon.synonyms(split_word(t.text).core);
}

bool is_protected_word(const std::string& word, const std::set<std::string>& protected_words) {
    for (const auto& w : data::normalize_answer(word)) {
        if (protected_words.count(w) != 0) return true;
    }
    return false;
}

} // namespace

void AugmentationRecipe::validate() const {
    const std::pair<const char*, double> rates[] = {{"sr", sr}, {"rs", rs}, {"ri", ri}, {"rd", rd}};
    for (const auto& [name, v] : rates) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ConfigError(std::string(name) + " must be in [0, 1], got " + std::to_string(v));
        }
    }
}

nlohmann::json AugmentationRecipe::to_json() const {
    return {{"sr", sr}, {"rs", rs}, {"ri", ri}, {"rd", rd}, {"n_aug", n_aug}, {"languages", languages}, {"seed", seed}};
}

AugmentReport& AugmentReport::operator+=(const AugmentReport& other) {
    input_count += other.input_count;
    emitted += other.emitted;
    dropped_rematch += other.dropped_rematch;
    dropped_translation += other.dropped_translation;
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
    return *this;
}

nlohmann::json AugmentReport::to_json() const {
    return {{"input_count", input_count},
            {"emitted", emitted},
            {"dropped_rematch", dropped_rematch},
            {"dropped_translation", dropped_translation},
            {"warnings", warnings}};
}

std::size_t round_half_up(double x) { return x <= 0.0 ? 0 : static_cast<std::size_t>(std::floor(x + 0.5)); }

std::set<std::string> answer_words(const std::vector<data::Answer>& answers) {
    std::set<std::string> out;
    for (const auto& a : answers) {
        for (auto& w : data::normalize_answer(a.text)) out.insert(std::move(w));
    }
    return out;
}

std::set<std::size_t> protected_tokens(const std::string& context, const std::vector<data::Answer>& answers) {
    const auto words = answer_words(answers);
    std::set<std::size_t> out;
    const auto tokens = split_words(context);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (is_protected_word(tokens[i], words)) out.insert(i);
    }
    return out;
}

std::vector<EdaToken> make_tokens(const std::string& sentence, const std::set<std::string>& protected_words) {
    std::vector<EdaToken> out;
    for (auto& w : split_words(sentence)) {
        const bool p = is_protected_word(w, protected_words);
        out.push_back({std::move(w), p});
    }
    return out;
}

std::string join_tokens(const std::vector<EdaToken>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t.text;
    }
    return out;
}

void eda_synonym_replace(std::vector<EdaToken>& tokens, double sr, const SynonymLexicon& lexicon, Rng& rng) {
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!tokens[i].is_protected && !synonyms_of(tokens[i], lexicon).empty()) eligible.push_back(i);
    }
    const std::size_t m = std::min(eligible.size(), round_half_up(sr * static_cast<double>(eligible.size())));
    for (std::size_t i = 0; i < m; ++i) {
        const auto j = i + rng.uniform_int(eligible.size() - i);
        std::swap(eligible[i], eligible[j]);
    }
    for (std::size_t i = 0; i < m; ++i) {
        auto& t = tokens[eligible[i]];
        const auto& syns = synonyms_of(t, lexicon);
        t.text = replace_core(t.text, syns[rng.uniform_int(syns.size())]);
    }
}

void eda_random_insert(std::vector<EdaToken>& tokens, double ri, const SynonymLexicon& lexicon, Rng& rng) {
    const std::size_t m = round_half_up(ri * static_cast<double>(tokens.size()));
    for (std::size_t n = 0; n < m; ++n) {
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (!tokens[i].is_protected && !synonyms_of(tokens[i], lexicon).empty()) candidates.push_back(i);
        }
        if (candidates.empty()) return;
        const auto& syns = synonyms_of(tokens[candidates[rng.uniform_int(candidates.size())]], lexicon);
        std::string word = syns[rng.uniform_int(syns.size())];
        // Slot s inserts before tokens[s]; slots between two protected tokens would split an answer.
        std::vector<std::size_t> slots;
        for (std::size_t s = 0; s <= tokens.size(); ++s) {
            if (s > 0 && s < tokens.size() && tokens[s - 1].is_protected && tokens[s].is_protected) continue;
            slots.push_back(s);
        }
        const auto slot = slots[rng.uniform_int(slots.size())];
        tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(slot), EdaToken{std::move(word), false});
    }
}

void eda_random_swap(std::vector<EdaToken>& tokens, double rs, Rng& rng) {
    const std::size_t m = round_half_up(rs * static_cast<double>(tokens.size()));
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!tokens[i].is_protected) free.push_back(i);
    }
    if (free.size() < 2) return;
    for (std::size_t n = 0; n < m; ++n) {
        const auto a = rng.uniform_int(free.size());
        auto b = rng.uniform_int(free.size() - 1);
        if (b >= a) ++b;
        std::swap(tokens[free[a]], tokens[free[b]]);
    }
}

void eda_random_delete(std::vector<EdaToken>& tokens, double rd, Rng& rng) {
    if (tokens.empty()) return;
    std::vector<EdaToken> kept;
    for (const auto& t : tokens) {
        if (t.is_protected || !rng.bernoulli(rd)) kept.push_back(t);
    }
    if (kept.empty()) kept.push_back(tokens[rng.uniform_int(tokens.size())]);
    tokens = std::move(kept);
}

std::optional<std::size_t> rematch(const std::string& context, const std::string& answer, double relative) {
    if (answer.empty()) return std::nullopt;
    const auto hint = static_cast<std::size_t>(std::llround(std::clamp(relative, 0.0, 1.0) *
                                                            static_cast<double>(context.size())));
    auto pos = context.find(answer, hint);
    if (pos == std::string::npos) pos = context.find(answer);
    if (pos == std::string::npos) return std::nullopt;
    return pos;
}

std::vector<data::QAExample> eda_augment(const data::QAExample& example, const AugmentationRecipe& recipe,
                                         const SynonymLexicon& lexicon, Rng& rng, AugmentReport& report) {
    recipe.validate();
    const auto words = answer_words(example.answers);
    const auto sentences = split_sentences(example.context);
    std::vector<data::QAExample> out;
    for (std::size_t k = 1; k <= recipe.n_aug; ++k) {
        std::string context;
        for (const auto& s : sentences) {
            auto tokens = make_tokens(s.text, words);
            const auto before = tokens.size();
            const auto original = join_tokens(tokens);
            eda_synonym_replace(tokens, recipe.sr, lexicon, rng);
            eda_random_insert(tokens, recipe.ri, lexicon, rng);
            eda_random_swap(tokens, recipe.rs, rng);
            eda_random_delete(tokens, recipe.rd, rng);
            const auto joined = join_tokens(tokens);
            context += (tokens.size() == before && joined == original) ? s.text : joined;
            context += s.separator;
        }
        data::QAExample aug = example;
        aug.id = example.id + "-eda" + std::to_string(k);
        aug.context = context;
        bool ok = true;
        for (auto& a : aug.answers) {
            const double relative =
                example.context.empty() ? 0.0
                                        : static_cast<double>(a.start) / static_cast<double>(example.context.size());
            const auto pos = rematch(context, a.text, relative);
            if (!pos) {
                ok = false;
                break;
            }
            a.start = *pos;
        }
        if (!ok) {
            ++report.dropped_rematch;
            continue;
        }
        ++report.emitted;
        out.push_back(std::move(aug));
    }
    return out;
}

} // namespace moelab::augment
