// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <numeric>

#include "moelab/augment/back_translation.h"
#include "moelab/augment/eda.h"
#include "moelab/augment/lexicon.h"
#include "moelab/augment/pipeline.h"
#include "moelab/augment/text.h"
#include "moelab/augment/translator.h"
#include "moelab/core/error.h"
#include "moelab/core/rng.h"
#include "moelab/data/squad_io.h"

using namespace moelab;
using namespace moelab::augment;

namespace {

const std::filesystem::path kRoot = MOELAB_SOURCE_DIR;

data::QAExample make_example(std::string context, std::string answer, std::string id = "q") {
    data::QAExample ex;
    ex.id = std::move(id);
    ex.title = "t";
    ex.question = "?";
    ex.context = std::move(context);
    if (!answer.empty()) {
        const auto pos = ex.context.find(answer);
        REQUIRE(pos != std::string::npos);
        ex.answers.push_back({answer, pos});
        ex.answerable = true;
    } else {
        ex.answerable = false;
    }
    return ex;
}

bool spans_ok(const data::QAExample& ex) {
    return std::all_of(ex.answers.begin(), ex.answers.end(), [&](const data::Answer& a) {
        return a.start + a.text.size() <= ex.context.size() && ex.context.compare(a.start, a.text.size(), a.text) == 0;
    });
}

std::vector<EdaToken> plain_tokens(std::vector<std::string> words, std::vector<bool> prot = {}) {
    std::vector<EdaToken> out;
    for (std::size_t i = 0; i < words.size(); ++i) out.push_back({words[i], !prot.empty() && prot[i]});
    return out;
}

std::vector<std::string> texts(const std::vector<EdaToken>& tokens) {
    std::vector<std::string> out;
    for (const auto& t : tokens) out.push_back(t.text);
    return out;
}

} // namespace

TEST_CASE("sentence and word splitting round-trips") {
    const std::string text = "First one.  Second?\nThird! tail";
    const auto s = split_sentences(text);
    REQUIRE(s.size() == 4);
    CHECK(s[0].text == "First one.");
    CHECK(s[0].separator == "  ");
    CHECK(s[2].text == "Third!");
    std::string joined;
    for (const auto& x : s) joined += x.text + x.separator;
    CHECK(joined == text);

    const auto parts = split_word("(Hello),");
    CHECK(parts.prefix == "(");
    CHECK(parts.core == "Hello");
    CHECK(parts.suffix == "),");
    CHECK(replace_core("Big,", "large") == "Large,");
}

TEST_CASE("lexicon parsing") {
    const auto lex = SynonymLexicon::parse("# c\n\nBig\tlarge, big ,huge,large\nsmall\tlittle\n");
    CHECK(lex.size() == 2);
    CHECK(lex.synonyms("big") == std::vector<std::string>{"large", "huge"});
    CHECK(lex.synonyms("BIG").size() == 2);
    CHECK(lex.synonyms("none").empty());
    CHECK_THROWS_AS(SynonymLexicon::parse("no tab here\n"), ParseError);
    CHECK_THROWS_AS(SynonymLexicon::load("/nonexistent/lexicon.tsv"), ConfigError);

    const auto repo = SynonymLexicon::load(kRoot / "data" / "lexicon.tsv");
    CHECK(repo.size() > 50);
}

TEST_CASE("protected tokens cover every occurrence of answer words") {
    const std::string ctx = "Send an email to the address below. Your email address is private. Addresses vary.";
    const std::vector<data::Answer> ans = {{"email address", ctx.find("email address")}};
    const auto prot = protected_tokens(ctx, ans);
    const auto words = split_words(ctx);
    std::set<std::size_t> expect;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto core = to_lower_ascii(split_word(words[i]).core);
        if (core == "email" || core == "address") expect.insert(i);
    }
    CHECK(expect.size() == 4);
    CHECK(prot == expect);

    CHECK(protected_tokens(ctx, {}).empty());

    const std::string whole = "Quiet streets, old town.";
    CHECK(protected_tokens(whole, {{whole, 0}}).size() == split_words(whole).size());
}

TEST_CASE("synonym replacement counts and identities") {
    const auto lex = SynonymLexicon::parse("a\tA1\nb\tB1\nc\tC1\nd\tD1\ne\tE1\nf\tF1\ng\tG1\nh\tH1\ni\tI1\nj\tJ1\n");
    Rng rng(1);
    auto tokens = plain_tokens({"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "zz"});
    auto same = tokens;
    eda_synonym_replace(same, 0.0, lex, rng);
    CHECK(texts(same) == texts(tokens));

    eda_synonym_replace(tokens, 0.3, lex, rng);
    std::size_t changed = 0;
    for (const auto& t : tokens) changed += (t.text.size() == 2 && t.text != "zz") ? 1 : 0;
    CHECK(changed == 3);

    auto single = plain_tokens({"x", "a", "y"});
    eda_synonym_replace(single, 1.0, lex, rng);
    CHECK(texts(single) == std::vector<std::string>{"x", "a1", "y"});

    CHECK(round_half_up(2.5) == 3);
    CHECK(round_half_up(0.45) == 0);
    CHECK(round_half_up(0.5) == 1);
}

TEST_CASE("operations follow a scripted draw sequence") {
    const auto lex = SynonymLexicon::parse("cat\tfeline,kitty\nsat\trested\nmat\trug,carpet,pad\n");
    const auto base = plain_tokens({"the", "cat", "sat", "on", "the", "mat"}, {false, false, true, false, false, false});

    // Replacement: eligible positions {1, 5} (2 is protected); round(0.5 * 2) = 1.
    {
        auto tokens = base;
        Rng rng(42);
        eda_synonym_replace(tokens, 0.5, lex, rng);
        Rng o(42);
        std::vector<std::size_t> eligible = {1, 5};
        std::swap(eligible[0], eligible[o.uniform_int(2)]);
        const auto& syns = lex.synonyms(base[eligible[0]].text);
        auto expect = texts(base);
        expect[eligible[0]] = syns[o.uniform_int(syns.size())];
        CHECK(texts(tokens) == expect);
    }
    // Insertion: round(0.2 * 6) = 1; candidates {1, 5}; slots 0..6 minus none.
    {
        auto tokens = base;
        Rng rng(7);
        eda_random_insert(tokens, 0.2, lex, rng);
        Rng o(7);
        const std::vector<std::size_t> cand = {1, 5};
        const auto& syns = lex.synonyms(base[cand[o.uniform_int(2)]].text);
        const auto word = syns[o.uniform_int(syns.size())];
        const auto slot = o.uniform_int(7);
        auto expect = texts(base);
        expect.insert(expect.begin() + static_cast<std::ptrdiff_t>(slot), word);
        CHECK(texts(tokens) == expect);
        CHECK_FALSE(tokens[slot].is_protected);
    }
    // Swap: round(0.34 * 6) = 2 swaps over unprotected positions {0, 1, 3, 4, 5}.
    {
        auto tokens = base;
        Rng rng(9);
        eda_random_swap(tokens, 0.34, rng);
        Rng o(9);
        const std::vector<std::size_t> free = {0, 1, 3, 4, 5};
        auto expect = texts(base);
        for (int n = 0; n < 2; ++n) {
            const auto a = o.uniform_int(5);
            auto b = o.uniform_int(4);
            if (b >= a) ++b;
            std::swap(expect[free[a]], expect[free[b]]);
        }
        CHECK(texts(tokens) == expect);
        CHECK(tokens[2].text == "sat");
    }
    // Deletion: one bernoulli per unprotected token, in order.
    {
        auto tokens = base;
        Rng rng(11);
        eda_random_delete(tokens, 0.5, rng);
        Rng o(11);
        std::vector<std::string> expect;
        for (const auto& t : base) {
            if (t.is_protected || !o.bernoulli(0.5)) expect.push_back(t.text);
        }
        CHECK(texts(tokens) == expect);
    }
}

TEST_CASE("operations respect protection") {
    const auto lex = SynonymLexicon::parse("a\tx\nb\ty\n");
    auto all = plain_tokens({"a", "b", "a"}, {true, true, true});
    Rng rng(3);
    eda_random_delete(all, 1.0, rng);
    eda_random_swap(all, 1.0, rng);
    eda_synonym_replace(all, 1.0, lex, rng);
    eda_random_insert(all, 1.0, lex, rng);
    CHECK(texts(all) == std::vector<std::string>{"a", "b", "a"});

    auto some = plain_tokens({"a", "b", "c", "d"});
    eda_random_delete(some, 1.0, rng);
    CHECK(some.size() == 1);

    // Insertions never land between two adjacent protected tokens.
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng r(seed);
        auto tokens = plain_tokens({"a", "P", "Q", "b"}, {false, true, true, false});
        eda_random_insert(tokens, 1.0, lex, r);
        const auto t = texts(tokens);
        const auto p = std::find(t.begin(), t.end(), "P");
        REQUIRE(p + 1 != t.end());
        CHECK(*(p + 1) == "Q");
    }
}

TEST_CASE("eda_augment rematches answers and zero rates are identities") {
    const auto lex = SynonymLexicon::load(kRoot / "data" / "lexicon.tsv");
    const auto ex = make_example("The old bridge connected the two parts of the town. Ada Lovelace lived nearby.",
                                 "Ada Lovelace", "ex1");
    AugmentationRecipe zero;
    zero.sr = zero.rs = zero.ri = zero.rd = 0.0;
    Rng rng(5);
    AugmentReport report;
    const auto copies = eda_augment(ex, zero, lex, rng, report);
    REQUIRE(copies.size() == 4);
    for (std::size_t k = 0; k < copies.size(); ++k) {
        CHECK(copies[k].id == "ex1-eda" + std::to_string(k + 1));
        CHECK(copies[k].context == ex.context);
        CHECK(copies[k].answers == ex.answers);
    }

    AugmentationRecipe heavy;
    heavy.sr = heavy.rs = heavy.ri = heavy.rd = 0.5;
    heavy.n_aug = 20;
    AugmentReport r2;
    const auto out = eda_augment(ex, heavy, lex, rng, r2);
    CHECK(r2.emitted + r2.dropped_rematch == 20);
    for (const auto& a : out) CHECK(spans_ok(a));

    CHECK(rematch("x ab ab", "ab", 0.5) == std::optional<std::size_t>(5));
    CHECK(rematch("ab x x", "ab", 0.9) == std::optional<std::size_t>(0));
    CHECK_FALSE(rematch("abc", "zz", 0.0).has_value());
}

TEST_CASE("eda survival on the fixture corpus") {
    const auto lex = SynonymLexicon::load(kRoot / "data" / "lexicon.tsv");
    const auto ds = data::load_squad(kRoot / "tests" / "fixtures" / "qa_fixture_200.json").examples;
    REQUIRE(ds.size() == 200);
    AugmentationRecipe recipe;
    recipe.seed = 17;
    std::size_t survived = 0;
    const Rng root(recipe.seed);
    for (const auto& ex : ds) {
        auto rng = root.substream("augment:" + ex.id);
        AugmentReport r;
        const auto out = eda_augment(ex, recipe, lex, rng, r);
        for (const auto& a : out) REQUIRE(spans_ok(a));
        survived += out.empty() ? 0 : 1;
    }
    CHECK(static_cast<double>(survived) / static_cast<double>(ds.size()) >= 0.95);
}

TEST_CASE("mock translator round trip") {
    MockTranslator mock;
    const auto es = mock.translate("The big house, quickly.", "en", "es");
    REQUIRE(es.has_value());
    // the -> el, big -> grande, house -> casa, quickly shifted by 3; rotated left by one word.
    CHECK(*es == "grande casa, txlfnob. El");
    const auto back = mock.translate(*es, "es", "en");
    REQUIRE(back.has_value());
    CHECK(*back == "The large house, quickly.");

    CHECK(round_trip("The small city began.", "de", mock) == std::optional<std::string>("The small city started."));
    CHECK_FALSE(mock.translate("x", "es", "fr").has_value());

    IdentityTranslator id;
    CHECK(round_trip("anything  goes", "fr", id) == std::optional<std::string>("anything  goes"));
}

TEST_CASE("fallback segment translation") {
    MockTranslator::Failures f;
    f.max_words = 3;
    MockTranslator limited(f);
    const auto r = fallback_segment_translate("The big house. A small city.", "es", limited);
    CHECK(r.text == "The large house. A small city.");
    CHECK(r.failed == 0);
    CHECK(r.segments == 2);

    MockTranslator::Failures always;
    always.always = true;
    MockTranslator broken(always);
    const auto none = fallback_segment_translate("One thing. Another thing.", "fr", broken);
    CHECK(none.text == "One thing. Another thing.");
    CHECK(none.total_failure());
    CHECK_FALSE(none.warnings.empty());

    const auto empty = fallback_segment_translate("", "fr", broken);
    CHECK(empty.text.empty());
    CHECK_FALSE(empty.total_failure());

    MockTranslator::Failures partial;
    partial.substrings = {"secret"};
    MockTranslator picky(partial);
    const auto mixed = fallback_segment_translate("The big house. A secret city.", "es", picky);
    CHECK(mixed.text == "The large house. A secret city.");
    CHECK(mixed.failed == 1);
    CHECK_FALSE(mixed.total_failure());
}

TEST_CASE("back translation keeps answer bytes") {
    const auto ex = make_example("The big house stood there. Its owner was Zoë Ng, a painter. The city grew.", "Zoë Ng",
                                 "b1");
    IdentityTranslator id;
    AugmentReport report;
    const auto same = back_translate(ex, {"es", "fr", "de"}, id, report);
    REQUIRE(same.size() == 3);
    for (const auto& s : same) {
        CHECK(s.context == ex.context);
        CHECK(s.answers == ex.answers);
    }
    CHECK(same[0].id == "b1-bt-es");

    MockTranslator mock;
    AugmentReport r2;
    const auto out = back_translate(ex, {"es", "fr", "de"}, mock, r2);
    REQUIRE(out.size() == 3);
    CHECK(out[0].context == "The large house stood there. Its owner was Zoë Ng, a painter. The city grew.");
    for (const auto& o : out) {
        CHECK(spans_ok(o));
        CHECK(o.context.find("Zoë Ng") == o.answers[0].start);
    }

    MockTranslator::Failures always;
    always.always = true;
    MockTranslator broken(always);
    AugmentReport r3;
    CHECK(back_translate(ex, {"es", "fr"}, broken, r3).empty());
    CHECK(r3.dropped_translation == 2);

    // Answer spanning the whole context leaves nothing to translate.
    const auto whole = make_example("Just this.", "Just this.");
    AugmentReport r4;
    const auto w = back_translate(whole, {"es"}, broken, r4);
    REQUIRE(w.size() == 1);
    CHECK(w[0].context == whole.context);
}

TEST_CASE("augment_dataset is deterministic and order independent") {
    const auto lex = SynonymLexicon::load(kRoot / "data" / "lexicon.tsv");
    auto ds = data::load_squad(kRoot / "tests" / "fixtures" / "qa_fixture_200.json").examples;
    ds.resize(30);
    AugmentationRecipe recipe;
    recipe.languages = {"es", "fr", "de"};
    recipe.seed = 3;
    MockTranslator mock;
    const auto a = augment_dataset(ds, recipe, lex, mock);
    const auto b = augment_dataset(ds, recipe, lex, mock);
    CHECK(a.examples == b.examples);
    CHECK(a.report.input_count == 30);
    CHECK(a.report.emitted == a.examples.size());
    for (const auto& e : a.examples) CHECK(spans_ok(e));

    auto reversed = ds;
    std::reverse(reversed.begin(), reversed.end());
    const auto c = augment_dataset(reversed, recipe, lex, mock);
    auto sorted = [](data::Dataset d) {
        std::sort(d.begin(), d.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
        return d;
    };
    CHECK(sorted(a.examples) == sorted(c.examples));

    recipe.seed = 4;
    CHECK(augment_dataset(ds, recipe, lex, mock).examples != a.examples);
}

TEST_CASE("recipe parsing and validation") {
    const auto r = parse_recipe("# r\nsr = 0.2\nrs=0.1\nri = 0\nrd = 0.3\nn_aug = 2\nlanguages = es, de\nseed = 9\n");
    CHECK(r.sr == 0.2);
    CHECK(r.n_aug == 2);
    CHECK(r.languages == std::vector<std::string>{"es", "de"});
    CHECK(r.seed == 9);
    CHECK_THROWS_AS(parse_recipe("sr = -0.1\n"), ConfigError);
    CHECK_THROWS_AS(parse_recipe("sr = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_recipe("bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_recipe("n_aug = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_recipe("sr\n"), ParseError);
}
