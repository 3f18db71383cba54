// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "moelab/core/error.h"
#include "moelab/core/rng.h"
#include "moelab/data/metrics.h"
#include "moelab/data/sampling.h"
#include "moelab/data/squad_io.h"
#include "moelab/data/synthetic.h"

using namespace moelab;
using namespace moelab::data;

namespace {

QAExample make(std::string id, std::string context, std::string answer) {
    QAExample ex;
    ex.id = std::move(id);
    ex.context = std::move(context);
    ex.question = "q?";
    const auto pos = ex.context.find(answer);
    ex.answers.push_back({answer, pos});
    return ex;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("moelab_test_" + name);
}

} // namespace

TEST_CASE("normalize_answer", "[metrics]") {
    CHECK(normalize_answer("The Email Address.") == std::vector<std::string>{"email", "address"});
    CHECK(normalize_answer("").empty());
    CHECK(normalize_answer("Constantine II and Constantius II") ==
          std::vector<std::string>{"constantine", "ii", "and", "constantius", "ii"});
    CHECK(normalize_answer("  an  apple,\tthe\npie ") == std::vector<std::string>{"apple", "pie"});
    CHECK(normalize_answer("theory") == std::vector<std::string>{"theory"});
}

TEST_CASE("exact match and f1 on reported prediction pairs", "[metrics]") {
    CHECK(exact_match("third stage", "withdrawal stage") == 0.0);
    CHECK(std::abs(f1_score("third stage", "withdrawal stage") - 0.5) <= 1e-12);
    CHECK(exact_match("gray haze", "smog") == 0.0);
    CHECK(f1_score("gray haze", "smog") == 0.0);
    for (const char* s : {"kidney transplant", "email address", "Arizona desert", "San Antonio Spurs",
                          "Harvard University"}) {
        CHECK(exact_match(s, s) == 1.0);
        CHECK(f1_score(s, s) == 1.0);
    }
    CHECK(std::abs(f1_score("Constantine II and Constantius II", "Constantius II") - 4.0 / 7.0) <= 1e-12);
}

TEST_CASE("no-answer conventions", "[metrics]") {
    CHECK(exact_match("", "") == 1.0);
    CHECK(f1_score("", "") == 1.0);
    CHECK(f1_score("x", "") == 0.0);
    CHECK(f1_score("", "x") == 0.0);
    CHECK(f1_score("the", "a") == 1.0);  // both normalise to empty
}

TEST_CASE("multi-reference takes the maximum", "[metrics]") {
    const std::vector<std::string> golds{"withdrawal stage", "third stage"};
    CHECK(exact_match("third stage", golds) == 1.0);
    const std::vector<std::string> partial{"smog", "withdrawal stage"};
    CHECK(f1_score("third stage", partial) == 0.5);
}

TEST_CASE("metric properties on random token strings", "[metrics][property]") {
    Rng rng(1);
    const std::vector<std::string> words{"a", "red", "blue", "The", "cat", "dog,", "sat", "sat."};
    auto random_text = [&] {
        std::string s;
        const auto n = rng.uniform_int(5);
        for (std::size_t i = 0; i < n; ++i) s += words[rng.uniform_int(words.size())] + " ";
        return s;
    };
    for (int i = 0; i < 500; ++i) {
        const auto a = random_text(), b = random_text();
        CHECK(f1_score(a, b) == f1_score(b, a));
        if (exact_match(a, b) == 1.0) CHECK(f1_score(a, b) == 1.0);
        const double f = f1_score(a, b);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
    }
}

TEST_CASE("evaluate aggregates", "[metrics]") {
    Dataset ds{make("a", "we reached the withdrawal stage today", "withdrawal stage"),
               make("b", "the city had smog again", "smog")};
    SECTION("gold predictions") {
        auto r = evaluate({{"a", "withdrawal stage"}, {"b", "smog"}}, ds);
        CHECK(r.exact_match == 1.0);
        CHECK(r.f1 == 1.0);
        CHECK(r.missing_ids.empty());
    }
    SECTION("empty predictions") {
        auto r = evaluate({}, ds);
        CHECK(r.exact_match == 0.0);
        CHECK(r.f1 == 0.0);
        CHECK(r.missing_ids == std::vector<std::string>{"a", "b"});
    }
    SECTION("reported pairs") {
        auto r = evaluate({{"a", "third stage"}, {"b", "gray haze"}}, ds);
        CHECK(r.exact_match == 0.0);
        CHECK(std::abs(r.f1 - 0.25) <= 1e-12);
        const auto csv = to_csv(r);
        CHECK(csv.find("__mean__,0,0.25,0") != std::string::npos);
        CHECK(to_json(r)["f1"].get<double>() == r.f1);
    }
    SECTION("unanswerable scored with empty prediction") {
        QAExample none;
        none.id = "c";
        none.context = "nothing here";
        none.answerable = false;
        auto r = evaluate({{"c", ""}}, {none});
        CHECK(r.exact_match == 1.0);
    }
}

TEST_CASE("utf8 offset conversion", "[data]") {
    const std::string s = "caf\xC3\xA9 na\xC3\xAFve";  // café naïve
    CHECK(codepoint_to_byte(s, 5) == 6);
    CHECK(byte_to_codepoint(s, 6) == 5);
    CHECK(codepoint_to_byte(s, 100) == s.size());
    for (std::size_t cp = 0; cp <= 10; ++cp) CHECK(byte_to_codepoint(s, codepoint_to_byte(s, cp)) == cp);
}

TEST_CASE("squad round trip", "[data][io]") {
    SyntheticOptions opt;
    opt.count = 20;
    opt.colours_only = false;
    opt.unanswerable_fraction = 0.3;
    auto ds = generate_synthetic(opt);
    QAExample unicode = make("u1", "Le caf\xC3\xA9 est \xC3\xA0 Paris.", "Paris");
    unicode.title = "fr";
    ds.push_back(unicode);

    const auto path = temp_path("roundtrip.json");
    save_squad(path, ds);
    const auto loaded = load_squad(path);
    CHECK(loaded.problems.empty());
    REQUIRE(loaded.examples.size() == ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK(loaded.examples[i] == ds[i]);
    CHECK(to_squad_json(ds)["data"].back()["paragraphs"][0]["qas"][0]["answers"][0]["answer_start"] == 14);
    CHECK(unicode.answers[0].start == 16);
    std::filesystem::remove(path);
}

TEST_CASE("squad loader validation", "[data][io]") {
    nlohmann::json doc = {
        {"data",
         {{{"title", "t"},
           {"paragraphs",
            {{{"context", "alpha beta gamma"},
              {"qas",
               {{{"id", "ok"}, {"question", "?"}, {"answers", {{{"text", "beta"}, {"answer_start", 6}}}}},
                {{"id", "bad"}, {"question", "?"}, {"answers", {{{"text", "beta"}, {"answer_start", 2}}}}},
                {{"id", "none"}, {"question", "?"}, {"answers", nlohmann::json::array()}, {"is_impossible", true}}}}}}}}}}};
    auto r = parse_squad(doc, "inline");
    REQUIRE(r.examples.size() == 2);
    CHECK(r.examples[0].id == "ok");
    CHECK_FALSE(r.examples[1].answerable);
    REQUIRE(r.problems.size() == 1);
    CHECK(r.problems[0].rfind("bad:", 0) == 0);

    CHECK_THROWS_AS(parse_squad(nlohmann::json{{"nodata", 1}}, "inline"), ParseError);
    const auto path = temp_path("broken.json");
    std::ofstream(path) << "{\"data\": [";
    try {
        (void)load_squad(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(path.string()) != std::string::npos);
    }
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_squad(temp_path("does_not_exist.json")), ConfigError);
}

TEST_CASE("sample_and_mix", "[data][sampling]") {
    SyntheticOptions opt;
    opt.count = 30;
    NamedDataset a{"a", generate_synthetic(opt)};
    opt.seed = 9;
    opt.count = 5;
    NamedDataset b{"b", generate_synthetic(opt)};
    for (auto& ex : b.examples) ex.id = "b-" + ex.id;

    CHECK(sample_and_mix({a}, {0}, 1).examples.empty());

    auto r1 = sample_and_mix({a, b}, {10, 8}, 42);
    auto r2 = sample_and_mix({a, b}, {10, 8}, 42);
    REQUIRE(r1.examples.size() == 15);
    REQUIRE(r1.warnings.size() == 1);
    CHECK(r1.warnings[0].find("'b'") != std::string::npos);
    std::set<std::string> ids;
    for (std::size_t i = 0; i < r1.examples.size(); ++i) {
        CHECK(r1.examples[i].id == r2.examples[i].id);
        ids.insert(r1.examples[i].id);
    }
    CHECK(ids.size() == 15);

    auto r3 = sample_and_mix({a, b}, {10, 8}, 43);
    bool differs = false;
    for (std::size_t i = 0; i < 10; ++i) differs |= r1.examples[i].id != r3.examples[i].id;
    CHECK(differs);
    // The first source's sample does not depend on the second source's count.
    auto r4 = sample_and_mix({a, b}, {10, 2}, 42);
    for (std::size_t i = 0; i < 10; ++i) CHECK(r4.examples[i].id == r1.examples[i].id);
    CHECK_THROWS_AS(sample_and_mix({a}, {1, 2}, 1), ConfigError);
}

TEST_CASE("synthetic corpus is valid and seeded", "[data][synthetic]") {
    SyntheticOptions opt;
    opt.count = 200;
    opt.colours_only = false;
    opt.unanswerable_fraction = 0.2;
    const auto ds = generate_synthetic(opt);
    std::size_t unanswerable = 0;
    for (const auto& ex : ds) {
        CHECK(validate_example(ex).empty());
        unanswerable += ex.answerable ? 0 : 1;
    }
    CHECK(unanswerable > 0);
    CHECK(generate_synthetic(opt) == ds);
    opt.seed = 1;
    CHECK_FALSE(generate_synthetic(opt) == ds);
}
