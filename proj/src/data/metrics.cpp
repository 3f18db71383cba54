// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/data/metrics.h"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

namespace moelab::data {

namespace {

bool is_ascii_punct(char c) { return static_cast<unsigned char>(c) < 0x80 && std::ispunct(static_cast<unsigned char>(c)); }

bool is_article(std::string_view w) { return w == "a" || w == "an" || w == "the"; }

std::string csv_quote(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    return out + '"';
}

std::string format_score(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

std::vector<std::string> normalize_answer(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty() && !is_article(current)) tokens.push_back(current);
        current.clear();
    };
    for (char c : text) {
        if (is_ascii_punct(c)) continue;
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
            flush();
        } else {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    flush();
    return tokens;
}

double exact_match(std::string_view prediction, std::string_view gold) {
    return normalize_answer(prediction) == normalize_answer(gold) ? 1.0 : 0.0;
}

double f1_score(std::string_view prediction, std::string_view gold) {
    const auto pred = normalize_answer(prediction);
    const auto ref = normalize_answer(gold);
    if (pred.empty() || ref.empty()) return pred.empty() && ref.empty() ? 1.0 : 0.0;
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto& w : ref) ++counts[w];
    std::size_t overlap = 0;
    for (const auto& w : pred) {
        auto it = counts.find(w);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    if (overlap == 0) return 0.0;
    const double precision = static_cast<double>(overlap) / static_cast<double>(pred.size());
    const double recall = static_cast<double>(overlap) / static_cast<double>(ref.size());
    return 2.0 * precision * recall / (precision + recall);
}

double exact_match(std::string_view prediction, std::span<const std::string> golds) {
    double best = 0.0;
    for (const auto& g : golds) best = std::max(best, exact_match(prediction, g));
    return best;
}

double f1_score(std::string_view prediction, std::span<const std::string> golds) {
    double best = 0.0;
    for (const auto& g : golds) best = std::max(best, f1_score(prediction, g));
    return best;
}

std::vector<std::string> gold_texts(const QAExample& example) {
    if (!example.answerable || example.answers.empty()) return {""};
    std::vector<std::string> out;
    for (const auto& a : example.answers) out.push_back(a.text);
    return out;
}

EvalResult evaluate(const std::map<std::string, std::string>& predictions, const Dataset& dataset) {
    EvalResult result;
    double em_sum = 0.0, f1_sum = 0.0;
    for (const auto& ex : dataset) {
        ExampleScore s;
        s.id = ex.id;
        auto it = predictions.find(ex.id);
        if (it == predictions.end()) {
            s.missing = true;
            result.missing_ids.push_back(ex.id);
        } else {
            const auto golds = gold_texts(ex);
            s.em = exact_match(it->second, golds);
            s.f1 = f1_score(it->second, golds);
        }
        em_sum += s.em;
        f1_sum += s.f1;
        result.scores.push_back(std::move(s));
    }
    if (!dataset.empty()) {
        result.exact_match = em_sum / static_cast<double>(dataset.size());
        result.f1 = f1_sum / static_cast<double>(dataset.size());
    }
    return result;
}

nlohmann::json to_json(const EvalResult& result) {
    nlohmann::json per = nlohmann::json::array();
    for (const auto& s : result.scores) {
        per.push_back({{"id", s.id}, {"em", s.em}, {"f1", s.f1}, {"missing", s.missing}});
    }
    return {{"exact_match", result.exact_match},
            {"f1", result.f1},
            {"count", result.scores.size()},
            {"missing_ids", result.missing_ids},
            {"examples", per}};
}

std::string to_csv(const EvalResult& result) {
    std::ostringstream os;
    os << "id,em,f1,missing\n";
    for (const auto& s : result.scores) {
        os << csv_quote(s.id) << ',' << format_score(s.em) << ',' << format_score(s.f1) << ','
           << (s.missing ? 1 : 0) << '\n';
    }
    os << "__mean__," << format_score(result.exact_match) << ',' << format_score(result.f1) << ','
       << result.missing_ids.size() << '\n';
    return os.str();
}

} // namespace moelab::data
