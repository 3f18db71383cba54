// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/data/squad_io.h"

#include <fstream>

#include "moelab/core/error.h"

namespace moelab::data {

using nlohmann::json;

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("file not found: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

LoadReport parse_squad(const json& doc, const std::string& source) {
    LoadReport report;
    try {
        for (const auto& article : doc.at("data")) {
            const std::string title = article.value("title", "");
            for (const auto& para : article.at("paragraphs")) {
                const std::string context = para.at("context").get<std::string>();
                for (const auto& qa : para.at("qas")) {
                    QAExample ex;
                    ex.id = qa.at("id").get<std::string>();
                    ex.title = title;
                    ex.context = context;
                    ex.question = qa.at("question").get<std::string>();
                    const bool impossible = qa.value("is_impossible", false);
                    if (!impossible) {
                        for (const auto& a : qa.at("answers")) {
                            Answer ans;
                            ans.text = a.at("text").get<std::string>();
                            ans.start = codepoint_to_byte(context, a.at("answer_start").get<std::size_t>());
                            ex.answers.push_back(std::move(ans));
                        }
                    }
                    ex.answerable = !ex.answers.empty();
                    const auto problems = validate_example(ex);
                    if (!problems.empty()) {
                        report.problems.push_back(ex.id + ": " + problems.front());
                        continue;
                    }
                    report.examples.push_back(std::move(ex));
                }
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(source + ": malformed SQuAD structure: " + e.what());
    }
    return report;
}

LoadReport load_squad(const std::filesystem::path& path) { return parse_squad(read_json_file(path), path.string()); }

json to_squad_json(const Dataset& examples, const std::string& version) {
    json data = json::array();
    const QAExample* previous = nullptr;
    for (const auto& ex : examples) {
        if (previous == nullptr || previous->title != ex.title) {
            data.push_back({{"title", ex.title}, {"paragraphs", json::array()}});
            previous = nullptr;
        }
        auto& paragraphs = data.back()["paragraphs"];
        if (previous == nullptr || previous->context != ex.context) {
            paragraphs.push_back({{"context", ex.context}, {"qas", json::array()}});
        }
        json answers = json::array();
        for (const auto& a : ex.answers) {
            answers.push_back({{"text", a.text}, {"answer_start", byte_to_codepoint(ex.context, a.start)}});
        }
        paragraphs.back()["qas"].push_back(
            {{"id", ex.id}, {"question", ex.question}, {"answers", answers}, {"is_impossible", !ex.answerable}});
        previous = &ex;
    }
    return {{"version", version}, {"data", data}};
}

void save_squad(const std::filesystem::path& path, const Dataset& examples) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << to_squad_json(examples).dump(1) << '\n';
}

std::map<std::string, std::string> load_predictions(const std::filesystem::path& path) {
    const auto doc = read_json_file(path);
    if (!doc.is_object()) throw ParseError(path.string() + ": predictions must be a JSON object of id -> answer");
    std::map<std::string, std::string> out;
    for (const auto& [id, value] : doc.items()) {
        if (!value.is_string()) throw ParseError(path.string() + ": prediction for '" + id + "' is not a string");
        out.emplace(id, value.get<std::string>());
    }
    return out;
}

void save_predictions(const std::filesystem::path& path, const std::map<std::string, std::string>& predictions) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << json(predictions).dump(1) << '\n';
}

} // namespace moelab::data
