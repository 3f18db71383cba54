// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/augment/lexicon.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "moelab/augment/text.h"
#include "moelab/core/error.h"

namespace moelab::augment {

namespace {

std::string trim(std::string_view s) { return split_padding(s).body; }

} // namespace

void SynonymLexicon::add(std::string_view word, const std::vector<std::string>& synonyms) {
    const auto key = to_lower_ascii(trim(word));
    if (key.empty()) return;
    auto& list = entries_[key];
    for (const auto& s : synonyms) {
        auto syn = to_lower_ascii(trim(s));
        if (syn.empty() || syn == key || std::find(list.begin(), list.end(), syn) != list.end()) continue;
        list.push_back(std::move(syn));
    }
    if (list.empty()) entries_.erase(key);
}

const std::vector<std::string>& SynonymLexicon::synonyms(std::string_view word) const {
    static const std::vector<std::string> none;
    auto it = entries_.find(to_lower_ascii(word));
    return it == entries_.end() ? none : it->second;
}

SynonymLexicon SynonymLexicon::parse(std::string_view text, const std::string& source) {
    SynonymLexicon lex;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw ParseError(source + ":" + std::to_string(line_no) + ": expected word<TAB>synonyms");
        }
        std::vector<std::string> syns;
        std::stringstream ss{std::string(line.substr(tab + 1))};
        for (std::string s; std::getline(ss, s, ',');) syns.push_back(s);
        lex.add(line.substr(0, tab), syns);
    }
    return lex;
}

SynonymLexicon SynonymLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("lexicon not found: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

} // namespace moelab::augment
