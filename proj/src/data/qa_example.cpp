// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/data/qa_example.h"

namespace moelab::data {

namespace {

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

} // namespace

bool span_matches(std::string_view context, const Answer& answer) {
    return answer.start <= context.size() && context.size() - answer.start >= answer.text.size() &&
           context.substr(answer.start, answer.text.size()) == answer.text;
}

std::vector<std::string> validate_example(const QAExample& example) {
    std::vector<std::string> problems;
    if (!example.answerable && !example.answers.empty()) {
        problems.push_back("unanswerable example carries " + std::to_string(example.answers.size()) + " answers");
    }
    if (example.answerable && example.answers.empty()) problems.push_back("answerable example has no answers");
    for (const auto& a : example.answers) {
        if (a.text.empty()) {
            problems.push_back("empty answer text at " + std::to_string(a.start));
        } else if (!span_matches(example.context, a)) {
            problems.push_back("answer '" + a.text + "' not found at byte " + std::to_string(a.start));
        }
    }
    return problems;
}

std::size_t codepoint_to_byte(std::string_view text, std::size_t codepoint) {
    std::size_t seen = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (is_continuation(static_cast<unsigned char>(text[i]))) continue;
        if (seen == codepoint) return i;
        ++seen;
    }
    return text.size();
}

std::size_t byte_to_codepoint(std::string_view text, std::size_t byte) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (!is_continuation(static_cast<unsigned char>(text[i]))) ++count;
    }
    return count;
}

} // namespace moelab::data
