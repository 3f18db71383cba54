// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace moelab::data {

/// A gold answer. `start` is a byte offset into the UTF-8 context.
struct Answer {
    std::string text;
    std::size_t start = 0;

    bool operator==(const Answer&) const = default;
};

struct QAExample {
    std::string id;
    std::string title;
    std::string context;
    std::string question;
    std::vector<Answer> answers;  // empty iff !answerable
    bool answerable = true;

    bool operator==(const QAExample&) const = default;
};

using Dataset = std::vector<QAExample>;

/// True when context[start, start + text.size()) == text.
bool span_matches(std::string_view context, const Answer& answer);

/// Human-readable problems with the example's answers; empty when it is well formed.
std::vector<std::string> validate_example(const QAExample& example);

/// Byte offset of the given code point index in a UTF-8 string (string size if past the end).
std::size_t codepoint_to_byte(std::string_view text, std::size_t codepoint);
/// Number of code points that start before the byte offset.
std::size_t byte_to_codepoint(std::string_view text, std::size_t byte);

} // namespace moelab::data
