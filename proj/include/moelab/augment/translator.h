// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace moelab::augment {

/// Machine translation backend. Returns nullopt on failure.
class Translator {
public:
    virtual ~Translator() = default;
    virtual std::optional<std::string> translate(std::string_view text, std::string_view source,
                                                 std::string_view target) = 0;
};

class IdentityTranslator final : public Translator {
public:
    std::optional<std::string> translate(std::string_view text, std::string_view, std::string_view) override {
        return std::string(text);
    }
};

/// Offline stand-in for a translation service, supporting en <-> {es, fr, de}.
///
/// en -> L: each word core is looked up in the language's forward table, else
/// its ASCII letters are shifted by the language's offset (case preserved);
/// then the word order is rotated left by one. L -> en undoes the rotation
/// and looks cores up in the back table, else shifts letters back. The back
/// tables hold a few paraphrases ("big" -> "grande" -> "large"), so a round
/// trip is close to but not always equal to the input.
class MockTranslator final : public Translator {
public:
    struct Language {
        int shift = 0;
        std::map<std::string, std::string, std::less<>> forward;
        std::map<std::string, std::string, std::less<>> back;
    };

    struct Failures {
        /// Texts containing any of these substrings fail.
        std::vector<std::string> substrings;
        /// Texts with more whitespace-separated words than this fail; 0 disables.
        std::size_t max_words = 0;
        bool always = false;
    };

    MockTranslator();
    explicit MockTranslator(Failures failures);

    std::optional<std::string> translate(std::string_view text, std::string_view source,
                                         std::string_view target) override;

    [[nodiscard]] const Language& language(std::string_view code) const;
    [[nodiscard]] std::vector<std::string> languages() const;
    [[nodiscard]] std::size_t calls() const { return calls_; }

private:
    std::map<std::string, Language, std::less<>> languages_;
    Failures failures_;
    std::size_t calls_ = 0;
};

} // namespace moelab::augment
