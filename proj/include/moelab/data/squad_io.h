// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0
//
// SQuAD v2 JSON reading and writing. answer_start in the file counts Unicode
// code points; in memory it is a byte offset into the UTF-8 context.

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "moelab/data/qa_example.h"

namespace moelab::data {

struct LoadReport {
    Dataset examples;
    /// One entry per dropped example: "<id>: <reason>".
    std::vector<std::string> problems;
};

/// Examples whose spans do not validate are dropped and reported. Structural
/// errors throw ParseError naming `source`.
LoadReport parse_squad(const nlohmann::json& doc, const std::string& source);
LoadReport load_squad(const std::filesystem::path& path);

/// Consecutive examples sharing title and context become one paragraph.
nlohmann::json to_squad_json(const Dataset& examples, const std::string& version = "v2.0");
void save_squad(const std::filesystem::path& path, const Dataset& examples);

/// JSON object id -> answer text.
std::map<std::string, std::string> load_predictions(const std::filesystem::path& path);
void save_predictions(const std::filesystem::path& path, const std::map<std::string, std::string>& predictions);

/// Reads and parses a JSON file, throwing ParseError (with the path) or ConfigError (missing file).
nlohmann::json read_json_file(const std::filesystem::path& path);

} // namespace moelab::data
