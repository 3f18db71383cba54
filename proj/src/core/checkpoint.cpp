// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/core/checkpoint.h"

#include <fstream>

#include "moelab/core/error.h"

namespace moelab {

nlohmann::json checkpoint_to_json(const ParameterStore& params, const nlohmann::json& meta) {
    nlohmann::json doc;
    doc["format"] = kCheckpointFormat;
    doc["version"] = kCheckpointVersion;
    doc["meta"] = meta;
    auto& out = doc["parameters"] = nlohmann::json::object();
    for (const auto& [name, t] : params) {
        out[name] = {{"shape", t.shape()},
                     {"values", std::vector<double>(t.values().begin(), t.values().end())}};
    }
    return doc;
}

Checkpoint checkpoint_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || doc.value("format", "") != kCheckpointFormat) {
        throw ParseError("not a moelab checkpoint");
    }
    const int version = doc.value("version", 0);
    if (version != kCheckpointVersion) {
        throw ParseError("unsupported checkpoint version " + std::to_string(version));
    }
    Checkpoint ck;
    ck.meta = doc.value("meta", nlohmann::json::object());
    try {
        for (const auto& [name, entry] : doc.at("parameters").items()) {
            auto shape = entry.at("shape").get<Shape>();
            auto values = entry.at("values").get<std::vector<double>>();
            ck.parameters.emplace(name, Tensor(std::move(shape), std::move(values)));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed checkpoint parameters: ") + e.what());
    } catch (const DimensionError& e) {
        throw ParseError(std::string("malformed checkpoint parameters: ") + e.what());
    }
    return ck;
}

void save_checkpoint(const std::filesystem::path& path, const ParameterStore& params, const nlohmann::json& meta) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write checkpoint " + path.string());
    out << checkpoint_to_json(params, meta).dump() << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("checkpoint not found: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return checkpoint_from_json(doc);
}

} // namespace moelab
