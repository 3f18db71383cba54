// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Weight checkpoints, format version 1:
//
//   {
//     "format": "moelab-checkpoint",
//     "version": 1,
//     "meta": { ... caller-defined ... },
//     "parameters": {
//       "<path>": { "shape": [d0, d1, ...], "values": [row-major float64 ...] },
//       ...
//     }
//   }
//
// Values are written with round-trip precision, so save/load is bit exact.

#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "json.hpp"
#include "moelab/core/parameters.h"

namespace moelab {

inline constexpr const char* kCheckpointFormat = "moelab-checkpoint";
inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
    nlohmann::json meta = nlohmann::json::object();
    std::map<std::string, Tensor> parameters;
};

nlohmann::json checkpoint_to_json(const ParameterStore& params, const nlohmann::json& meta);
Checkpoint checkpoint_from_json(const nlohmann::json& doc);

void save_checkpoint(const std::filesystem::path& path, const ParameterStore& params, const nlohmann::json& meta);
Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace moelab
