// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moelab/data/qa_example.h"

namespace moelab::data {

struct NamedDataset {
    std::string name;
    Dataset examples;
};

struct MixResult {
    Dataset examples;
    std::vector<std::string> warnings;
};

/// Draws counts[i] examples without replacement from datasets[i] and concatenates
/// the samples in dataset order. Each source uses its own substream of `seed`, so
/// changing one count leaves the other samples unchanged. Counts above a dataset's
/// size are capped with a warning.
MixResult sample_and_mix(const std::vector<NamedDataset>& datasets, const std::vector<std::size_t>& counts,
                         std::uint64_t seed);

} // namespace moelab::data
