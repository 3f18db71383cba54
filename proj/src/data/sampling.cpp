// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/data/sampling.h"

#include <numeric>

#include "moelab/core/error.h"
#include "moelab/core/rng.h"

namespace moelab::data {

MixResult sample_and_mix(const std::vector<NamedDataset>& datasets, const std::vector<std::size_t>& counts,
                         std::uint64_t seed) {
    if (datasets.size() != counts.size()) {
        throw ConfigError("sample_and_mix: " + std::to_string(datasets.size()) + " datasets but " +
                          std::to_string(counts.size()) + " counts");
    }
    MixResult out;
    const Rng root(seed);
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        const auto& src = datasets[d].examples;
        std::size_t want = counts[d];
        if (want > src.size()) {
            out.warnings.push_back("dataset '" + datasets[d].name + "' has " + std::to_string(src.size()) +
                                   " examples, fewer than the requested " + std::to_string(want) + "; using all");
            want = src.size();
        }
        std::vector<std::size_t> order(src.size());
        std::iota(order.begin(), order.end(), 0);
        Rng rng = root.substream("sample", d);
        // Partial Fisher-Yates: the first `want` slots are a uniform sample.
        for (std::size_t i = 0; i < want; ++i) {
            const auto j = i + rng.uniform_int(order.size() - i);
            std::swap(order[i], order[j]);
        }
        for (std::size_t i = 0; i < want; ++i) out.examples.push_back(src[order[i]]);
    }
    return out;
}

} // namespace moelab::data
