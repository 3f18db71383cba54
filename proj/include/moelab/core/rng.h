// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace moelab {

/// Reproducible random source: std::mt19937_64 with hand-written draw
/// transforms, because the standard distributions are implementation-defined
/// and would break cross-platform reproducibility.
///
/// Components draw from named substreams (substream("init"),
/// substream("augment") ...) so adding draws in one consumer never shifts the
/// sequence seen by another.
class Rng {
public:
    static constexpr std::string_view kAlgorithm = "mt19937_64";

    explicit Rng(std::uint64_t seed);

    [[nodiscard]] std::uint64_t seed() const { return seed_; }

    [[nodiscard]] Rng substream(std::string_view name) const;
    [[nodiscard]] Rng substream(std::string_view name, std::uint64_t index) const;

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer on [0, n); n must be positive.
    std::size_t uniform_int(std::size_t n);
    /// Standard normal via Box-Muller (two uniforms per draw, no caching).
    double normal();
    bool bernoulli(double p);

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = uniform_int(i);
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// SplitMix64 finaliser; used for seed derivation.
std::uint64_t mix64(std::uint64_t x);
/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view text);

} // namespace moelab
