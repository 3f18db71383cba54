// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

#include "moelab/data/qa_example.h"

namespace moelab::data {

struct SyntheticOptions {
    std::size_t count = 64;
    std::uint64_t seed = 0;
    /// Filler sentences added around the answer sentence, drawn from [min, max].
    std::size_t min_filler = 1;
    std::size_t max_filler = 3;
    /// Share of examples whose question asks about a noun absent from the context.
    double unanswerable_fraction = 0.0;
    /// Colour questions only (single-token answers); otherwise places and
    /// multi-word answers are mixed in as well.
    bool colours_only = true;
    /// Number of distinct colour answers in use (1 to 6).
    std::size_t palette = 2;
};

/// Small templated reading-comprehension corpus with ids "syn-<n>".
Dataset generate_synthetic(const SyntheticOptions& options);

} // namespace moelab::data
