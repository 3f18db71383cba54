// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

#include "moelab/core/parameters.h"
#include "moelab/core/tensor.h"

namespace moelab {
class Rng;
}

namespace moelab::moe {

/// Linear -> GELU -> Linear. Used for dense FFN sublayers and for every expert.
struct FeedForward {
    Tensor w1, b1, w2, b2;

    [[nodiscard]] Tensor forward(const Tensor& x) const;
    [[nodiscard]] std::size_t d_in() const { return w1.rows(); }
    [[nodiscard]] std::size_t d_out() const { return w2.cols(); }

    /// Registers `<prefix>.w1/.b1/.w2/.b2`; weights ~ N(0, 1/fan_in), biases zero.
    static FeedForward create(ParameterStore& params, const std::string& prefix, std::size_t d_in,
                              std::size_t hidden, std::size_t d_out, Rng& rng);
    /// Binds to tensors previously registered under prefix.
    static FeedForward bind(const ParameterStore& params, const std::string& prefix);
};

/// Tensor of the given shape with N(0, std^2) entries.
Tensor normal_init(Shape shape, double std, Rng& rng);

} // namespace moelab::moe
