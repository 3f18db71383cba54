// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/moe/feed_forward.h"

#include <cmath>

#include "moelab/core/ops.h"
#include "moelab/core/rng.h"

namespace moelab::moe {

Tensor normal_init(Shape shape, double std, Rng& rng) {
    std::vector<double> v(shape_size(shape));
    for (auto& x : v) x = std * rng.normal();
    return Tensor(std::move(shape), std::move(v));
}

Tensor FeedForward::forward(const Tensor& x) const {
    auto h = ops::gelu(ops::add_bias(ops::matmul(x, w1), b1));
    return ops::add_bias(ops::matmul(h, w2), b2);
}

FeedForward FeedForward::create(ParameterStore& params, const std::string& prefix, std::size_t d_in,
                                std::size_t hidden, std::size_t d_out, Rng& rng) {
    FeedForward f;
    f.w1 = params.add(prefix + ".w1", normal_init({d_in, hidden}, 1.0 / std::sqrt(static_cast<double>(d_in)), rng));
    f.b1 = params.add(prefix + ".b1", Tensor::zeros({hidden}));
    f.w2 = params.add(prefix + ".w2", normal_init({hidden, d_out}, 1.0 / std::sqrt(static_cast<double>(hidden)), rng));
    f.b2 = params.add(prefix + ".b2", Tensor::zeros({d_out}));
    return f;
}

FeedForward FeedForward::bind(const ParameterStore& params, const std::string& prefix) {
    return {params.get(prefix + ".w1"), params.get(prefix + ".b1"), params.get(prefix + ".w2"),
            params.get(prefix + ".b2")};
}

} // namespace moelab::moe
