// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "moelab/core/parameters.h"

namespace moelab {

struct AdamConfig {
    double learning_rate = 3e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamMoments {
    std::vector<double> m;
    std::vector<double> v;
};

struct AdamState {
    std::size_t step = 0;
    std::map<std::string, AdamMoments> moments;
};

/// Bias-corrected Adam update of one buffer at 1-based step `step`.
void adam_update(std::span<double> param, std::span<const double> grad, AdamMoments& moments, std::size_t step,
                 const AdamConfig& config);

/// One Adam step over every parameter using the gradients left by the last
/// backward pass. Throws NumericError, before touching any parameter, if a
/// gradient is NaN or infinite.
void adam_step(ParameterStore& params, AdamState& state, const AdamConfig& config);

} // namespace moelab
