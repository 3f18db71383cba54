// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/core/adam.h"

#include <cmath>
#include <sstream>

#include "moelab/core/error.h"

namespace moelab {

void adam_update(std::span<double> param, std::span<const double> grad, AdamMoments& moments, std::size_t step,
                 const AdamConfig& config) {
    if (param.size() != grad.size()) throw DimensionError("adam_update: parameter and gradient sizes differ");
    if (step == 0) throw ContractError("adam_update: steps are 1-based");
    if (moments.m.size() != param.size()) {
        moments.m.assign(param.size(), 0.0);
        moments.v.assign(param.size(), 0.0);
    }
    const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
    for (std::size_t i = 0; i < param.size(); ++i) {
        moments.m[i] = config.beta1 * moments.m[i] + (1.0 - config.beta1) * grad[i];
        moments.v[i] = config.beta2 * moments.v[i] + (1.0 - config.beta2) * grad[i] * grad[i];
        const double m_hat = moments.m[i] / c1;
        const double v_hat = moments.v[i] / c2;
        param[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.eps);
    }
}

void adam_step(ParameterStore& params, AdamState& state, const AdamConfig& config) {
    for (const auto& [name, t] : params) {
        const auto g = t.grad();
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!std::isfinite(g[i])) {
                std::ostringstream msg;
                msg << "adam_step: non-finite gradient " << g[i] << " in '" << name << "' at flat index " << i
                    << " (shape " << shape_str(t.shape()) << ", step " << state.step + 1 << ")";
                throw NumericError(msg.str());
            }
        }
    }
    ++state.step;
    for (const auto& [name, t] : params) {
        Tensor handle = t;
        adam_update(handle.mutable_values(), t.grad(), state.moments[name], state.step, config);
    }
}

} // namespace moelab
