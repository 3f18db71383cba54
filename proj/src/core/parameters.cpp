// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/core/parameters.h"

#include <algorithm>

#include "moelab/core/error.h"

namespace moelab {

const Tensor& ParameterStore::add(const std::string& name, Tensor t) {
    if (params_.count(name)) throw ContractError("duplicate parameter name '" + name + "'");
    auto [it, _] = params_.emplace(name, t.clone(true));
    return it->second;
}

const Tensor& ParameterStore::get(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) throw IndexError("unknown parameter '" + name + "'");
    return it->second;
}

std::size_t ParameterStore::scalar_count() const {
    std::size_t n = 0;
    for (const auto& [_, t] : params_) n += t.size();
    return n;
}

void ParameterStore::assign_values(const std::map<std::string, Tensor>& other) {
    for (auto& [name, t] : params_) {
        auto it = other.find(name);
        if (it == other.end()) continue;
        if (it->second.shape() != t.shape()) {
            throw DimensionError("parameter '" + name + "' has shape " + shape_str(t.shape()) + ", source has " +
                                 shape_str(it->second.shape()));
        }
        auto dst = t.mutable_values();
        const auto src = it->second.values();
        std::copy(src.begin(), src.end(), dst.begin());
    }
}

} // namespace moelab
