// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "moelab/core/tensor.h"

namespace moelab {

/// Named trainable tensors, iterated in lexicographic name order.
class ParameterStore {
public:
    using Map = std::map<std::string, Tensor>;

    /// Registers t (marked as requiring gradients) under name; duplicate names are rejected.
    const Tensor& add(const std::string& name, Tensor t);

    [[nodiscard]] const Tensor& get(const std::string& name) const;
    [[nodiscard]] bool contains(const std::string& name) const { return params_.count(name) != 0; }
    [[nodiscard]] std::size_t size() const { return params_.size(); }
    [[nodiscard]] std::size_t scalar_count() const;

    [[nodiscard]] Map::const_iterator begin() const { return params_.begin(); }
    [[nodiscard]] Map::const_iterator end() const { return params_.end(); }

    /// Copies values from other for every shared name; shapes must agree.
    void assign_values(const std::map<std::string, Tensor>& other);

private:
    Map params_;
};

} // namespace moelab
