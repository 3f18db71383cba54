// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/core/tensor.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "moelab/core/error.h"

namespace moelab {

namespace {
thread_local Tape* g_active_tape = nullptr;

const detail::Node& checked(const std::shared_ptr<detail::Node>& node) {
    if (!node) throw ContractError("use of an undefined tensor");
    return *node;
}
} // namespace

std::size_t shape_size(const Shape& shape) {
    std::size_t n = 1;
    for (auto d : shape) n *= d;
    return n;
}

std::string shape_str(const Shape& shape) {
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) out << 'x';
        out << shape[i];
    }
    out << ']';
    return out.str();
}

Tensor::Tensor(Shape shape, std::vector<double> values, bool requires_grad) {
    for (auto d : shape) {
        if (d == 0) throw DimensionError("tensor dimensions must be positive, got " + shape_str(shape));
    }
    if (shape_size(shape) != values.size()) {
        throw DimensionError("shape " + shape_str(shape) + " needs " + std::to_string(shape_size(shape)) +
                             " values, got " + std::to_string(values.size()));
    }
    node_ = std::make_shared<detail::Node>();
    node_->shape = std::move(shape);
    node_->value = std::move(values);
    node_->requires_grad = requires_grad;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return filled(std::move(shape), 0.0, requires_grad); }

Tensor Tensor::filled(Shape shape, double value, bool requires_grad) {
    const auto n = shape_size(shape);
    return Tensor(std::move(shape), std::vector<double>(n, value), requires_grad);
}

Tensor Tensor::scalar(double value, bool requires_grad) { return Tensor({}, {value}, requires_grad); }

Tensor Tensor::vector(std::vector<double> values, bool requires_grad) {
    const auto n = values.size();
    return Tensor({n}, std::move(values), requires_grad);
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> values, bool requires_grad) {
    return Tensor({rows, cols}, std::move(values), requires_grad);
}

const Shape& Tensor::shape() const { return checked(node_).shape; }

std::size_t Tensor::dim(std::size_t axis) const {
    const auto& s = shape();
    if (axis >= s.size()) {
        throw IndexError("axis " + std::to_string(axis) + " out of range for shape " + shape_str(s));
    }
    return s[axis];
}

std::size_t Tensor::size() const { return checked(node_).value.size(); }

std::size_t Tensor::rows() const {
    if (rank() != 2) throw DimensionError("rows() needs a matrix, got " + shape_str(shape()));
    return shape()[0];
}

std::size_t Tensor::cols() const {
    if (rank() != 2) throw DimensionError("cols() needs a matrix, got " + shape_str(shape()));
    return shape()[1];
}

std::span<const double> Tensor::values() const { return checked(node_).value; }

std::span<double> Tensor::mutable_values() {
    checked(node_);
    return node_->value;
}

double Tensor::item() const {
    if (size() != 1) throw ContractError("item() on tensor of shape " + shape_str(shape()));
    return node_->value[0];
}

double Tensor::operator[](std::size_t i) const {
    const auto& v = checked(node_).value;
    if (i >= v.size()) throw IndexError("flat index " + std::to_string(i) + " out of range");
    return v[i];
}

double Tensor::at(std::size_t r, std::size_t c) const {
    const auto n = cols();
    if (r >= rows() || c >= n) {
        throw IndexError("index (" + std::to_string(r) + "," + std::to_string(c) + ") out of range for " +
                         shape_str(shape()));
    }
    return node_->value[r * n + c];
}

bool Tensor::requires_grad() const { return checked(node_).requires_grad; }

bool Tensor::has_grad() const { return checked(node_).grad.size() == node_->value.size(); }

std::span<const double> Tensor::grad() const {
    checked(node_);
    node_->ensure_grad();
    return node_->grad;
}

Tensor Tensor::detach() const { return clone(false); }

Tensor Tensor::clone(bool requires_grad) const {
    const auto& n = checked(node_);
    return Tensor(n.shape, n.value, requires_grad);
}

Tape::~Tape() {
    if (g_active_tape == this) g_active_tape = nullptr;
}

Tape::Scope::Scope(Tape& tape) : previous_(g_active_tape) { g_active_tape = &tape; }

Tape::Scope::~Scope() { g_active_tape = previous_; }

Tape* Tape::active() { return g_active_tape; }

void Tape::record(const std::shared_ptr<detail::Node>& node) {
    if (backward_done_) throw ContractError("tape must be reset before recording a new forward pass");
    node->recorded = true;
    nodes_.push_back(node);
    for (const auto& parent : node->parents) {
        if (parent->requires_grad && !parent->recorded && leaf_set_.insert(parent.get()).second) {
            leaves_.push_back(parent);
        }
    }
}

void Tape::backward(const Tensor& loss) {
    if (backward_done_) throw ContractError("backward called twice without reset");
    if (!loss.defined()) throw ContractError("backward on an undefined tensor");
    if (loss.size() != 1 || loss.rank() > 1) {
        throw ContractError("backward needs a scalar loss, got shape " + shape_str(loss.shape()));
    }
    const auto& root = loss.node();
    if (!root->recorded) throw ContractError("loss was not recorded on this tape");
    for (const auto& n : nodes_) n->grad.assign(n->value.size(), 0.0);
    for (const auto& n : leaves_) n->ensure_grad();
    root->grad[0] = 1.0;
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
        auto& node = **it;
        if (!node.backward) continue;
        if (std::all_of(node.grad.begin(), node.grad.end(), [](double g) { return g == 0.0; })) continue;
        for (const auto& p : node.parents) {
            if (p->requires_grad) p->ensure_grad();
        }
        node.backward(node);
    }
    backward_done_ = true;
}

void Tape::reset() {
    for (const auto& n : nodes_) {
        n->backward = nullptr;
        n->parents.clear();
    }
    nodes_.clear();
    for (const auto& leaf : leaves_) std::fill(leaf->grad.begin(), leaf->grad.end(), 0.0);
    leaves_.clear();
    leaf_set_.clear();
    backward_done_ = false;
}

} // namespace moelab
