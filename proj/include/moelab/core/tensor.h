// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense float64 tensors with reverse-mode gradient recording.
//
// A Tensor is a cheap shared handle onto a node holding shape, row-major
// values and (after backward) a gradient buffer of the same size. Operations
// in ops.h record their result on the thread's active Tape when at least one
// input requires a gradient; without an active tape they only compute values.

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace moelab {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_str(const Shape& shape);

namespace detail {

struct Node {
    Shape shape;
    std::vector<double> value;
    std::vector<double> grad;  // empty until a backward pass touches the node
    bool requires_grad = false;
    bool recorded = false;     // produced by an operation on a tape
    std::vector<std::shared_ptr<Node>> parents;
    // Propagates this node's grad into its parents' grads.
    std::function<void(Node&)> backward;

    void ensure_grad() {
        if (grad.size() != value.size()) grad.assign(value.size(), 0.0);
    }
};

} // namespace detail

class Tensor {
public:
    Tensor() = default;
    Tensor(Shape shape, std::vector<double> values, bool requires_grad = false);

    static Tensor zeros(Shape shape, bool requires_grad = false);
    static Tensor filled(Shape shape, double value, bool requires_grad = false);
    static Tensor scalar(double value, bool requires_grad = false);
    static Tensor vector(std::vector<double> values, bool requires_grad = false);
    static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                         bool requires_grad = false);

    [[nodiscard]] bool defined() const { return node_ != nullptr; }
    [[nodiscard]] const Shape& shape() const;
    [[nodiscard]] std::size_t rank() const { return shape().size(); }
    [[nodiscard]] std::size_t dim(std::size_t axis) const;
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] std::size_t rows() const;
    [[nodiscard]] std::size_t cols() const;

    [[nodiscard]] std::span<const double> values() const;
    // Direct write access; meant for parameter initialisation and optimiser updates.
    [[nodiscard]] std::span<double> mutable_values();
    [[nodiscard]] double item() const;
    [[nodiscard]] double operator[](std::size_t i) const;
    [[nodiscard]] double at(std::size_t r, std::size_t c) const;

    [[nodiscard]] bool requires_grad() const;
    [[nodiscard]] bool has_grad() const;
    /// Gradient from the last backward pass; zeros when the tensor was not reached.
    [[nodiscard]] std::span<const double> grad() const;

    /// Copy of the values with no gradient history.
    [[nodiscard]] Tensor detach() const;
    [[nodiscard]] Tensor clone(bool requires_grad) const;

    [[nodiscard]] bool same_node(const Tensor& other) const { return node_ == other.node_; }

    // Used by ops.cpp to build graph nodes.
    explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
    [[nodiscard]] const std::shared_ptr<detail::Node>& node() const { return node_; }

private:
    std::shared_ptr<detail::Node> node_;
};

/// Records operations for one forward/backward cycle.
///
/// Usage per step: install with Tape::Scope, run the forward pass, call
/// backward(loss) once, read parameter gradients, then reset(). The tape is
/// confined to the thread that installed it.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;
    ~Tape();

    class Scope {
    public:
        explicit Scope(Tape& tape);
        ~Scope();
        Scope(const Scope&) = delete;
        Scope& operator=(const Scope&) = delete;

    private:
        Tape* previous_;
    };

    static Tape* active();

    void record(const std::shared_ptr<detail::Node>& node);
    void backward(const Tensor& loss);
    /// Drops recorded nodes and zeroes the gradients of leaves seen since the last reset.
    void reset();

    [[nodiscard]] std::size_t size() const { return nodes_.size(); }
    [[nodiscard]] bool backward_done() const { return backward_done_; }

private:
    std::vector<std::shared_ptr<detail::Node>> nodes_;
    std::vector<std::shared_ptr<detail::Node>> leaves_;
    std::unordered_set<const detail::Node*> leaf_set_;
    bool backward_done_ = false;
};

} // namespace moelab
