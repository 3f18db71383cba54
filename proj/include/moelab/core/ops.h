// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Differentiable tensor operations. Every function validates shapes and throws
// DimensionError naming the offending shapes.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "moelab/core/tensor.h"

namespace moelab {

class Rng;

namespace ops {

// Linear algebra.
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

// Elementwise.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor reciprocal(const Tensor& a);
Tensor gelu(const Tensor& x);

/// a[m x n] + bias[n] broadcast over rows.
Tensor add_bias(const Tensor& a, const Tensor& bias);
/// Row i of x[m x n] multiplied by s[i].
Tensor scale_rows(const Tensor& x, const Tensor& s);

// Reductions.
Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);
/// x[m x n] -> [m], sums along each row.
Tensor sum_rows(const Tensor& x);
/// x[m x n] -> [n], means over rows.
Tensor mean_rows(const Tensor& x);

// Normalisation and losses.
Tensor softmax(const Tensor& x, std::size_t axis);
/// Normalises over the last axis. gain and bias have the last-axis length.
Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps = 1e-5);
/// -log softmax(logits)[target] for a 1-D logit vector.
Tensor cross_entropy(const Tensor& logits, std::size_t target);

// Indexing and layout.
Tensor reshape(const Tensor& x, Shape shape);
Tensor embed(std::span<const std::size_t> ids, const Tensor& table);
Tensor gather_rows(const Tensor& x, std::span<const std::size_t> rows);
/// base with src rows added at the given row positions (repeats accumulate).
Tensor scatter_add_rows(const Tensor& base, const Tensor& src, std::span<const std::size_t> rows);
Tensor slice_rows(const Tensor& x, std::size_t begin, std::size_t end);
Tensor slice_cols(const Tensor& x, std::size_t begin, std::size_t end);
Tensor concat_rows(std::span<const Tensor> parts);
Tensor concat_cols(std::span<const Tensor> parts);
/// [x[rows[i], cols[i]] for i] as a 1-D tensor.
Tensor gather_elements(const Tensor& x, std::span<const std::size_t> rows, std::span<const std::size_t> cols);
/// Zero matrix of the given shape with src[i] placed at (rows[i], cols[i]).
Tensor scatter_elements(const Tensor& src, std::span<const std::size_t> rows, std::span<const std::size_t> cols,
                        std::size_t n_rows, std::size_t n_cols);

/// Inverted dropout; identity when p == 0.
Tensor dropout(const Tensor& x, double p, Rng& rng);

} // namespace ops
} // namespace moelab
