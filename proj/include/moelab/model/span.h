// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "moelab/core/tensor.h"

namespace moelab::model {

struct SpanPrediction {
    std::size_t start = 0;
    std::size_t end = 0;
    double score = 0.0;
    bool no_answer = true;
};

struct SpanLogits {
    Tensor start;  // [T]
    Tensor end;    // [T]
};

/// Linear projection of hidden[T x d] with weight[d x 2] and bias[2].
SpanLogits span_head(const Tensor& hidden, const Tensor& weight, const Tensor& bias);

/// Highest start[s] + end[e] over s <= e <= s + max_answer_len with s, e in
/// [valid_begin, valid_end). Position 0 is the no-answer sentinel: the
/// prediction is no-answer when start[0] + end[0] is strictly larger than every
/// valid pair, or when there is no valid pair. Ties go to the smallest (s, e).
/// valid_end = 0 means the whole sequence after the sentinel.
SpanPrediction predict_span(std::span<const double> start_logits, std::span<const double> end_logits,
                            std::size_t max_answer_len, std::size_t valid_begin = 1, std::size_t valid_end = 0);

struct QaLoss {
    Tensor total;
    Tensor ce;   // start + end cross entropy
    Tensor aux;  // sum of auxiliary losses (zero scalar when there are none)
};

/// cross_entropy(start, gold_start) + cross_entropy(end, gold_end) + sum(aux_losses).
/// Unanswerable examples use gold position 0.
QaLoss qa_loss(const SpanLogits& logits, std::size_t gold_start, std::size_t gold_end,
               std::span<const Tensor> aux_losses);

} // namespace moelab::model
