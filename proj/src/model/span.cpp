// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/model/span.h"

#include "moelab/core/error.h"
#include "moelab/core/ops.h"

namespace moelab::model {

SpanLogits span_head(const Tensor& hidden, const Tensor& weight, const Tensor& bias) {
    const auto logits = ops::add_bias(ops::matmul(hidden, weight), bias);
    const std::size_t T = hidden.rows();
    return {ops::reshape(ops::slice_cols(logits, 0, 1), {T}), ops::reshape(ops::slice_cols(logits, 1, 2), {T})};
}

SpanPrediction predict_span(std::span<const double> start_logits, std::span<const double> end_logits,
                            std::size_t max_answer_len, std::size_t valid_begin, std::size_t valid_end) {
    const std::size_t T = start_logits.size();
    if (T == 0) throw ContractError("predict_span: empty sequence");
    if (end_logits.size() != T) {
        throw DimensionError("predict_span: " + std::to_string(T) + " start logits but " +
                             std::to_string(end_logits.size()) + " end logits");
    }
    if (valid_end == 0 || valid_end > T) valid_end = T;
    valid_begin = std::max<std::size_t>(valid_begin, 1);

    SpanPrediction best;
    bool found = false;
    for (std::size_t s = valid_begin; s < valid_end; ++s) {
        const std::size_t last = std::min(valid_end - 1, s + max_answer_len);
        for (std::size_t e = s; e <= last; ++e) {
            const double score = start_logits[s] + end_logits[e];
            if (!found || score > best.score) {
                best = {s, e, score, false};
                found = true;
            }
        }
    }
    const double sentinel = start_logits[0] + end_logits[0];
    if (!found || sentinel > best.score) return {0, 0, sentinel, true};
    return best;
}

QaLoss qa_loss(const SpanLogits& logits, std::size_t gold_start, std::size_t gold_end,
               std::span<const Tensor> aux_losses) {
    QaLoss out;
    out.ce = ops::add(ops::cross_entropy(logits.start, gold_start), ops::cross_entropy(logits.end, gold_end));
    for (const auto& a : aux_losses) out.aux = out.aux.defined() ? ops::add(out.aux, a) : a;
    if (!out.aux.defined()) out.aux = Tensor::scalar(0.0);
    out.total = ops::add(out.ce, out.aux);
    return out;
}

} // namespace moelab::model
