// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Sparse expert routing: gate scoring, top-k selection, Switch top-1 dispatch
// with capacity, expert combination, load statistics and the load-balancing
// auxiliary loss  alpha * N * sum_i f_i * P_i.
//
// Ties are always broken toward the lowest expert index.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "moelab/core/tensor.h"
#include "moelab/moe/config.h"

namespace moelab {
class Rng;
}

namespace moelab::moe {

struct RoutingDecision {
    std::size_t n_experts = 0;
    std::size_t k = 0;
    // tokens x k expert indices, highest router probability first.
    std::vector<std::size_t> experts;
    // tokens x k combination weights. Differentiable back to the router.
    Tensor weights;
    // Argmax expert per token, before any capacity limit.
    std::vector<std::size_t> assignment;
    // Switch mode only; dropped tokens skip the experts and keep the residual.
    std::vector<bool> dropped;

    [[nodiscard]] std::size_t tokens() const { return assignment.size(); }
    [[nodiscard]] std::size_t expert(std::size_t token, std::size_t slot) const { return experts[token * k + slot]; }
    [[nodiscard]] double weight(std::size_t token, std::size_t slot) const { return weights[token * k + slot]; }
    [[nodiscard]] std::size_t dropped_count() const;
    /// (token, slot) pairs actually sent to each expert.
    [[nodiscard]] std::vector<std::size_t> dispatched_counts() const;
};

struct ExpertLoadStats {
    std::size_t n_experts = 0;
    std::size_t tokens = 0;
    std::vector<double> f;  // fraction of tokens dispatched to each expert (not differentiable)
    Tensor P;               // [N] mean router probability per expert
};

/// softmax(x @ gate_weights) over experts, x[T x d], gate_weights[d x N].
Tensor gate_probs(const Tensor& x, const Tensor& gate_weights);
/// As above with Gaussian noise of the given std added to the logits.
Tensor noisy_gate_probs(const Tensor& x, const Tensor& gate_weights, double noise_std, Rng& rng);

/// Keeps the k most probable experts per token and renormalises their weights to sum to one.
RoutingDecision top_k_select(const Tensor& probs, std::size_t k);

/// ceil(capacity_factor * tokens / n_experts).
std::size_t expert_capacity(std::size_t tokens, std::size_t n_experts, double capacity_factor);

/// Top-1 routing with per-expert capacity; overflow tokens (in token order) are dropped.
/// The routed weight is the router probability of the chosen expert.
RoutingDecision switch_route(const Tensor& probs, double capacity_factor);

/// [T x N] matrix with each token's combination weights at its selected experts, zero elsewhere
/// (and zero for dropped tokens).
Tensor dense_gate_matrix(const RoutingDecision& decision);

/// y[t] = sum over selected experts i of weight(t, i) * expert_outputs[i, t]; expert_outputs is [N x T x d].
Tensor moe_combine(const Tensor& expert_outputs, const RoutingDecision& decision);

using ExpertFn = std::function<Tensor(std::size_t expert, const Tensor& rows)>;

/// Evaluates each expert only on the tokens routed to it and combines the
/// results as moe_combine would. Rows of dropped tokens are zero.
Tensor dispatch_experts(const Tensor& x, const RoutingDecision& decision, const ExpertFn& expert, std::size_t d_out);

ExpertLoadStats load_stats(const Tensor& probs, const RoutingDecision& decision,
                           DispatchBasis basis = DispatchBasis::kPreCapacity);

/// alpha * N * dot(f, P); gradients reach the router through P only.
Tensor load_balance_loss(const ExpertLoadStats& stats, double alpha);

/// Shannon entropy (nats) of a distribution such as f.
double load_entropy(std::span<const double> distribution);

} // namespace moelab::moe
