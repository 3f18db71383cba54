// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/moe/routing.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "moelab/core/error.h"
#include "moelab/core/ops.h"
#include "moelab/core/rng.h"

namespace moelab::moe {

namespace {

void require_probs(const Tensor& probs, const char* op) {
    if (probs.rank() != 2) {
        throw DimensionError(std::string(op) + ": router probabilities must be [tokens x experts], got " +
                             shape_str(probs.shape()));
    }
}

// Expert indices of one row ordered by descending probability, lowest index first on ties.
std::vector<std::size_t> ranked_experts(std::span<const double> row) {
    std::vector<std::size_t> order(row.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    return order;
}

std::size_t argmax(std::span<const double> row) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < row.size(); ++i) {
        if (row[i] > row[best]) best = i;
    }
    return best;
}

} // namespace

std::size_t RoutingDecision::dropped_count() const {
    return static_cast<std::size_t>(std::count(dropped.begin(), dropped.end(), true));
}

std::vector<std::size_t> RoutingDecision::dispatched_counts() const {
    std::vector<std::size_t> counts(n_experts, 0);
    for (std::size_t t = 0; t < tokens(); ++t) {
        if (dropped[t]) continue;
        for (std::size_t j = 0; j < k; ++j) ++counts[expert(t, j)];
    }
    return counts;
}

Tensor gate_probs(const Tensor& x, const Tensor& gate_weights) {
    return ops::softmax(ops::matmul(x, gate_weights), 1);
}

Tensor noisy_gate_probs(const Tensor& x, const Tensor& gate_weights, double noise_std, Rng& rng) {
    auto logits = ops::matmul(x, gate_weights);
    std::vector<double> noise(logits.size());
    for (auto& v : noise) v = noise_std * rng.normal();
    return ops::softmax(ops::add(logits, Tensor(logits.shape(), std::move(noise))), 1);
}

RoutingDecision top_k_select(const Tensor& probs, std::size_t k) {
    require_probs(probs, "top_k_select");
    const std::size_t T = probs.rows(), N = probs.cols();
    if (k < 1 || k > N) {
        throw ConfigError("top_k_select: k=" + std::to_string(k) + " must be in [1, " + std::to_string(N) + "]");
    }
    RoutingDecision d;
    d.n_experts = N;
    d.k = k;
    d.experts.reserve(T * k);
    d.assignment.resize(T);
    d.dropped.assign(T, false);
    const auto pv = probs.values();
    std::vector<std::size_t> rows;
    rows.reserve(T * k);
    for (std::size_t t = 0; t < T; ++t) {
        const auto order = ranked_experts(pv.subspan(t * N, N));
        d.assignment[t] = order[0];
        for (std::size_t j = 0; j < k; ++j) {
            d.experts.push_back(order[j]);
            rows.push_back(t);
        }
    }
    auto selected = ops::reshape(ops::gather_elements(probs, rows, d.experts), {T, k});
    d.weights = ops::scale_rows(selected, ops::reciprocal(ops::sum_rows(selected)));
    return d;
}

std::size_t expert_capacity(std::size_t tokens, std::size_t n_experts, double capacity_factor) {
    if (n_experts == 0) throw ConfigError("expert_capacity: no experts");
    if (!(capacity_factor > 0.0)) throw ConfigError("capacity_factor must be positive");
    const double even_share = capacity_factor * static_cast<double>(tokens) / static_cast<double>(n_experts);
    // Guard against representation error turning an exact integer into the next one up.
    return static_cast<std::size_t>(std::ceil(even_share * (1.0 - 1e-12)));
}

RoutingDecision switch_route(const Tensor& probs, double capacity_factor) {
    require_probs(probs, "switch_route");
    const std::size_t T = probs.rows(), N = probs.cols();
    const std::size_t capacity = expert_capacity(T, N, capacity_factor);
    RoutingDecision d;
    d.n_experts = N;
    d.k = 1;
    d.assignment.resize(T);
    d.dropped.assign(T, false);
    const auto pv = probs.values();
    std::vector<std::size_t> load(N, 0), rows(T);
    for (std::size_t t = 0; t < T; ++t) {
        const auto e = argmax(pv.subspan(t * N, N));
        d.assignment[t] = e;
        rows[t] = t;
        if (load[e] < capacity) {
            ++load[e];
        } else {
            d.dropped[t] = true;
        }
    }
    d.experts = d.assignment;
    d.weights = ops::reshape(ops::gather_elements(probs, rows, d.experts), {T, 1});
    return d;
}

Tensor dense_gate_matrix(const RoutingDecision& decision) {
    const std::size_t T = decision.tokens(), N = decision.n_experts, k = decision.k;
    std::vector<std::size_t> slot_rows, slot_cols, rows, cols;
    for (std::size_t t = 0; t < T; ++t) {
        if (decision.dropped[t]) continue;
        for (std::size_t j = 0; j < k; ++j) {
            slot_rows.push_back(t);
            slot_cols.push_back(j);
            rows.push_back(t);
            cols.push_back(decision.expert(t, j));
        }
    }
    if (rows.empty()) return Tensor::zeros({T, N});
    return ops::scatter_elements(ops::gather_elements(decision.weights, slot_rows, slot_cols), rows, cols, T, N);
}

Tensor moe_combine(const Tensor& expert_outputs, const RoutingDecision& decision) {
    if (expert_outputs.rank() != 3 || expert_outputs.shape()[0] != decision.n_experts ||
        expert_outputs.shape()[1] != decision.tokens()) {
        throw DimensionError("moe_combine: expert outputs " + shape_str(expert_outputs.shape()) + " do not match " +
                             std::to_string(decision.n_experts) + " experts x " + std::to_string(decision.tokens()) +
                             " tokens");
    }
    const std::size_t N = decision.n_experts, T = decision.tokens(), d = expert_outputs.shape()[2];
    const auto gates = dense_gate_matrix(decision);
    const auto flat = ops::reshape(expert_outputs, {N * T, d});
    Tensor out;
    for (std::size_t i = 0; i < N; ++i) {
        auto w = ops::reshape(ops::slice_cols(gates, i, i + 1), {T});
        auto term = ops::scale_rows(ops::slice_rows(flat, i * T, (i + 1) * T), w);
        out = out.defined() ? ops::add(out, term) : term;
    }
    return out;
}

Tensor dispatch_experts(const Tensor& x, const RoutingDecision& decision, const ExpertFn& expert, std::size_t d_out) {
    if (x.rank() != 2 || x.rows() != decision.tokens()) {
        throw DimensionError("dispatch_experts: input " + shape_str(x.shape()) + " vs " +
                             std::to_string(decision.tokens()) + " routed tokens");
    }
    const std::size_t T = decision.tokens();
    std::vector<std::vector<std::size_t>> routed(decision.n_experts);
    for (std::size_t t = 0; t < T; ++t) {
        if (decision.dropped[t]) continue;
        for (std::size_t j = 0; j < decision.k; ++j) routed[decision.expert(t, j)].push_back(t);
    }
    const auto gates = dense_gate_matrix(decision);
    Tensor out = Tensor::zeros({T, d_out});
    for (std::size_t i = 0; i < decision.n_experts; ++i) {
        const auto& idx = routed[i];
        if (idx.empty()) continue;
        auto y = expert(i, ops::gather_rows(x, idx));
        if (y.rank() != 2 || y.rows() != idx.size() || y.cols() != d_out) {
            throw DimensionError("dispatch_experts: expert " + std::to_string(i) + " returned " +
                                 shape_str(y.shape()));
        }
        const std::vector<std::size_t> col(idx.size(), i);
        out = ops::scatter_add_rows(out, ops::scale_rows(y, ops::gather_elements(gates, idx, col)), idx);
    }
    return out;
}

ExpertLoadStats load_stats(const Tensor& probs, const RoutingDecision& decision, DispatchBasis basis) {
    require_probs(probs, "load_stats");
    const std::size_t T = probs.rows(), N = probs.cols();
    if (T == 0 || decision.tokens() == 0) throw ContractError("load_stats: empty batch");
    if (decision.tokens() != T || decision.n_experts != N) {
        throw DimensionError("load_stats: decision covers " + std::to_string(decision.tokens()) + " tokens x " +
                             std::to_string(decision.n_experts) + " experts, probabilities are " +
                             shape_str(probs.shape()));
    }
    ExpertLoadStats s;
    s.n_experts = N;
    s.tokens = T;
    s.f.assign(N, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        if (basis == DispatchBasis::kPostCapacity && decision.dropped[t]) continue;
        s.f[decision.assignment[t]] += 1.0;
    }
    for (auto& v : s.f) v /= static_cast<double>(T);
    s.P = ops::mean_rows(probs);
    return s;
}

Tensor load_balance_loss(const ExpertLoadStats& stats, double alpha) {
    if (!(alpha >= 0.0)) throw ConfigError("load_balance_loss: alpha must be nonnegative");
    if (stats.f.size() != stats.n_experts || stats.P.size() != stats.n_experts) {
        throw DimensionError("load_balance_loss: f and P must both have " + std::to_string(stats.n_experts) +
                             " entries");
    }
    const auto f = Tensor::vector(stats.f);
    return ops::scale(ops::sum(ops::mul(f, stats.P)), alpha * static_cast<double>(stats.n_experts));
}

double load_entropy(std::span<const double> distribution) {
    double h = 0.0;
    for (double p : distribution) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

} // namespace moelab::moe
