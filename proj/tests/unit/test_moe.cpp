// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "gradcheck.h"
#include "moelab/core/error.h"
#include "moelab/core/ops.h"
#include "moelab/core/rng.h"
#include "moelab/moe/moe_head.h"
#include "moelab/moe/routing.h"
#include "moelab/moe/switch_ffn.h"

using namespace moelab;
using namespace moelab::moe;
using moelab::testing::random_tensor;

namespace {

// Row-wise softmax of x @ w with plain loops.
std::vector<double> softmax_matmul_oracle(const Tensor& x, const Tensor& w) {
    const std::size_t T = x.rows(), d = x.cols(), N = w.cols();
    std::vector<double> out(T * N);
    for (std::size_t t = 0; t < T; ++t) {
        std::vector<double> logits(N, 0.0);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t p = 0; p < d; ++p) logits[i] += x.at(t, p) * w.at(p, i);
        double z = 0.0;
        for (double l : logits) z += std::exp(l);
        for (std::size_t i = 0; i < N; ++i) out[t * N + i] = std::exp(logits[i]) / z;
    }
    return out;
}

Tensor probs_from(std::size_t T, std::size_t N, std::vector<double> v) { return Tensor::matrix(T, N, std::move(v)); }

} // namespace

TEST_CASE("gate_probs examples", "[moe][gate]") {
    Rng rng(1);
    auto x = random_tensor({5, 3}, rng, 1.0, false);
    auto single = gate_probs(x, random_tensor({3, 1}, rng, 1.0, false));
    for (double v : single.values()) CHECK(v == 1.0);

    auto uniform = gate_probs(x, Tensor::zeros({3, 4}));
    for (double v : uniform.values()) CHECK(v == 0.25);

    auto x4 = random_tensor({4, 5}, rng, 1.0, false);
    auto w = random_tensor({5, 3}, rng, 1.0, false);
    auto probs = gate_probs(x4, w);
    const auto oracle = softmax_matmul_oracle(x4, w);
    for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(std::abs(probs[i] - oracle[i]) < 1e-14);
}

TEST_CASE("top_k_select examples", "[moe][topk]") {
    auto p = probs_from(1, 3, {0.5, 0.3, 0.2});

    auto k1 = top_k_select(p, 1);
    CHECK(k1.expert(0, 0) == 0);
    CHECK(k1.weight(0, 0) == 1.0);

    auto k3 = top_k_select(p, 3);
    CHECK(k3.expert(0, 0) == 0);
    CHECK(k3.expert(0, 1) == 1);
    CHECK(k3.expert(0, 2) == 2);
    CHECK(k3.weight(0, 0) == Catch::Approx(0.5).epsilon(1e-15));
    CHECK(k3.weight(0, 1) == Catch::Approx(0.3).epsilon(1e-15));
    CHECK(k3.weight(0, 2) == Catch::Approx(0.2).epsilon(1e-15));

    auto k2 = top_k_select(p, 2);
    CHECK(std::set<std::size_t>{k2.expert(0, 0), k2.expert(0, 1)} == std::set<std::size_t>{0, 1});
    CHECK(std::abs(k2.weight(0, 0) - 0.625) < 1e-15);
    CHECK(std::abs(k2.weight(0, 1) - 0.375) < 1e-15);

    CHECK_THROWS_AS(top_k_select(p, 4), ConfigError);
    CHECK_THROWS_AS(top_k_select(p, 0), ConfigError);
}

TEST_CASE("top_k_select ties go to the lowest index", "[moe][topk]") {
    auto d = top_k_select(probs_from(1, 4, {0.25, 0.25, 0.25, 0.25}), 2);
    CHECK(d.expert(0, 0) == 0);
    CHECK(d.expert(0, 1) == 1);
}

TEST_CASE("top_k_select invariants on random routers", "[moe][topk][property]") {
    Rng rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t T = 1 + rng.uniform_int(6), N = 1 + rng.uniform_int(8), k = 1 + rng.uniform_int(N);
        auto logits = random_tensor({T, N}, rng, 2.0, false);
        auto d = top_k_select(ops::softmax(logits, 1), k);
        const double c = 0.1 + 5.0 * rng.uniform();
        auto scaled = top_k_select(ops::softmax(ops::scale(logits, c), 1), k);
        CHECK(scaled.experts == d.experts);
        for (std::size_t t = 0; t < T; ++t) {
            std::set<std::size_t> seen;
            double total = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                CHECK(d.expert(t, j) < N);
                seen.insert(d.expert(t, j));
                CHECK(d.weight(t, j) > 0.0);
                total += d.weight(t, j);
            }
            CHECK(seen.size() == k);
            CHECK(std::abs(total - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("moe_combine examples", "[moe][combine]") {
    Rng rng(3);
    SECTION("single expert is the identity mixture") {
        auto e = random_tensor({1, 4, 3}, rng, 1.0, false);
        auto d = top_k_select(Tensor::filled({4, 1}, 1.0), 1);
        auto y = moe_combine(e, d);
        for (std::size_t i = 0; i < y.size(); ++i) CHECK(y[i] == e[i]);
    }
    SECTION("degenerate gate returns expert 0") {
        auto e = random_tensor({2, 1, 3}, rng, 1.0, false);
        auto d = top_k_select(probs_from(1, 2, {1.0, 0.0}), 2);
        CHECK(d.weight(0, 0) == 1.0);
        CHECK(d.weight(0, 1) == 0.0);
        auto y = moe_combine(e, d);
        for (std::size_t j = 0; j < 3; ++j) CHECK(y[j] == e[j]);
    }
    SECTION("k = N equals the dense mixture") {
        const std::size_t N = 4, T = 5, D = 3;
        auto e = random_tensor({N, T, D}, rng, 1.0, false);
        auto probs = ops::softmax(random_tensor({T, N}, rng, 1.0, false), 1);
        auto y = moe_combine(e, top_k_select(probs, N));
        for (std::size_t t = 0; t < T; ++t) {
            for (std::size_t j = 0; j < D; ++j) {
                double ref = 0.0;
                for (std::size_t i = 0; i < N; ++i) ref += probs.at(t, i) * e[(i * T + t) * D + j];
                CHECK(std::abs(y.at(t, j) - ref) <= 1e-12);
            }
        }
    }
    SECTION("shape mismatch") {
        auto e = random_tensor({3, 4, 2}, rng, 1.0, false);
        auto d = top_k_select(Tensor::filled({4, 2}, 0.5), 1);
        CHECK_THROWS_AS(moe_combine(e, d), DimensionError);
    }
}

TEST_CASE("switch_route capacity behaviour", "[moe][switch]") {
    SECTION("balanced batch has no drops") {
        auto p = probs_from(4, 4, {0.7, 0.1, 0.1, 0.1,  //
                                   0.1, 0.7, 0.1, 0.1,  //
                                   0.1, 0.1, 0.7, 0.1,  //
                                   0.1, 0.1, 0.1, 0.7});
        auto d = switch_route(p, 1.0);
        CHECK(d.dropped_count() == 0);
        for (std::size_t t = 0; t < 4; ++t) {
            CHECK(d.expert(t, 0) == t);
            CHECK(d.weight(t, 0) == 0.7);
        }
    }
    SECTION("third token over capacity is dropped") {
        CHECK(expert_capacity(8, 4, 1.0) == 2);
        std::vector<double> v;
        const std::vector<std::size_t> target{0, 1, 0, 2, 3, 0, 1, 2};
        for (auto e : target) {
            for (std::size_t i = 0; i < 4; ++i) v.push_back(i == e ? 0.55 : 0.15);
        }
        auto d = switch_route(probs_from(8, 4, v), 1.0);
        CHECK(d.dropped_count() == 1);
        CHECK(d.dropped[5]);
        CHECK(d.assignment[5] == 0);
        CHECK(d.dispatched_counts() == std::vector<std::size_t>{2, 2, 2, 1});
    }
    SECTION("single expert takes everything") {
        auto d = switch_route(Tensor::filled({6, 1}, 1.0), 1.0);
        CHECK(expert_capacity(6, 1, 1.0) == 6);
        CHECK(d.dropped_count() == 0);
        for (std::size_t t = 0; t < 6; ++t) CHECK(d.expert(t, 0) == 0);
    }
    SECTION("capacity arithmetic") {
        CHECK(expert_capacity(8, 4, 1.25) == 3);
        CHECK(expert_capacity(10, 1, 1.1) == 11);
        CHECK(expert_capacity(3, 4, 1.0) == 1);
    }
}

TEST_CASE("switch_route drop accounting holds on random batches", "[moe][switch][property]") {
    Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t T = 1 + rng.uniform_int(40), N = 1 + rng.uniform_int(8);
        const double cf = 0.25 + 2.0 * rng.uniform();
        auto probs = ops::softmax(random_tensor({T, N}, rng, 3.0, false), 1);
        auto d = switch_route(probs, cf);
        const auto counts = d.dispatched_counts();
        std::size_t dispatched = 0;
        for (auto c : counts) {
            CHECK(c <= expert_capacity(T, N, cf));
            dispatched += c;
        }
        CHECK(dispatched + d.dropped_count() == T);
    }
}

TEST_CASE("load_stats examples", "[moe][stats]") {
    SECTION("collapsed router") {
        auto p = probs_from(3, 3, {1, 0, 0, 1, 0, 0, 1, 0, 0});
        auto s = load_stats(p, top_k_select(p, 1));
        CHECK(s.f == std::vector<double>{1, 0, 0});
        CHECK(s.P[0] == 1.0);
        CHECK(s.P[1] == 0.0);
    }
    SECTION("uniform probabilities tie to expert 0") {
        auto p = Tensor::filled({8, 4}, 0.25);
        auto s = load_stats(p, switch_route(p, 1.0));
        CHECK(s.f == std::vector<double>{1, 0, 0, 0});
        for (std::size_t i = 0; i < 4; ++i) CHECK(s.P[i] == 0.25);
    }
    SECTION("random batches match a counting loop") {
        Rng rng(5);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t T = 1 + rng.uniform_int(30), N = 1 + rng.uniform_int(6);
            auto probs = ops::softmax(random_tensor({T, N}, rng, 2.0, false), 1);
            auto d = switch_route(probs, 1.0);
            auto pre = load_stats(probs, d, DispatchBasis::kPreCapacity);
            auto post = load_stats(probs, d, DispatchBasis::kPostCapacity);
            std::vector<double> count(N, 0.0), kept(N, 0.0), mass(N, 0.0);
            for (std::size_t t = 0; t < T; ++t) {
                std::size_t best = 0;
                for (std::size_t i = 0; i < N; ++i) {
                    mass[i] += probs.at(t, i);
                    if (probs.at(t, i) > probs.at(t, best)) best = i;
                }
                count[best] += 1.0;
                if (!d.dropped[t]) kept[best] += 1.0;
            }
            double fsum = 0.0, psum = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                CHECK(pre.f[i] == count[i] / static_cast<double>(T));
                CHECK(post.f[i] == kept[i] / static_cast<double>(T));
                CHECK(std::abs(pre.P[i] - mass[i] / static_cast<double>(T)) < 1e-14);
                CHECK(pre.P[i] >= 0.0);
                CHECK(pre.P[i] <= 1.0);
                fsum += pre.f[i];
                psum += pre.P[i];
            }
            CHECK(std::abs(fsum - 1.0) <= 1e-12);
            CHECK(std::abs(psum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("load_balance_loss anchors and hand value", "[moe][loss]") {
    auto stats_of = [](std::vector<double> f, std::vector<double> P) {
        ExpertLoadStats s;
        s.n_experts = f.size();
        s.tokens = 1;
        s.f = std::move(f);
        s.P = Tensor::vector(std::move(P));
        return s;
    };
    for (std::size_t N : {1u, 2u, 4u, 8u, 16u}) {
        std::vector<double> u(N, 1.0 / static_cast<double>(N));
        CHECK(std::abs(load_balance_loss(stats_of(u, u), 0.01).item() - 0.01) <= 1e-12);
    }
    CHECK(std::abs(load_balance_loss(stats_of({1, 0}, {1, 0}), 0.01).item() - 0.02) <= 1e-12);
    auto hand = load_balance_loss(stats_of({0.5, 0.25, 0.125, 0.125}, {0.4, 0.3, 0.2, 0.1}), 0.1).item();
    CHECK(std::abs(hand - 0.125) <= 1e-12);
    CHECK_THROWS_AS(load_balance_loss(stats_of({1}, {1}), -0.1), ConfigError);

    Rng rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t T = 1 + rng.uniform_int(20), N = 1 + rng.uniform_int(8);
        auto probs = ops::softmax(random_tensor({T, N}, rng, 2.0, false), 1);
        auto s = load_stats(probs, switch_route(probs, 1.25));
        CHECK(load_balance_loss(s, 0.5).item() >= 0.0);
    }
}

TEST_CASE("load_entropy", "[moe][stats]") {
    const std::vector<double> uniform{0.25, 0.25, 0.25, 0.25};
    CHECK(load_entropy(uniform) == Catch::Approx(std::log(4.0)));
    const std::vector<double> onehot{0, 1, 0};
    CHECK(load_entropy(onehot) == 0.0);
}

TEST_CASE("moe head with k = N equals the dense mixture", "[moe][head]") {
    Rng rng(7);
    for (std::size_t N : {1u, 2u, 3u, 5u}) {
        MoEConfig cfg;
        cfg.n_experts = N;
        cfg.k = N;
        cfg.expert_hidden = 6;
        ParameterStore params;
        auto head = MoEHeadParams::create(params, "head", 4, 3, cfg, rng);
        // wider gate init than the default so the mixture is far from uniform
        auto gv = Tensor(head.gate).mutable_values();
        for (auto& g : gv) g = rng.normal();
        auto x = random_tensor({7, 4}, rng, 1.0, false);
        auto out = moe_head_forward(x, cfg, head.experts, head.gate);

        const auto probs = softmax_matmul_oracle(x, head.gate);
        for (std::size_t t = 0; t < 7; ++t) {
            auto xt = ops::slice_rows(x, t, t + 1);
            std::vector<double> ref(3, 0.0);
            for (std::size_t i = 0; i < N; ++i) {
                auto e = head.experts[i].forward(xt);
                for (std::size_t j = 0; j < 3; ++j) ref[j] += probs[t * N + i] * e[j];
            }
            for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(out.y.at(t, j) - ref[j]) <= 1e-10);
        }
    }
}

TEST_CASE("moe head evaluates only selected experts", "[moe][head]") {
    Rng rng(8);
    MoEConfig cfg;
    cfg.n_experts = 4;
    cfg.k = 1;
    cfg.expert_hidden = 5;
    ParameterStore params;
    auto head = MoEHeadParams::create(params, "head", 3, 3, cfg, rng);
    auto x = random_tensor({6, 3}, rng, 1.0, false);
    std::vector<std::size_t> calls(4, 0);
    auto probs = gate_probs(x, head.gate);
    auto d = top_k_select(probs, 1);
    dispatch_experts(
        x, d,
        [&](std::size_t i, const Tensor& rows) {
            calls[i] += rows.rows();
            return head.experts[i].forward(rows);
        },
        3);
    std::size_t total = 0;
    for (auto c : calls) total += c;
    CHECK(total == 6);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(calls[i] == static_cast<std::size_t>(std::count(d.assignment.begin(), d.assignment.end(), i)));
    }
}

TEST_CASE("router gradient of the auxiliary loss grows with alpha", "[moe][loss][property]") {
    Rng rng(9);
    MoEConfig cfg;
    cfg.n_experts = 4;
    cfg.expert_hidden = 5;
    ParameterStore params;
    auto sw = SwitchFfnParams::create(params, "sw", 6, cfg, rng);
    auto x = random_tensor({12, 6}, rng, 1.0, false);
    auto grad_norm = [&](double alpha) {
        cfg.alpha = alpha;
        Tape tape;
        Tape::Scope scope(tape);
        tape.backward(switch_ffn_forward(x, cfg, sw.experts, sw.router).aux_loss);
        double n = 0.0;
        for (double g : sw.router.grad()) n += g * g;
        tape.reset();
        return std::sqrt(n);
    };
    double previous = grad_norm(0.0);
    CHECK(previous == 0.0);
    for (double alpha : {0.01, 0.05, 0.1, 1.0, 2.0}) {
        const double n = grad_norm(alpha);
        CHECK(n > previous);
        previous = n;
    }
}

TEST_CASE("gate receives gradient through renormalised top-k weights", "[moe][head]") {
    Rng rng(10);
    MoEConfig cfg;
    cfg.n_experts = 4;
    cfg.k = 2;
    cfg.alpha = 0.0;
    cfg.expert_hidden = 5;
    ParameterStore params;
    auto head = MoEHeadParams::create(params, "head", 3, 2, cfg, rng);
    auto x = random_tensor({5, 3}, rng, 1.0, false);
    Tape tape;
    Tape::Scope scope(tape);
    tape.backward(ops::sum(ops::mul(moe_head_forward(x, cfg, head.experts, head.gate).y,
                                    random_tensor({5, 2}, rng, 1.0, false))));
    double n = 0.0;
    for (double g : head.gate.grad()) n += std::abs(g);
    CHECK(n > 0.0);
}

TEST_CASE("config validation", "[moe][config]") {
    MoEConfig cfg;
    cfg.n_experts = 2;
    cfg.k = 3;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.k = 2;
    cfg.alpha = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.alpha = 0.0;
    cfg.capacity_factor = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.capacity_factor = 1.0;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("gradients through moe head and switch ffn match finite differences", "[moe][gradcheck]") {
    Rng rng(11);
    auto x = random_tensor({6, 4}, rng);
    auto target = random_tensor({6, 4}, rng, 1.0, false);
    auto collect = [&](const ParameterStore& params) {
        std::vector<testing::NamedTensor> in{{"x", x}};
        for (const auto& [name, t] : params) in.push_back({name, t});
        return in;
    };
    for (std::size_t k : {1u, 2u, 3u}) {
        MoEConfig cfg;
        cfg.n_experts = 3;
        cfg.k = k;
        cfg.expert_hidden = 5;
        cfg.alpha = 0.1;
        ParameterStore params;
        auto head = MoEHeadParams::create(params, "head", 4, 4, cfg, rng);
        for (auto& g : Tensor(head.gate).mutable_values()) g = rng.normal();
        auto loss = [&] {
            auto out = moe_head_forward(x, cfg, head.experts, head.gate);
            return ops::add(ops::sum(ops::mul(out.y, target)), out.aux_loss);
        };
        auto report = testing::check_gradients(collect(params), loss, 40, rng);
        INFO("k=" << k);
        CHECK(report.max_rel_error < 1e-4);
    }
    MoEConfig cfg;
    cfg.n_experts = 2;
    cfg.expert_hidden = 5;
    cfg.alpha = 0.1;
    ParameterStore params;
    auto sw = SwitchFfnParams::create(params, "sw", 4, cfg, rng);
    for (auto& g : Tensor(sw.router).mutable_values()) g = rng.normal();
    auto loss = [&] {
        auto out = switch_ffn_forward(x, cfg, sw.experts, sw.router);
        return ops::add(ops::sum(ops::mul(out.y, target)), out.aux_loss);
    };
    CHECK(testing::check_gradients(collect(params), loss, 40, rng).max_rel_error < 1e-4);
}
