// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/model/qa_model.h"

#include <cmath>

#include "moelab/core/error.h"
#include "moelab/core/ops.h"
#include "moelab/core/rng.h"

namespace moelab::model {

namespace {

std::string layer_prefix(std::size_t l) { return "layers." + std::to_string(l); }

Tensor maybe_dropout(const Tensor& x, double p, Rng* rng) {
    return (rng != nullptr && p > 0.0) ? ops::dropout(x, p, *rng) : x;
}

// Splits stacked rows back into per-sequence blocks.
std::vector<Tensor> split_rows(const Tensor& stacked, std::span<const std::size_t> lengths) {
    std::vector<Tensor> out;
    std::size_t offset = 0;
    for (auto n : lengths) {
        out.push_back(ops::slice_rows(stacked, offset, offset + n));
        offset += n;
    }
    return out;
}

RouteRecord make_record(std::size_t layer, bool head, const moe::ExpertLoadStats& stats,
                        const moe::RoutingDecision& decision, const Tensor& aux) {
    RouteRecord r;
    r.layer = layer;
    r.moe_head = head;
    r.tokens = stats.tokens;
    r.f = stats.f;
    r.P.assign(stats.P.values().begin(), stats.P.values().end());
    r.aux_loss = aux.item();
    r.dropped_count = decision.dropped_count();
    return r;
}

} // namespace

Tensor sinusoidal_positions(std::size_t length, std::size_t d_model) {
    std::vector<double> v(length * d_model);
    for (std::size_t pos = 0; pos < length; ++pos) {
        for (std::size_t j = 0; j < d_model; ++j) {
            const double rate = std::pow(10000.0, static_cast<double>(j - j % 2) / static_cast<double>(d_model));
            const double angle = static_cast<double>(pos) / rate;
            v[pos * d_model + j] = (j % 2 == 0) ? std::sin(angle) : std::cos(angle);
        }
    }
    return Tensor({length, d_model}, std::move(v));
}

Tensor self_attention(const Tensor& x, const AttentionParams& p, std::size_t n_heads) {
    const std::size_t d = x.cols();
    if (d % n_heads != 0) throw ConfigError("attention: d_model not divisible by n_heads");
    const std::size_t dh = d / n_heads;
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
    const auto q = ops::add_bias(ops::matmul(x, p.wq), p.bq);
    const auto k = ops::add_bias(ops::matmul(x, p.wk), p.bk);
    const auto v = ops::add_bias(ops::matmul(x, p.wv), p.bv);
    std::vector<Tensor> heads;
    heads.reserve(n_heads);
    for (std::size_t h = 0; h < n_heads; ++h) {
        const auto qh = ops::slice_cols(q, h * dh, (h + 1) * dh);
        const auto kh = ops::slice_cols(k, h * dh, (h + 1) * dh);
        const auto vh = ops::slice_cols(v, h * dh, (h + 1) * dh);
        const auto weights = ops::softmax(ops::scale(ops::matmul(qh, ops::transpose(kh)), inv_sqrt), 1);
        heads.push_back(ops::matmul(weights, vh));
    }
    return ops::add_bias(ops::matmul(ops::concat_cols(heads), p.wo), p.bo);
}

QAModel QAModel::create(const ModelConfig& config, Rng& init_rng) {
    config.validate();
    QAModel m;
    m.config_ = config;
    auto& ps = m.params_;
    const std::size_t d = config.d_model;
    const double attn_std = 1.0 / std::sqrt(static_cast<double>(d));

    ps.add("embed.tokens", moe::normal_init({config.vocab_size, d}, 1.0, init_rng));
    if (config.positional == Positional::kLearned) {
        ps.add("embed.positions", moe::normal_init({config.max_seq_len, d}, 0.02, init_rng));
    }
    ps.add("embed.ln.gain", Tensor::filled({d}, 1.0));
    ps.add("embed.ln.bias", Tensor::zeros({d}));

    for (std::size_t l = 0; l < config.n_layers; ++l) {
        const auto pre = layer_prefix(l);
        for (const char* w : {"wq", "wk", "wv", "wo"}) {
            ps.add(pre + ".attn." + w, moe::normal_init({d, d}, attn_std, init_rng));
        }
        for (const char* b : {"bq", "bk", "bv", "bo"}) ps.add(pre + ".attn." + b, Tensor::zeros({d}));
        for (const char* ln : {"ln1", "ln2"}) {
            ps.add(pre + "." + ln + ".gain", Tensor::filled({d}, 1.0));
            ps.add(pre + "." + ln + ".bias", Tensor::zeros({d}));
        }
        if (config.ffn_kind(l) == FfnKind::kDense) {
            moe::FeedForward::create(ps, pre + ".ffn", d, config.ffn_hidden, d, init_rng);
        } else {
            moe::SwitchFfnParams::create(ps, pre + ".switch", d, *config.switch_ffn, init_rng);
        }
    }

    bool span_from_head = false;
    if (config.moe_head) {
        span_from_head = config.moe_head->head_output == moe::HeadOutput::kSpanLogits;
        moe::MoEHeadParams::create(ps, "head.moe", d, span_from_head ? 2 : d, *config.moe_head, init_rng);
    }
    if (!span_from_head) {
        ps.add("head.span.weight", Tensor::zeros({d, 2}));
        ps.add("head.span.bias", Tensor::zeros({2}));
    }
    m.bind();
    return m;
}

QAModel QAModel::from_parameters(const ModelConfig& config, const std::map<std::string, Tensor>& values) {
    Rng scratch(0);
    QAModel m = create(config, scratch);
    for (const auto& [name, t] : m.params_) {
        if (values.count(name) == 0) throw ConfigError("checkpoint is missing parameter '" + name + "'");
    }
    for (const auto& [name, t] : values) {
        if (!m.params_.contains(name)) throw ConfigError("checkpoint has unexpected parameter '" + name + "'");
    }
    m.params_.assign_values(values);
    return m;
}

void QAModel::bind() {
    const auto& ps = params_;
    token_embedding = ps.get("embed.tokens");
    if (ps.contains("embed.positions")) position_embedding = ps.get("embed.positions");
    embed_ln_gain = ps.get("embed.ln.gain");
    embed_ln_bias = ps.get("embed.ln.bias");
    layers.clear();
    for (std::size_t l = 0; l < config_.n_layers; ++l) {
        const auto pre = layer_prefix(l);
        EncoderLayer layer;
        layer.kind = config_.ffn_kind(l);
        auto& a = layer.attention;
        a.wq = ps.get(pre + ".attn.wq");
        a.wk = ps.get(pre + ".attn.wk");
        a.wv = ps.get(pre + ".attn.wv");
        a.wo = ps.get(pre + ".attn.wo");
        a.bq = ps.get(pre + ".attn.bq");
        a.bk = ps.get(pre + ".attn.bk");
        a.bv = ps.get(pre + ".attn.bv");
        a.bo = ps.get(pre + ".attn.bo");
        layer.ln1_gain = ps.get(pre + ".ln1.gain");
        layer.ln1_bias = ps.get(pre + ".ln1.bias");
        layer.ln2_gain = ps.get(pre + ".ln2.gain");
        layer.ln2_bias = ps.get(pre + ".ln2.bias");
        if (layer.kind == FfnKind::kDense) {
            layer.dense = moe::FeedForward::bind(ps, pre + ".ffn");
        } else {
            layer.switch_ = moe::SwitchFfnParams::bind(ps, pre + ".switch", *config_.switch_ffn);
        }
        layers.push_back(std::move(layer));
    }
    head.reset();
    if (config_.moe_head) head = moe::MoEHeadParams::bind(ps, "head.moe", *config_.moe_head);
    if (ps.contains("head.span.weight")) {
        span_weight = ps.get("head.span.weight");
        span_bias = ps.get("head.span.bias");
    }
}

std::vector<Tensor> QAModel::encode(std::span<const std::vector<std::size_t>> batch, const ForwardOptions& options,
                                    std::vector<Tensor>* aux_losses, std::vector<RouteRecord>* routes) const {
    const auto& c = config_;
    std::vector<std::size_t> lengths;
    std::vector<Tensor> h;
    for (const auto& ids : batch) {
        if (ids.empty()) throw ContractError("encode: empty sequence");
        if (ids.size() > c.max_seq_len) {
            throw DimensionError("encode: sequence of " + std::to_string(ids.size()) + " tokens exceeds max_seq_len " +
                                 std::to_string(c.max_seq_len));
        }
        for (auto id : ids) {
            if (id >= c.vocab_size) {
                throw VocabularyError("unknown token id " + std::to_string(id) + " (vocabulary size " +
                                      std::to_string(c.vocab_size) + ")");
            }
        }
        const std::size_t T = ids.size();
        lengths.push_back(T);
        auto e = ops::scale(ops::embed(ids, token_embedding), std::sqrt(static_cast<double>(c.d_model)));
        const auto pos = c.positional == Positional::kLearned ? ops::slice_rows(position_embedding, 0, T)
                                                              : sinusoidal_positions(T, c.d_model);
        e = ops::add(e, pos);
        h.push_back(maybe_dropout(ops::layer_norm(e, embed_ln_gain, embed_ln_bias, c.layer_norm_eps), c.dropout,
                                  options.dropout_rng));
    }

    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& layer = layers[l];
        for (auto& x : h) {
            const auto a = maybe_dropout(self_attention(x, layer.attention, c.n_heads), c.dropout, options.dropout_rng);
            x = ops::layer_norm(ops::add(x, a), layer.ln1_gain, layer.ln1_bias, c.layer_norm_eps);
        }
        const auto stacked = h.size() == 1 ? h.front() : ops::concat_rows(h);
        Tensor y;
        if (layer.kind == FfnKind::kDense) {
            y = layer.dense.forward(stacked);
        } else {
            auto out = moe::switch_ffn_forward(stacked, *c.switch_ffn, layer.switch_.experts, layer.switch_.router,
                                               options.noise_rng);
            if (routes != nullptr) routes->push_back(make_record(l, false, out.stats, out.decision, out.aux_loss));
            if (aux_losses != nullptr) aux_losses->push_back(out.aux_loss);
            y = out.y;
        }
        y = maybe_dropout(y, c.dropout, options.dropout_rng);
        const auto next = ops::layer_norm(ops::add(stacked, y), layer.ln2_gain, layer.ln2_bias, c.layer_norm_eps);
        h = h.size() == 1 ? std::vector<Tensor>{next} : split_rows(next, lengths);
    }
    return h;
}

Tensor QAModel::encode(const std::vector<std::size_t>& ids) const {
    return encode(std::span<const std::vector<std::size_t>>(&ids, 1)).front();
}

ForwardOutput QAModel::forward(std::span<const std::vector<std::size_t>> batch, const ForwardOptions& options) const {
    ForwardOutput out;
    out.hidden = encode(batch, options, &out.aux_losses, &out.routes);
    std::vector<std::size_t> lengths;
    for (const auto& ids : batch) lengths.push_back(ids.size());

    std::vector<Tensor> final_states = out.hidden;
    if (head) {
        const auto stacked = out.hidden.size() == 1 ? out.hidden.front() : ops::concat_rows(out.hidden);
        auto moe_out = moe::moe_head_forward(stacked, *config_.moe_head, head->experts, head->gate, options.noise_rng);
        out.routes.push_back(
            make_record(config_.n_layers, true, moe_out.stats, moe_out.decision, moe_out.aux_loss));
        out.aux_losses.push_back(moe_out.aux_loss);
        final_states = split_rows(moe_out.y, lengths);
    }
    for (const auto& s : final_states) {
        if (span_weight.defined()) {
            out.logits.push_back(span_head(s, span_weight, span_bias));
        } else {
            const std::size_t T = s.rows();
            out.logits.push_back({ops::reshape(ops::slice_cols(s, 0, 1), {T}), ops::reshape(ops::slice_cols(s, 1, 2), {T})});
        }
    }
    return out;
}

} // namespace moelab::model
