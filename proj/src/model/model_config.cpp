// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/model/model_config.h"

#include "moelab/core/error.h"

namespace moelab::model {

using nlohmann::json;

FfnKind ModelConfig::ffn_kind(std::size_t layer) const {
    return layer < ffn_kinds.size() ? ffn_kinds[layer] : FfnKind::kDense;
}

std::size_t ModelConfig::switch_layer_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < n_layers; ++l) n += ffn_kind(l) == FfnKind::kSwitch ? 1 : 0;
    return n;
}

void ModelConfig::set_switch_layers(const std::vector<std::size_t>& layers) {
    ffn_kinds.assign(n_layers, FfnKind::kDense);
    for (auto l : layers) {
        if (l >= n_layers) {
            throw ConfigError("switch layer index " + std::to_string(l) + " out of range for n_layers=" +
                              std::to_string(n_layers));
        }
        ffn_kinds[l] = FfnKind::kSwitch;
    }
}

void ModelConfig::validate() const {
    auto positive = [](std::size_t v, const char* name) {
        if (v == 0) throw ConfigError(std::string("model.") + name + " must be positive");
    };
    positive(vocab_size, "vocab_size");
    positive(d_model, "d_model");
    positive(n_layers, "n_layers");
    positive(n_heads, "n_heads");
    positive(ffn_hidden, "ffn_hidden");
    positive(max_seq_len, "max_seq_len");
    if (d_model % n_heads != 0) {
        throw ConfigError("model.d_model=" + std::to_string(d_model) + " is not divisible by model.n_heads=" +
                          std::to_string(n_heads));
    }
    if (!ffn_kinds.empty() && ffn_kinds.size() != n_layers) {
        throw ConfigError("model.ffn_kinds lists " + std::to_string(ffn_kinds.size()) + " layers but n_layers=" +
                          std::to_string(n_layers));
    }
    if (switch_layer_count() > 0 && !switch_ffn) throw ConfigError("switch layers requested without a switch config");
    if (switch_layer_count() == 0 && switch_ffn) throw ConfigError("switch config given but no layer is a switch layer");
    if (switch_ffn) {
        auto top1 = *switch_ffn;
        top1.k = 1;
        top1.validate();
    }
    if (moe_head) moe_head->validate();
    if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("model.dropout must be in [0, 1)");
    if (!(layer_norm_eps > 0.0)) throw ConfigError("model.layer_norm_eps must be positive");
}

std::string to_string(FfnKind kind) { return kind == FfnKind::kDense ? "dense" : "switch"; }

FfnKind parse_ffn_kind(const std::string& text) {
    if (text == "dense") return FfnKind::kDense;
    if (text == "switch") return FfnKind::kSwitch;
    throw ConfigError("unknown ffn kind '" + text + "' (expected dense or switch)");
}

std::string to_string(Positional positional) {
    return positional == Positional::kSinusoidal ? "sinusoidal" : "learned";
}

Positional parse_positional(const std::string& text) {
    if (text == "sinusoidal") return Positional::kSinusoidal;
    if (text == "learned") return Positional::kLearned;
    throw ConfigError("unknown positional encoding '" + text + "' (expected sinusoidal or learned)");
}

json to_json(const moe::MoEConfig& c) {
    return {{"n_experts", c.n_experts},
            {"k", c.k},
            {"expert_hidden", c.expert_hidden},
            {"capacity_factor", c.capacity_factor},
            {"alpha", c.alpha},
            {"noisy_gating", c.noisy_gating},
            {"noise_std", c.noise_std},
            {"f_basis", moe::to_string(c.f_basis)},
            {"head_output", moe::to_string(c.head_output)}};
}

moe::MoEConfig moe_config_from_json(const json& doc) {
    moe::MoEConfig c;
    c.n_experts = doc.at("n_experts").get<std::size_t>();
    c.k = doc.at("k").get<std::size_t>();
    c.expert_hidden = doc.at("expert_hidden").get<std::size_t>();
    c.capacity_factor = doc.at("capacity_factor").get<double>();
    c.alpha = doc.at("alpha").get<double>();
    c.noisy_gating = doc.value("noisy_gating", false);
    c.noise_std = doc.value("noise_std", 1.0);
    c.f_basis = moe::parse_dispatch_basis(doc.value("f_basis", "pre_capacity"));
    c.head_output = moe::parse_head_output(doc.value("head_output", "hidden"));
    return c;
}

json to_json(const ModelConfig& c) {
    json kinds = json::array();
    for (std::size_t l = 0; l < c.n_layers; ++l) kinds.push_back(to_string(c.ffn_kind(l)));
    json doc = {{"vocab_size", c.vocab_size},
                {"d_model", c.d_model},
                {"n_layers", c.n_layers},
                {"n_heads", c.n_heads},
                {"ffn_hidden", c.ffn_hidden},
                {"max_seq_len", c.max_seq_len},
                {"ffn_kinds", kinds},
                {"positional", to_string(c.positional)},
                {"dropout", c.dropout},
                {"layer_norm_eps", c.layer_norm_eps}};
    doc["switch_ffn"] = c.switch_ffn ? to_json(*c.switch_ffn) : json(nullptr);
    doc["moe_head"] = c.moe_head ? to_json(*c.moe_head) : json(nullptr);
    return doc;
}

ModelConfig model_config_from_json(const json& doc) {
    ModelConfig c;
    try {
        c.vocab_size = doc.at("vocab_size").get<std::size_t>();
        c.d_model = doc.at("d_model").get<std::size_t>();
        c.n_layers = doc.at("n_layers").get<std::size_t>();
        c.n_heads = doc.at("n_heads").get<std::size_t>();
        c.ffn_hidden = doc.at("ffn_hidden").get<std::size_t>();
        c.max_seq_len = doc.at("max_seq_len").get<std::size_t>();
        for (const auto& k : doc.at("ffn_kinds")) c.ffn_kinds.push_back(parse_ffn_kind(k.get<std::string>()));
        c.positional = parse_positional(doc.value("positional", "sinusoidal"));
        c.dropout = doc.value("dropout", 0.0);
        c.layer_norm_eps = doc.value("layer_norm_eps", 1e-5);
        if (doc.contains("switch_ffn") && !doc["switch_ffn"].is_null()) {
            c.switch_ffn = moe_config_from_json(doc["switch_ffn"]);
        }
        if (doc.contains("moe_head") && !doc["moe_head"].is_null()) c.moe_head = moe_config_from_json(doc["moe_head"]);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed model config: ") + e.what());
    }
    c.validate();
    return c;
}

} // namespace moelab::model
