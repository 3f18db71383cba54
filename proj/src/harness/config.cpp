// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/harness/config.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "moelab/augment/text.h"
#include "moelab/core/error.h"
#include "moelab/core/rng.h"

namespace moelab::harness {

namespace {

std::string trim(std::string_view s) { return augment::split_padding(s).body; }

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fmt(bool v) { return v ? "true" : "false"; }

template <typename T>
std::string fmt_list(const std::vector<T>& items) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += ',';
        if constexpr (std::is_same_v<T, std::string>) {
            out += item;
        } else {
            out += std::to_string(item);
        }
    }
    return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError("'" + std::string(key) + "' expects a non-negative integer, got '" + std::string(v) + "'");
    }
    return out;
}

double to_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError("'" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
    }
    return out;
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("'" + std::string(key) + "' expects true or false, got '" + std::string(v) + "'");
}

std::vector<std::string> to_strings(std::string_view v) {
    std::vector<std::string> out;
    std::stringstream parts{std::string(v)};
    std::string item;
    while (std::getline(parts, item, ',')) {
        auto t = trim(item);
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

std::vector<std::size_t> to_sizes(std::string_view key, std::string_view v) {
    std::vector<std::size_t> out;
    for (const auto& s : to_strings(v)) out.push_back(to_u64(key, s));
    return out;
}

struct Field {
    std::string key;
    std::function<void(ExperimentConfig&, std::string_view key, std::string_view value)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

#define MOELAB_SIZE(name, member) \
    Field{name, [](auto& c, auto k, auto v) { c.member = to_u64(k, v); }, [](const auto& c) { return std::to_string(c.member); }}
#define MOELAB_DOUBLE(name, member) \
    Field{name, [](auto& c, auto k, auto v) { c.member = to_double(k, v); }, [](const auto& c) { return fmt(c.member); }}
#define MOELAB_BOOL(name, member) \
    Field{name, [](auto& c, auto k, auto v) { c.member = to_bool(k, v); }, [](const auto& c) { return fmt(c.member); }}
#define MOELAB_STRING(name, member) \
    Field{name, [](auto& c, auto, auto v) { c.member = std::string(v); }, [](const auto& c) { return c.member; }}
#define MOELAB_STRINGS(name, member) \
    Field{name, [](auto& c, auto, auto v) { c.member = to_strings(v); }, [](const auto& c) { return fmt_list(c.member); }}
#define MOELAB_SIZES(name, member) \
    Field{name, [](auto& c, auto k, auto v) { c.member = to_sizes(k, v); }, [](const auto& c) { return fmt_list(c.member); }}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        MOELAB_SIZE("seed", seed),
        MOELAB_STRING("output_dir", output_dir),
        MOELAB_STRINGS("data.in_domain", data.in_domain),
        MOELAB_SIZES("data.in_domain_counts", data.in_domain_counts),
        MOELAB_STRINGS("data.out_of_domain", data.out_of_domain),
        MOELAB_SIZES("data.out_of_domain_counts", data.out_of_domain_counts),
        MOELAB_STRING("data.validation", data.validation),
        MOELAB_SIZE("data.synthetic", data.synthetic),
        MOELAB_SIZE("data.synthetic_palette", data.synthetic_palette),
        MOELAB_SIZE("data.synthetic_seed", data.synthetic_seed),
        MOELAB_DOUBLE("data.synthetic_unanswerable", data.synthetic_unanswerable),
        MOELAB_SIZE("model.d_model", model.d_model),
        MOELAB_SIZE("model.n_layers", model.n_layers),
        MOELAB_SIZE("model.n_heads", model.n_heads),
        MOELAB_SIZE("model.ffn_hidden", model.ffn_hidden),
        MOELAB_SIZE("model.max_seq_len", model.max_seq_len),
        Field{"model.positional", [](auto& c, auto, auto v) { c.model.positional = model::parse_positional(std::string(v)); },
              [](const auto& c) { return model::to_string(c.model.positional); }},
        MOELAB_DOUBLE("model.dropout", model.dropout),
        MOELAB_SIZES("model.switch_layers", switch_layers),
        MOELAB_SIZE("model.min_count", min_count),
        MOELAB_SIZE("moe.n_experts", moe.n_experts),
        MOELAB_SIZE("moe.expert_hidden", moe.expert_hidden),
        MOELAB_DOUBLE("moe.capacity_factor", moe.capacity_factor),
        MOELAB_DOUBLE("moe.alpha", moe.alpha),
        MOELAB_BOOL("moe.noisy_gating", moe.noisy_gating),
        MOELAB_DOUBLE("moe.noise_std", moe.noise_std),
        Field{"moe.f_basis", [](auto& c, auto, auto v) { c.moe.f_basis = moe::parse_dispatch_basis(std::string(v)); },
              [](const auto& c) { return moe::to_string(c.moe.f_basis); }},
        MOELAB_BOOL("head.enabled", head_enabled),
        MOELAB_SIZE("head.n_experts", head.n_experts),
        MOELAB_SIZE("head.k", head.k),
        MOELAB_SIZE("head.expert_hidden", head.expert_hidden),
        MOELAB_DOUBLE("head.alpha", head.alpha),
        MOELAB_BOOL("head.noisy_gating", head.noisy_gating),
        MOELAB_DOUBLE("head.noise_std", head.noise_std),
        Field{"head.output", [](auto& c, auto, auto v) { c.head.head_output = moe::parse_head_output(std::string(v)); },
              [](const auto& c) { return moe::to_string(c.head.head_output); }},
        MOELAB_SIZE("train.epochs", train.epochs),
        MOELAB_SIZE("train.batch_size", train.batch_size),
        MOELAB_DOUBLE("train.learning_rate", train.learning_rate),
        MOELAB_SIZE("train.max_answer_len", train.max_answer_len),
        MOELAB_BOOL("augment.enabled", augment_enabled),
        MOELAB_DOUBLE("augment.sr", recipe.sr),
        MOELAB_DOUBLE("augment.rs", recipe.rs),
        MOELAB_DOUBLE("augment.ri", recipe.ri),
        MOELAB_DOUBLE("augment.rd", recipe.rd),
        MOELAB_SIZE("augment.n_aug", recipe.n_aug),
        MOELAB_STRINGS("augment.languages", recipe.languages),
        MOELAB_STRING("augment.lexicon", lexicon),
        MOELAB_STRING("augment.translator", translator),
    };
    return table;
}

#undef MOELAB_SIZE
#undef MOELAB_DOUBLE
#undef MOELAB_BOOL
#undef MOELAB_STRING
#undef MOELAB_STRINGS
#undef MOELAB_SIZES

void require_file(const std::string& key, const std::string& path) {
    if (!std::filesystem::is_regular_file(path)) {
        throw ConfigError(key + ": file not found: '" + path + "'");
    }
}

} // namespace

ExperimentConfig::ExperimentConfig() {
    head.k = 2;
    recipe.languages = {};
}

model::ModelConfig ExperimentConfig::model_config(std::size_t vocab_size) const {
    auto cfg = model;
    cfg.vocab_size = vocab_size;
    cfg.ffn_kinds.clear();
    cfg.switch_ffn.reset();
    cfg.moe_head.reset();
    if (!switch_layers.empty()) {
        for (const auto l : switch_layers) {
            if (l >= cfg.n_layers) {
                throw ConfigError("model.switch_layers: layer " + std::to_string(l) + " does not exist (n_layers=" +
                                  std::to_string(cfg.n_layers) + ")");
            }
        }
        cfg.set_switch_layers(switch_layers);
        auto sw = moe;
        sw.k = 1;
        cfg.switch_ffn = sw;
    }
    if (head_enabled) cfg.moe_head = head;
    return cfg;
}

void ExperimentConfig::validate(bool check_files) const {
    const auto prefixed = [](const std::string& prefix, const auto& fn) {
        try {
            fn();
        } catch (const ConfigError& e) {
            throw ConfigError(prefix + e.what());
        }
    };
    if (!switch_layers.empty()) prefixed("moe.", [&] {
        auto sw = moe;
        sw.k = 1;
        sw.validate();
    });
    if (head_enabled) prefixed("head.", [&] { head.validate(); });
    model_config(1).validate();
    train.validate();
    prefixed("augment.", [&] { recipe.validate(); });
    if (min_count == 0) throw ConfigError("model.min_count must be at least 1");
    if (!data.in_domain_counts.empty() && data.in_domain_counts.size() != data.in_domain.size()) {
        throw ConfigError("data.in_domain_counts lists " + std::to_string(data.in_domain_counts.size()) +
                          " counts for " + std::to_string(data.in_domain.size()) + " files");
    }
    if (!data.out_of_domain_counts.empty() && data.out_of_domain_counts.size() != data.out_of_domain.size()) {
        throw ConfigError("data.out_of_domain_counts lists " + std::to_string(data.out_of_domain_counts.size()) +
                          " counts for " + std::to_string(data.out_of_domain.size()) + " files");
    }
    if (data.synthetic == 0 && data.in_domain.empty() && data.out_of_domain.empty()) {
        throw ConfigError("no training data: set data.in_domain, data.out_of_domain or data.synthetic");
    }
    if (!(data.synthetic_unanswerable >= 0.0 && data.synthetic_unanswerable <= 1.0)) {
        throw ConfigError("data.synthetic_unanswerable must be in [0, 1]");
    }
    if (translator != "mock" && translator != "identity") {
        throw ConfigError("augment.translator must be 'mock' or 'identity', got '" + translator + "'");
    }
    if (check_files) {
        for (const auto& p : data.in_domain) require_file("data.in_domain", p);
        for (const auto& p : data.out_of_domain) require_file("data.out_of_domain", p);
        if (!data.validation.empty()) require_file("data.validation", data.validation);
        if (augment_enabled) require_file("augment.lexicon", lexicon);
    }
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
    for (const auto& f : fields()) {
        if (f.key == key) {
            f.set(config, key, trim(value));
            return;
        }
    }
    throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void apply_override(ExperimentConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
    }
    apply_setting(config, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
    ExperimentConfig config;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body[0] == '#') continue;
        const auto where = source + ":" + std::to_string(line_no) + ": ";
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ParseError(where + "expected 'key = value'");
        try {
            apply_setting(config, trim(body.substr(0, eq)), body.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::string canonical_text(const ExperimentConfig& config) {
    std::string out;
    for (const auto& f : fields()) out += f.key + " = " + f.get(config) + "\n";
    return out;
}

std::string config_hash(const ExperimentConfig& config) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_text(config))));
    return buf;
}

std::vector<std::string> config_keys() {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.push_back(f.key);
    return out;
}

nlohmann::json provenance(const ExperimentConfig& config) {
    return {{"config_hash", config_hash(config)}, {"seed", config.seed}, {"tool", "moelab"}};
}

} // namespace moelab::harness
