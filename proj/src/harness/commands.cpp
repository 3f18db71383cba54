// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/harness/commands.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "moelab/core/error.h"
#include "moelab/core/rng.h"
#include "moelab/data/metrics.h"
#include "moelab/data/sampling.h"
#include "moelab/data/squad_io.h"
#include "moelab/data/synthetic.h"
#include "moelab/harness/svg_plot.h"
#include "moelab/model/features.h"
#include "moelab/model/trainer.h"
#include "moelab/moe/routing.h"

namespace moelab::harness {

namespace fs = std::filesystem;

namespace {

data::Dataset load_source(const std::string& path, std::vector<std::string>& warnings) {
    auto report = data::load_squad(path);
    for (const auto& p : report.problems) warnings.push_back(path + ": dropped " + p);
    return std::move(report.examples);
}

data::Dataset mix_sources(const std::vector<std::string>& paths, const std::vector<std::size_t>& counts,
                          std::uint64_t seed, std::vector<std::string>& warnings) {
    if (paths.empty()) return {};
    std::vector<data::NamedDataset> sources;
    std::vector<std::size_t> take;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        sources.push_back({paths[i], load_source(paths[i], warnings)});
        take.push_back(counts.empty() ? sources.back().examples.size() : counts[i]);
    }
    auto mixed = data::sample_and_mix(sources, take, seed);
    warnings.insert(warnings.end(), mixed.warnings.begin(), mixed.warnings.end());
    return std::move(mixed.examples);
}

std::string csv_comment(const nlohmann::json& prov) {
    return "# config_hash=" + prov.value("config_hash", std::string("unknown")) +
           " seed=" + std::to_string(prov.value("seed", std::uint64_t{0})) + "\n";
}

nlohmann::json summary(const data::EvalResult& r) {
    return {{"exact_match", r.exact_match}, {"f1", r.f1}, {"count", r.scores.size()},
            {"missing", r.missing_ids.size()}};
}

nlohmann::json checkpoint_provenance(const nlohmann::json& meta, const fs::path& checkpoint) {
    nlohmann::json prov = meta.contains("provenance") ? meta["provenance"] : nlohmann::json{{"tool", "moelab"}};
    prov["checkpoint"] = checkpoint.string();
    return prov;
}

} // namespace

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::unique_ptr<augment::Translator> make_translator(const std::string& name) {
    if (name == "mock") return std::make_unique<augment::MockTranslator>();
    if (name == "identity") return std::make_unique<augment::IdentityTranslator>();
    throw ConfigError("unknown translator '" + name + "' (expected mock or identity)");
}

TrainingData prepare_training_data(const ExperimentConfig& config) {
    TrainingData out;
    data::Dataset in_domain;
    if (config.data.synthetic > 0) {
        data::SyntheticOptions opts;
        opts.count = config.data.synthetic;
        opts.seed = config.data.synthetic_seed;
        opts.palette = config.data.synthetic_palette;
        opts.unanswerable_fraction = config.data.synthetic_unanswerable;
        in_domain = data::generate_synthetic(opts);
    }
    for (auto& ex : mix_sources(config.data.in_domain, config.data.in_domain_counts, config.seed, out.warnings)) {
        in_domain.push_back(std::move(ex));
    }
    auto ood = mix_sources(config.data.out_of_domain, config.data.out_of_domain_counts, config.seed + 1,
                           out.warnings);
    out.in_domain = in_domain.size();
    out.out_of_domain = ood.size();

    if (config.augment_enabled && !ood.empty()) {
        auto recipe = config.recipe;
        recipe.seed = config.seed;
        const auto lexicon = augment::SynonymLexicon::load(config.lexicon);
        auto translator = make_translator(config.translator);
        auto aug = augment::augment_dataset(ood, recipe, lexicon, *translator);
        out.augmented = aug.examples.size();
        out.augment_report = aug.report.to_json();
        for (auto& ex : aug.examples) ood.push_back(std::move(ex));
    }

    out.train = std::move(in_domain);
    for (auto& ex : ood) out.train.push_back(std::move(ex));
    if (!config.data.validation.empty()) out.validation = load_source(config.data.validation, out.warnings);
    return out;
}

nlohmann::json cmd_train(const ExperimentConfig& config, std::ostream& log) {
    config.validate(true);
    const fs::path dir = config.output_dir;
    const auto prov = provenance(config);
    auto prepared = prepare_training_data(config);
    if (prepared.train.empty()) throw ConfigError("training set is empty after loading and sampling");
    log << "training examples: " << prepared.train.size() << " (in-domain " << prepared.in_domain
        << ", out-of-domain " << prepared.out_of_domain << ", augmented " << prepared.augmented << ")\n";

    const auto vocab = model::Vocabulary::build(prepared.train, config.min_count);
    auto init = Rng(config.seed).substream("init");
    auto qa = model::QAModel::create(config.model_config(vocab.size()), init);

    auto train_cfg = config.train;
    train_cfg.seed = config.seed;
    const data::Dataset* validation = prepared.validation.empty() ? nullptr : &prepared.validation;
    const auto result = model::train(qa, vocab, prepared.train, validation, train_cfg);

    nlohmann::json epochs = nlohmann::json::array();
    for (const auto& e : result.epochs) {
        nlohmann::json row = {{"epoch", e.epoch}, {"mean_loss", e.mean_loss}, {"mean_f_entropy", e.mean_f_entropy}};
        if (e.has_validation) {
            row["val_exact_match"] = e.val_exact_match;
            row["val_f1"] = e.val_f1;
        }
        epochs.push_back(row);
        log << "epoch " << e.epoch << ": loss " << e.mean_loss << "\n";
    }

    const auto train_eval = data::evaluate(
        model::predict(qa, vocab, prepared.train, train_cfg.max_answer_len, train_cfg.batch_size), prepared.train);
    nlohmann::json metrics = {
        {"provenance", prov},
        {"data",
         {{"train_examples", prepared.train.size()},
          {"in_domain", prepared.in_domain},
          {"out_of_domain", prepared.out_of_domain},
          {"augmented", prepared.augmented},
          {"skipped_truncated", result.skipped_truncated},
          {"warnings", prepared.warnings}}},
        {"epochs", epochs},
        {"train", summary(train_eval)},
        {"validation", nullptr},
    };
    if (!prepared.augment_report.is_null()) metrics["augment_report"] = prepared.augment_report;
    if (validation != nullptr) {
        const auto val_eval = data::evaluate(
            model::predict(qa, vocab, prepared.validation, train_cfg.max_answer_len, train_cfg.batch_size),
            prepared.validation);
        metrics["validation"] = summary(val_eval);
    }

    fs::create_directories(dir);
    model::save_model(dir / "model.json", qa, vocab, {{"provenance", prov}, {"config", canonical_text(config)}});
    write_text(dir / "trace.csv", csv_comment(prov) + model::trace_csv(result.trace));
    std::string routes;
    for (const auto& r : result.routes) {
        auto row = model::to_json(r);
        row["config_hash"] = prov["config_hash"];
        routes += row.dump() + "\n";
    }
    write_text(dir / "routes.jsonl", routes);
    write_text(dir / "metrics.json", metrics.dump(2) + "\n");
    log << "train EM " << train_eval.exact_match << " F1 " << train_eval.f1 << "; wrote " << dir.string() << "\n";
    return metrics;
}

nlohmann::json cmd_evaluate(const fs::path& checkpoint, const fs::path& data, const fs::path& out,
                            std::size_t max_answer_len) {
    const auto loaded = model::load_model(checkpoint);
    std::vector<std::string> warnings;
    const auto ds = load_source(data.string(), warnings);
    const auto result = data::evaluate(model::predict(loaded.model, loaded.vocab, ds, max_answer_len), ds);
    nlohmann::json doc = data::to_json(result);
    doc["provenance"] = checkpoint_provenance(loaded.meta, checkpoint);
    doc["data"] = data.string();
    doc["warnings"] = warnings;
    if (!out.empty()) write_text(out, doc.dump(2) + "\n");
    return doc;
}

nlohmann::json cmd_evaluate_predictions(const fs::path& predictions, const fs::path& data, const fs::path& out) {
    std::vector<std::string> warnings;
    const auto ds = load_source(data.string(), warnings);
    const auto result = data::evaluate(data::load_predictions(predictions), ds);
    nlohmann::json doc = data::to_json(result);
    doc["provenance"] = {{"tool", "moelab"}, {"predictions", predictions.string()}};
    doc["data"] = data.string();
    doc["warnings"] = warnings;
    if (!out.empty()) write_text(out, doc.dump(2) + "\n");
    return doc;
}

nlohmann::json cmd_augment(const fs::path& data, const augment::AugmentationRecipe& recipe, const fs::path& lexicon,
                           const std::string& translator, const fs::path& out, bool include_original) {
    recipe.validate();
    std::vector<std::string> warnings;
    const auto ds = load_source(data.string(), warnings);
    const auto lex = augment::SynonymLexicon::load(lexicon);
    auto tr = make_translator(translator);
    auto result = augment::augment_dataset(ds, recipe, lex, *tr);

    data::Dataset emitted;
    if (include_original) emitted = ds;
    for (auto& ex : result.examples) emitted.push_back(std::move(ex));

    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(recipe.to_json().dump() + "|" + translator)));
    const nlohmann::json prov = {{"config_hash", hash}, {"seed", recipe.seed}, {"tool", "moelab"}};

    auto doc = data::to_squad_json(emitted);
    doc["provenance"] = prov;
    write_text(out, doc.dump(1) + "\n");

    nlohmann::json report = result.report.to_json();
    report["provenance"] = prov;
    report["recipe"] = recipe.to_json();
    report["translator"] = translator;
    report["load_warnings"] = warnings;
    write_text(out.string() + ".report.json", report.dump(2) + "\n");
    return report;
}

nlohmann::json cmd_route_stats(const fs::path& checkpoint, const fs::path& data, const fs::path& out_dir,
                               std::size_t batch_size) {
    if (batch_size == 0) throw ConfigError("route-stats: batch size must be positive");
    const auto loaded = model::load_model(checkpoint);
    std::vector<std::string> warnings;
    const auto ds = load_source(data.string(), warnings);
    const auto prov = checkpoint_provenance(loaded.meta, checkpoint);

    struct Accum {
        std::size_t layer = 0;
        bool moe_head = false;
        std::size_t tokens = 0;
        std::size_t dropped = 0;
        std::vector<double> f, P;
        std::size_t batches = 0;
    };
    std::map<std::size_t, Accum> layers;
    for (std::size_t begin = 0; begin < ds.size(); begin += batch_size) {
        std::vector<std::vector<std::size_t>> ids;
        for (std::size_t i = begin; i < std::min(ds.size(), begin + batch_size); ++i) {
            ids.push_back(model::make_features(ds[i], loaded.vocab, loaded.model.config().max_seq_len).ids);
        }
        const auto routes = loaded.model.forward(ids).routes;
        for (const auto& r : routes) {
            auto& a = layers[r.layer];
            a.layer = r.layer;
            a.moe_head = r.moe_head;
            if (a.f.empty()) {
                a.f.assign(r.f.size(), 0.0);
                a.P.assign(r.P.size(), 0.0);
            }
            const auto t = static_cast<double>(r.tokens);
            for (std::size_t i = 0; i < r.f.size(); ++i) {
                a.f[i] += t * r.f[i];
                a.P[i] += t * r.P[i];
            }
            a.tokens += r.tokens;
            a.dropped += r.dropped_count;
            ++a.batches;
        }
    }

    const std::string comment =
        "config_hash=" + prov.value("config_hash", std::string("unknown")) +
        " seed=" + std::to_string(prov.value("seed", std::uint64_t{0}));
    nlohmann::json out_layers = nlohmann::json::array();
    for (auto& [_, a] : layers) {
        const double total = static_cast<double>(std::max<std::size_t>(a.tokens, 1));
        for (auto& v : a.f) v /= total;
        for (auto& v : a.P) v /= total;
        const double n = static_cast<double>(a.f.size());
        const std::string name = a.moe_head ? "moe_head" : "layer_" + std::to_string(a.layer);
        out_layers.push_back({{"name", name},
                              {"layer", a.layer},
                              {"kind", a.moe_head ? "moe_head" : "switch"},
                              {"tokens", a.tokens},
                              {"batches", a.batches},
                              {"f", a.f},
                              {"P", a.P},
                              {"dropped_count", a.dropped},
                              {"drop_rate", static_cast<double>(a.dropped) / total},
                              {"load_entropy", moe::load_entropy(a.f)},
                              {"max_entropy", std::log(n)}});
        std::vector<std::string> experts;
        for (std::size_t i = 0; i < a.f.size(); ++i) experts.push_back("e" + std::to_string(i));
        write_text(out_dir / (name + ".svg"),
                   bar_chart_svg(name + ": dispatch fraction f and mean router probability P", experts,
                                 {{"f", a.f}, {"P", a.P}}, comment));
    }
    nlohmann::json doc = {{"provenance", prov},
                          {"data", data.string()},
                          {"examples", ds.size()},
                          {"batch_size", batch_size},
                          {"layers", out_layers},
                          {"warnings", warnings}};
    write_text(out_dir / "route_stats.json", doc.dump(2) + "\n");
    return doc;
}

ExperimentConfig sweep_variant(const ExperimentConfig& base, const std::string& axis, const std::string& value) {
    auto cfg = base;
    if (axis == "n_experts") {
        apply_setting(cfg, "moe.n_experts", value);
        if (cfg.head_enabled) {
            apply_setting(cfg, "head.n_experts", value);
            cfg.head.k = std::min(cfg.head.k, cfg.head.n_experts);
        }
    } else if (axis == "alpha") {
        apply_setting(cfg, "moe.alpha", value);
        if (cfg.head_enabled) apply_setting(cfg, "head.alpha", value);
    } else {
        throw ConfigError("sweep axis must be 'n_experts' or 'alpha', got '" + axis + "'");
    }
    cfg.output_dir = (fs::path(base.output_dir) / (axis + "-" + value)).string();
    return cfg;
}

std::string cmd_sweep(const ExperimentConfig& template_config, const std::string& axis,
                      const std::vector<std::string>& values, std::ostream& log) {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    std::vector<ExperimentConfig> variants;
    for (const auto& v : values) {
        variants.push_back(sweep_variant(template_config, axis, v));
        variants.back().validate(true);
    }
    std::ostringstream csv;
    csv << csv_comment(provenance(template_config));
    csv << "axis,value,config_hash,seed,n_experts,alpha,train_exact_match,train_f1,val_exact_match,val_f1,"
           "final_loss,final_f_entropy\n";
    std::vector<double> f1s;
    for (std::size_t i = 0; i < variants.size(); ++i) {
        const auto& cfg = variants[i];
        log << "sweep " << axis << "=" << values[i] << "\n";
        const auto m = cmd_train(cfg, log);
        const auto& last = m["epochs"].back();
        const auto val = m["validation"];
        auto num = [](const nlohmann::json& j) {
            std::ostringstream os;
            os.precision(17);
            os << j.get<double>();
            return os.str();
        };
        csv << axis << ',' << values[i] << ',' << config_hash(cfg) << ',' << cfg.seed << ',' << cfg.moe.n_experts
            << ',' << num(cfg.moe.alpha) << ',' << num(m["train"]["exact_match"]) << ','
            << num(m["train"]["f1"]) << ',' << (val.is_null() ? "" : num(val["exact_match"])) << ','
            << (val.is_null() ? "" : num(val["f1"])) << ',' << num(last["mean_loss"]) << ','
            << num(last["mean_f_entropy"]) << '\n';
        f1s.push_back(val.is_null() ? m["train"]["f1"].get<double>() : val["f1"].get<double>());
    }
    const fs::path dir = template_config.output_dir;
    write_text(dir / "sweep.csv", csv.str());
    write_text(dir / "sweep.svg",
               bar_chart_svg("F1 by " + axis, values, {{"f1", f1s}},
                             "config_hash=" + config_hash(template_config) +
                                 " seed=" + std::to_string(template_config.seed)));
    return csv.str();
}

} // namespace moelab::harness
