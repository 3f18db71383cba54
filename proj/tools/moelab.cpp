// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0
//
// moelab command line. Exit codes: 0 success, 1 invalid input or
// configuration, 2 runtime failure.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "moelab/augment/pipeline.h"
#include "moelab/core/error.h"
#include "moelab/data/squad_io.h"
#include "moelab/data/synthetic.h"
#include "moelab/harness/commands.h"
#include "moelab/harness/config.h"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kFailure = 2;

moelab::harness::ExperimentConfig load_with_overrides(const std::string& path, const std::vector<std::string>& sets,
                                                      const std::optional<std::uint64_t>& seed) {
    auto cfg = moelab::harness::load_config(path);
    for (const auto& s : sets) moelab::harness::apply_override(cfg, s);
    if (seed) cfg.seed = *seed;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    using namespace moelab;
    CLI::App app{"moelab: sparse expert routing for extractive QA"};
    app.require_subcommand(1);

    std::string config_path, checkpoint, data_path, out_path, recipe_path, predictions;
    std::string lexicon = "data/lexicon.tsv", translator = "mock", axis, values_arg;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::size_t max_answer_len = 30, batch_size = 16;
    bool include_original = false, print_config = false;
    data::SyntheticOptions synth;

    auto* train = app.add_subcommand("train", "Train a model from an experiment config");
    train->add_option("--config", config_path, "Experiment config file")->required();
    train->add_option("--set", sets, "Override a config key (key=value), repeatable");
    train->add_option("--seed", seed, "Override the experiment seed");
    train->add_flag("--print-config", print_config, "Print the resolved config and hash, then exit");

    auto* evaluate = app.add_subcommand("evaluate", "Score a checkpoint or a predictions file on a dataset");
    auto* ck_opt = evaluate->add_option("--checkpoint", checkpoint, "Model checkpoint (model.json)");
    auto* pred_opt = evaluate->add_option("--predictions", predictions, "Predictions JSON {id: answer}");
    ck_opt->excludes(pred_opt);
    evaluate->add_option("--data", data_path, "SQuAD-format dataset")->required();
    evaluate->add_option("--out", out_path, "Write metrics JSON here");
    evaluate->add_option("--max-answer-len", max_answer_len, "Longest predicted span (tokens)");

    auto* augment_cmd = app.add_subcommand("augment", "Write an augmented copy of a dataset");
    augment_cmd->add_option("--data", data_path, "SQuAD-format dataset")->required();
    augment_cmd->add_option("--recipe", recipe_path, "Recipe file (sr, rs, ri, rd, n_aug, languages, seed)")
        ->required();
    augment_cmd->add_option("--out", out_path, "Output SQuAD file")->required();
    augment_cmd->add_option("--lexicon", lexicon, "Synonym lexicon (word TAB synonyms)");
    augment_cmd->add_option("--translator", translator, "mock or identity");
    augment_cmd->add_option("--seed", seed, "Override the recipe seed");
    augment_cmd->add_flag("--include-original", include_original, "Keep the input examples in the output");

    auto* route = app.add_subcommand("route-stats", "Routing statistics and plots for a checkpoint");
    route->add_option("--checkpoint", checkpoint, "Model checkpoint")->required();
    route->add_option("--data", data_path, "SQuAD-format dataset")->required();
    route->add_option("--out", out_path, "Output directory")->required();
    route->add_option("--batch-size", batch_size, "Examples per routing batch");

    auto* sweep = app.add_subcommand("sweep", "Train one model per value of n_experts or alpha");
    sweep->add_option("--template", config_path, "Experiment config template")->required();
    sweep->add_option("--axis", axis, "n_experts or alpha")->required();
    sweep->add_option("--values", values_arg, "Comma-separated values")->required();
    sweep->add_option("--set", sets, "Override a config key (key=value), repeatable");
    sweep->add_option("--seed", seed, "Override the experiment seed");

    auto* synth_cmd = app.add_subcommand("synth", "Write a generated toy QA corpus");
    synth_cmd->add_option("--out", out_path, "Output SQuAD file")->required();
    synth_cmd->add_option("--count", synth.count, "Number of examples");
    synth_cmd->add_option("--seed", synth.seed, "Generator seed");
    synth_cmd->add_option("--palette", synth.palette, "Number of colours used");
    synth_cmd->add_option("--unanswerable", synth.unanswerable_fraction, "Fraction of unanswerable questions");
    synth_cmd->add_flag("--mixed", [&](std::int64_t) { synth.colours_only = false; },
                        "Mix colour and place questions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (*train) {
            const auto cfg = load_with_overrides(config_path, sets, seed);
            if (print_config) {
                std::cout << harness::canonical_text(cfg) << "# config_hash=" << harness::config_hash(cfg) << "\n";
                return kOk;
            }
            harness::cmd_train(cfg, std::cout);
        } else if (*evaluate) {
            if (checkpoint.empty() == predictions.empty()) {
                std::cerr << "evaluate: give exactly one of --checkpoint or --predictions\n";
                return kInvalid;
            }
            const auto doc = checkpoint.empty()
                                 ? harness::cmd_evaluate_predictions(predictions, data_path, out_path)
                                 : harness::cmd_evaluate(checkpoint, data_path, out_path, max_answer_len);
            std::cout << "exact_match " << doc["exact_match"].get<double>() << " f1 " << doc["f1"].get<double>()
                      << " over " << doc["count"].get<std::size_t>() << " examples\n";
        } else if (*augment_cmd) {
            auto recipe = augment::load_recipe(recipe_path);
            if (seed) recipe.seed = *seed;
            const auto report =
                harness::cmd_augment(data_path, recipe, lexicon, translator, out_path, include_original);
            std::cout << "emitted " << report["emitted"] << " from " << report["input_count"] << " inputs ("
                      << report["dropped_rematch"] << " rematch drops, " << report["dropped_translation"]
                      << " translation drops)\n";
        } else if (*route) {
            const auto doc = harness::cmd_route_stats(checkpoint, data_path, out_path, batch_size);
            for (const auto& l : doc["layers"]) {
                std::cout << l["name"].get<std::string>() << ": entropy " << l["load_entropy"].get<double>()
                          << " / " << l["max_entropy"].get<double>() << ", drop rate "
                          << l["drop_rate"].get<double>() << "\n";
            }
        } else if (*sweep) {
            const auto cfg = load_with_overrides(config_path, sets, seed);
            std::vector<std::string> values;
            std::stringstream parts(values_arg);
            std::string v;
            while (std::getline(parts, v, ',')) {
                if (!v.empty()) values.push_back(v);
            }
            std::cout << harness::cmd_sweep(cfg, axis, values, std::cerr);
        } else if (*synth_cmd) {
            data::save_squad(out_path, data::generate_synthetic(synth));
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return kFailure;
    }
    return kOk;
}
