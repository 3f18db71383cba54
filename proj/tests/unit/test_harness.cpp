// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "moelab/core/error.h"
#include "moelab/data/squad_io.h"
#include "moelab/harness/commands.h"
#include "moelab/harness/config.h"
#include "moelab/harness/svg_plot.h"

using namespace moelab;
using namespace moelab::harness;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = MOELAB_SOURCE_DIR;

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("moelab_test_harness_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ExperimentConfig tiny_config(const fs::path& out) {
    auto cfg = parse_config(
        "data.synthetic = 24\n"
        "model.d_model = 16\nmodel.n_heads = 2\nmodel.ffn_hidden = 32\nmodel.max_seq_len = 48\n"
        "model.switch_layers = 1\nmoe.n_experts = 2\nmoe.expert_hidden = 32\n"
        "train.epochs = 1\ntrain.batch_size = 8\n");
    cfg.output_dir = out.string();
    return cfg;
}

} // namespace

TEST_CASE("config parsing, overrides and canonical form") {
    const auto cfg = parse_config("# comment\nseed = 7\nmoe.alpha = 0.05\nmodel.switch_layers = 0, 1\n"
                                  "augment.languages = es,fr\n");
    CHECK(cfg.seed == 7);
    CHECK(cfg.moe.alpha == 0.05);
    CHECK(cfg.switch_layers == std::vector<std::size_t>{0, 1});
    CHECK(cfg.recipe.languages == std::vector<std::string>{"es", "fr"});
    CHECK(cfg.train.epochs == 5);
    CHECK(cfg.train.batch_size == 16);
    CHECK(cfg.train.learning_rate == 3e-5);

    const auto again = parse_config(canonical_text(cfg));
    CHECK(canonical_text(again) == canonical_text(cfg));
    CHECK(config_hash(again) == config_hash(cfg));

    auto changed = cfg;
    apply_override(changed, "moe.alpha=1");
    CHECK(changed.moe.alpha == 1.0);
    CHECK(config_hash(changed) != config_hash(cfg));

    CHECK_THROWS_AS(parse_config("nope = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("seed = -3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("seed\n"), ParseError);
    CHECK_THROWS_AS(apply_override(changed, "seed"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/x.conf"), ConfigError);
    const auto text = canonical_text(cfg);
    CHECK(config_keys().size() == static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')));
}

TEST_CASE("config validation messages") {
    auto cfg = parse_config("data.synthetic = 8\n");
    CHECK_NOTHROW(cfg.validate());

    auto k_gt_n = cfg;
    k_gt_n.head_enabled = true;
    k_gt_n.head.n_experts = 2;
    k_gt_n.head.k = 3;
    CHECK_THROWS_WITH(k_gt_n.validate(), Catch::Matchers::ContainsSubstring("head.k must satisfy"));

    auto negative = cfg;
    negative.recipe.rd = -0.1;
    CHECK_THROWS_WITH(negative.validate(), Catch::Matchers::ContainsSubstring("augment.rd"));

    auto missing = cfg;
    missing.data.validation = "/nonexistent/val.json";
    CHECK_THROWS_WITH(missing.validate(), Catch::Matchers::ContainsSubstring("data.validation: file not found"));
    CHECK_NOTHROW(missing.validate(false));

    auto no_data = parse_config("");
    CHECK_THROWS_WITH(no_data.validate(), Catch::Matchers::ContainsSubstring("no training data"));

    auto bad_layer = cfg;
    bad_layer.switch_layers = {5};
    CHECK_THROWS_AS(bad_layer.validate(), ConfigError);
}

TEST_CASE("sweep variants") {
    const auto base = parse_config("data.synthetic = 8\nmodel.switch_layers = 0\noutput_dir = out\n");
    std::vector<ExperimentConfig> rows;
    for (const auto* v : {"1", "2", "4"}) rows.push_back(sweep_variant(base, "n_experts", v));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].moe.n_experts == 1);
    CHECK(rows[1].moe.n_experts == 2);
    CHECK(rows[2].moe.n_experts == 4);
    CHECK(fs::path(rows[2].output_dir) == fs::path("out") / "n_experts-4");

    const std::vector<std::string> grid = {"0.05", "0.1", "1", "2"};
    std::vector<double> alphas;
    for (const auto& v : grid) alphas.push_back(sweep_variant(base, "alpha", v).moe.alpha);
    CHECK(alphas == std::vector<double>{0.05, 0.1, 1.0, 2.0});

    CHECK_THROWS_AS(sweep_variant(base, "depth", "3"), ConfigError);
}

TEST_CASE("train, evaluate and route-stats write provenance-stamped outputs") {
    const auto dir = scratch("train");
    const auto cfg = tiny_config(dir / "run");
    std::ostringstream log;
    const auto m1 = cmd_train(cfg, log);
    const auto first = read_file(dir / "run" / "metrics.json");
    cmd_train(cfg, log);
    CHECK(read_file(dir / "run" / "metrics.json") == first);
    CHECK(m1["provenance"]["config_hash"] == config_hash(cfg));

    const auto trace = read_file(dir / "run" / "trace.csv");
    CHECK(trace.rfind("# config_hash=" + config_hash(cfg) + " seed=0\n", 0) == 0);

    auto other = cfg;
    other.seed = 1;
    other.output_dir = (dir / "run1").string();
    CHECK(cmd_train(other, log)["epochs"] != m1["epochs"]);

    const auto synthetic = dir / "syn.json";
    data::save_squad(synthetic, prepare_training_data(cfg).train);
    const auto eval = cmd_evaluate(dir / "run" / "model.json", synthetic, dir / "eval.json");
    CHECK(eval["provenance"]["config_hash"] == config_hash(cfg));
    CHECK(eval["exact_match"] == m1["train"]["exact_match"]);

    const auto stats = cmd_route_stats(dir / "run" / "model.json", synthetic, dir / "routes");
    REQUIRE(stats["layers"].size() == 1);
    CHECK(stats["layers"][0]["f"].size() == 2);
    CHECK(fs::exists(dir / "routes" / "layer_1.svg"));
    CHECK(read_file(dir / "routes" / "layer_1.svg").find(config_hash(cfg)) != std::string::npos);
}

TEST_CASE("augment command output round-trips and keeps spans") {
    const auto dir = scratch("augment");
    augment::AugmentationRecipe recipe;
    recipe.languages = {"es", "fr", "de"};
    const auto out = dir / "aug.json";
    const auto report = cmd_augment(kRoot / "tests" / "fixtures" / "qa_fixture_200.json", recipe,
                                    kRoot / "data" / "lexicon.tsv", "mock", out, false);
    const auto loaded = data::load_squad(out);
    CHECK(loaded.problems.empty());
    CHECK(loaded.examples.size() == report["emitted"].get<std::size_t>());
    CHECK(data::read_json_file(out)["provenance"]["seed"] == 0);
    CHECK(fs::exists(out.string() + ".report.json"));
}

TEST_CASE("bar chart svg") {
    const auto svg = bar_chart_svg("t <1>", {"a", "b"}, {{"f", {0.5, 0.25}}, {"P", {0.4, 0.6}}}, "hash=1");
    CHECK(svg.find("<!-- hash=1 -->") != std::string::npos);
    CHECK(svg.find("t &lt;1&gt;") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK_THROWS_AS(bar_chart_svg("x", {"a"}, {{"f", {1.0, 2.0}}}), DimensionError);
}
