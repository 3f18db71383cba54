// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/model/trainer.h"

#include <numeric>
#include <sstream>

#include "moelab/core/adam.h"
#include "moelab/core/checkpoint.h"
#include "moelab/core/error.h"
#include "moelab/core/ops.h"
#include "moelab/core/rng.h"
#include "moelab/moe/routing.h"

namespace moelab::model {

namespace {

struct Prepared {
    const data::QAExample* example;
    Features features;
};

std::vector<Prepared> prepare(const data::Dataset& dataset, const Vocabulary& vocab, std::size_t max_seq_len) {
    std::vector<Prepared> out;
    out.reserve(dataset.size());
    for (const auto& ex : dataset) out.push_back({&ex, make_features(ex, vocab, max_seq_len)});
    return out;
}

double mean_entropy(const std::vector<RouteRecord>& routes) {
    if (routes.empty()) return 0.0;
    double total = 0.0;
    for (const auto& r : routes) total += moe::load_entropy(r.f);
    return total / static_cast<double>(routes.size());
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

void TrainConfig::validate() const {
    if (epochs == 0) throw ConfigError("train.epochs must be positive");
    if (batch_size == 0) throw ConfigError("train.batch_size must be positive");
    if (!(learning_rate > 0.0)) throw ConfigError("train.learning_rate must be positive");
}

TrainResult train(QAModel& model, const Vocabulary& vocab, const data::Dataset& train_set,
                  const data::Dataset* validation, const TrainConfig& config) {
    config.validate();
    if (train_set.empty()) throw ConfigError("training set is empty");
    if (vocab.size() != model.config().vocab_size) {
        throw ConfigError("vocabulary has " + std::to_string(vocab.size()) + " entries but the model expects " +
                          std::to_string(model.config().vocab_size));
    }

    TrainResult result;
    std::vector<Prepared> usable;
    for (auto& p : prepare(train_set, vocab, model.config().max_seq_len)) {
        if (!p.features.answer_in_window) {
            ++result.skipped_truncated;
            continue;
        }
        usable.push_back(std::move(p));
    }
    if (usable.empty()) throw ConfigError("no training example fits in max_seq_len");

    const Rng root(config.seed);
    Rng shuffle_rng = root.substream("shuffle");
    Rng dropout_rng = root.substream("dropout");
    Rng noise_rng = root.substream("noise");
    ForwardOptions options{&dropout_rng, &noise_rng};

    AdamConfig adam;
    adam.learning_rate = config.learning_rate;
    AdamState state;
    std::size_t step = 0;

    std::vector<std::size_t> order(usable.size());
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), 0);
        shuffle_rng.shuffle(order);
        double loss_sum = 0.0, entropy_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
            const std::size_t end = std::min(order.size(), begin + config.batch_size);
            std::vector<std::vector<std::size_t>> ids;
            for (std::size_t i = begin; i < end; ++i) ids.push_back(usable[order[i]].features.ids);

            Tape tape;
            Tape::Scope scope(tape);
            auto out = model.forward(ids, options);
            Tensor ce;
            for (std::size_t b = 0; b < ids.size(); ++b) {
                const auto& f = usable[order[begin + b]].features;
                auto part = qa_loss(out.logits[b], f.gold_start, f.gold_end, {}).ce;
                ce = ce.defined() ? ops::add(ce, part) : part;
            }
            ce = ops::scale(ce, 1.0 / static_cast<double>(ids.size()));
            auto aux = Tensor::scalar(0.0);
            for (const auto& a : out.aux_losses) aux = ops::add(aux, a);
            const auto loss = ops::add(ce, aux);
            tape.backward(loss);
            adam_step(model.parameters(), state, adam);
            tape.reset();
            ++step;

            TraceRow row;
            row.step = step;
            row.epoch = epoch;
            row.loss = loss.item();
            row.ce_loss = ce.item();
            row.aux_loss = aux.item();
            row.f_entropy = mean_entropy(out.routes);
            result.trace.push_back(row);
            for (auto& r : out.routes) result.routes.push_back({step, std::move(r)});
            loss_sum += row.loss;
            entropy_sum += row.f_entropy;
            ++batches;
        }
        EpochRecord rec;
        rec.epoch = epoch;
        rec.mean_loss = loss_sum / static_cast<double>(batches);
        rec.mean_f_entropy = entropy_sum / static_cast<double>(batches);
        if (validation != nullptr && !validation->empty()) {
            const auto scores = data::evaluate(predict(model, vocab, *validation, config.max_answer_len), *validation);
            rec.has_validation = true;
            rec.val_exact_match = scores.exact_match;
            rec.val_f1 = scores.f1;
        }
        result.epochs.push_back(rec);
    }
    return result;
}

std::map<std::string, std::string> predict(const QAModel& model, const Vocabulary& vocab,
                                           const data::Dataset& dataset, std::size_t max_answer_len,
                                           std::size_t batch_size) {
    if (batch_size == 0) throw ConfigError("predict: batch_size must be positive");
    const auto prepared = prepare(dataset, vocab, model.config().max_seq_len);
    std::map<std::string, std::string> out;
    for (std::size_t begin = 0; begin < prepared.size(); begin += batch_size) {
        const std::size_t end = std::min(prepared.size(), begin + batch_size);
        std::vector<std::vector<std::size_t>> ids;
        for (std::size_t i = begin; i < end; ++i) ids.push_back(prepared[i].features.ids);
        const auto fwd = model.forward(ids);
        for (std::size_t b = 0; b < ids.size(); ++b) {
            const auto& p = prepared[begin + b];
            const auto span = predict_span(fwd.logits[b].start.values(), fwd.logits[b].end.values(), max_answer_len,
                                           p.features.context_begin, p.features.context_end);
            out[p.example->id] =
                span.no_answer ? std::string() : span_text(*p.example, p.features, span.start, span.end);
        }
    }
    return out;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
    std::ostringstream os;
    os << "step,epoch,loss,ce_loss,aux_loss,f_entropy\n";
    for (const auto& r : trace) {
        os << r.step << ',' << r.epoch << ',' << format_double(r.loss) << ',' << format_double(r.ce_loss) << ','
           << format_double(r.aux_loss) << ',' << format_double(r.f_entropy) << '\n';
    }
    return os.str();
}

nlohmann::json to_json(const StepRoute& route) {
    const auto& r = route.record;
    return {{"step", route.step},
            {"layer", r.layer},
            {"kind", r.moe_head ? "moe_head" : "switch"},
            {"tokens", r.tokens},
            {"f", r.f},
            {"P", r.P},
            {"aux_loss", r.aux_loss},
            {"dropped_count", r.dropped_count}};
}

void save_model(const std::filesystem::path& path, const QAModel& model, const Vocabulary& vocab,
                const nlohmann::json& extra_meta) {
    nlohmann::json meta = extra_meta.is_object() ? extra_meta : nlohmann::json::object();
    meta["model_config"] = to_json(model.config());
    meta["vocabulary"] = vocab.to_json();
    save_checkpoint(path, model.parameters(), meta);
}

LoadedModel load_model(const std::filesystem::path& path) {
    auto ck = load_checkpoint(path);
    if (!ck.meta.contains("model_config") || !ck.meta.contains("vocabulary")) {
        throw ParseError(path.string() + ": checkpoint lacks model_config or vocabulary metadata");
    }
    const auto config = model_config_from_json(ck.meta["model_config"]);
    auto vocab = Vocabulary::from_json(ck.meta["vocabulary"]);
    return {QAModel::from_parameters(config, ck.parameters), std::move(vocab), ck.meta};
}

} // namespace moelab::model
