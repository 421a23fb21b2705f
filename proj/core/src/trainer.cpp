// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/trainer.hpp"

#include "cfonet/errors.hpp"
#include "cfonet/loss.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace cfonet {

namespace {

nlohmann::ordered_json vector_json(const Vector& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

int argmax(const Vector& v) {
    Eigen::Index i = 0;
    v.maxCoeff(&i);
    return static_cast<int>(i);
}

std::vector<std::string> strategy_names() { return {kStrategyNames.begin(), kStrategyNames.end()}; }
std::vector<std::string> emotion_names() { return {kEmotionNames.begin(), kEmotionNames.end()}; }

}  // namespace

std::string EpochLog::to_json() const {
    nlohmann::ordered_json j;
    j["epoch"] = epoch;
    j["train_loss"] = train_loss;
    j["dev_strategy_f1"] = dev_strategy_f1;
    j["dev_emotion_f1"] = dev_emotion_f1;
    j["lr"] = lr;
    return j.dump();
}

std::optional<int> PredictionRecord::predicted_emotion() const {
    if (!emotion_probs) return std::nullopt;
    return argmax(*emotion_probs);
}

std::string PredictionRecord::to_json() const {
    nlohmann::ordered_json j;
    j["dialogue"] = dialogue_id;
    j["turn"] = target_turn;
    j["gold_strategy"] = std::string(name_of(gold_strategy));
    j["predicted_strategy"] = std::string(name_of(strategy_from_index(predicted_strategy)));
    j["strategy_probs"] = vector_json(strategy_probs);
    j["alpha"] = alpha.size() ? vector_json(alpha) : nlohmann::ordered_json(nullptr);
    j["gold_emotion"] = nullptr;
    if (gold_emotion) j["gold_emotion"] = std::string(name_of(*gold_emotion));
    if (emotion_probs) {
        j["predicted_emotion"] = std::string(name_of(emotion_from_index(*predicted_emotion())));
        j["emotion_probs"] = vector_json(*emotion_probs);
    } else {
        j["predicted_emotion"] = nullptr;
        j["emotion_probs"] = nullptr;
    }
    j["gamma_before"] = vector_json(gamma_before);
    j["gamma_after"] = vector_json(gamma_after);
    j["gamma_updated"] = gamma_updated;
    return j.dump();
}

std::vector<std::vector<StrategyExample>> dialogue_examples(const std::vector<Dialogue>& dialogues, int max_context) {
    std::vector<std::vector<StrategyExample>> out;
    for (const auto& d : dialogues) {
        auto ex = make_examples(d, max_context);
        if (!ex.empty()) out.push_back(std::move(ex));
    }
    return out;
}

ag::Var dialogue_loss(const CfoNet& model, ag::Tape& tape, const std::vector<StrategyExample>& examples, Phase phase,
                      std::size_t* turns) {
    const ModelConfig& cfg = model.config();
    const double beta2 = cfg.ablation.no_multitask ? 0.0 : cfg.beta2;
    DialogueRunner runner(model, tape, phase);
    std::vector<ag::Var> terms;
    for (const auto& ex : examples) {
        TurnOutput out = runner.forward_turn(ex);
        terms.push_back(ag::scale(loss_strategy(out.strategy_probs, index_of(ex.gold_strategy)), cfg.beta1));
        if (beta2 != 0.0 && out.emotion_probs && ex.gold_emotion) {
            terms.push_back(ag::scale(loss_emotion(*out.emotion_probs, index_of(*ex.gold_emotion)), beta2));
        }
    }
    if (turns) *turns = examples.size();
    if (terms.empty()) return tape.constant(Matrix::Zero(1, 1));
    return ag::sum(terms);
}

double run_epoch(CfoNet& model, Adam& optimizer,
                 const std::vector<std::vector<const std::vector<StrategyExample>*>>& batches) {
    const ModelConfig& cfg = model.config();
    ParameterStore& params = model.parameters();
    double loss_sum = 0.0;
    std::size_t turn_count = 0;
    for (const auto& batch : batches) {
        ag::Tape tape;
        std::vector<ag::Var> parts;
        std::size_t batch_turns = 0;
        for (const auto* examples : batch) {
            std::size_t n = 0;
            parts.push_back(dialogue_loss(model, tape, *examples, Phase::train, &n));
            batch_turns += n;
        }
        if (batch_turns == 0) continue;
        ag::Var total = ag::sum(parts);
        const double value = total.value()(0, 0);
        if (!std::isfinite(value)) {
            throw NumericError("non-finite training loss (" + std::to_string(value) + ") after " +
                               std::to_string(optimizer.steps()) + " updates; lower train.learning_rate");
        }
        ag::Var mean = ag::scale(total, 1.0 / static_cast<double>(batch_turns));
        params.zero_grad();
        tape.backward(mean);
        params.clip_grad_norm(cfg.grad_clip);
        optimizer.step(params);
        model.sync_frozen();
        loss_sum += value;
        turn_count += batch_turns;
    }
    return turn_count == 0 ? 0.0 : loss_sum / static_cast<double>(turn_count);
}

TrainResult train(CfoNet& model, const std::vector<Dialogue>& train_set, const std::vector<Dialogue>& dev_set,
                  const std::function<void(const EpochLog&)>& on_epoch) {
    const ModelConfig& cfg = model.config();
    const auto train_examples = dialogue_examples(train_set, cfg.max_context);
    if (train_examples.empty()) throw DataError("training split has no labeled persuader turns");
    if (dialogue_examples(dev_set, cfg.max_context).empty()) {
        throw DataError("dev split has no labeled persuader turns");
    }

    AdamOptions opts;
    opts.learning_rate = cfg.learning_rate;
    Adam optimizer(opts);
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

    std::vector<std::size_t> order(train_examples.size());
    std::iota(order.begin(), order.end(), 0);

    TrainResult result;
    std::vector<Matrix> best = model.parameters().snapshot();
    double best_f1 = -1.0;
    int since_best = 0;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<std::vector<const std::vector<StrategyExample>*>> batches;
        for (std::size_t i = 0; i < order.size(); i += static_cast<std::size_t>(cfg.batch_size)) {
            auto& b = batches.emplace_back();
            for (std::size_t j = i; j < std::min(order.size(), i + static_cast<std::size_t>(cfg.batch_size)); ++j) {
                b.push_back(&train_examples[order[j]]);
            }
        }

        EpochLog entry;
        entry.epoch = epoch;
        entry.lr = cfg.learning_rate;
        entry.train_loss = run_epoch(model, optimizer, batches);
        const Evaluation dev = evaluate(model, dev_set);
        entry.dev_strategy_f1 = dev.strategy.macro_f1;
        entry.dev_emotion_f1 = dev.emotion ? dev.emotion->macro_f1 : 0.0;
        result.log.push_back(entry);
        if (on_epoch) on_epoch(entry);

        if (entry.dev_strategy_f1 > best_f1) {
            best_f1 = entry.dev_strategy_f1;
            best = model.parameters().snapshot();
            result.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            result.stopped_early = epoch < cfg.epochs;
            break;
        }
    }
    model.parameters().restore(best);
    model.sync_frozen();
    result.best_dev_f1 = std::max(best_f1, 0.0);
    return result;
}

Evaluation evaluate(const CfoNet& model, const std::vector<Dialogue>& dialogues) {
    const auto groups = dialogue_examples(dialogues, model.config().max_context);
    if (groups.empty()) throw DataError("evaluation split has no labeled persuader turns");

    Evaluation ev;
    std::vector<int> s_pred, s_gold, e_pred, e_gold;
    for (const auto& examples : groups) {
        ag::Tape tape(false);
        DialogueRunner runner(model, tape, Phase::eval);
        for (const auto& ex : examples) {
            const TurnOutput out = runner.forward_turn(ex);
            PredictionRecord rec;
            rec.dialogue_id = ex.dialogue_id;
            rec.target_turn = ex.target_turn;
            rec.gold_strategy = ex.gold_strategy;
            rec.predicted_strategy = out.prediction.predicted_strategy;
            rec.strategy_probs = out.prediction.strategy_probs;
            rec.alpha = out.prediction.alpha;
            rec.gold_emotion = ex.gold_emotion;
            rec.emotion_probs = out.prediction.emotion_probs;
            rec.gamma_before = out.trace.gamma_before;
            rec.gamma_after = out.trace.gamma_after;
            rec.gamma_updated = out.trace.gamma_updated;
            s_pred.push_back(rec.predicted_strategy);
            s_gold.push_back(index_of(rec.gold_strategy));
            if (rec.gold_emotion && rec.emotion_probs) {
                e_pred.push_back(*rec.predicted_emotion());
                e_gold.push_back(index_of(*rec.gold_emotion));
            }
            ev.records.push_back(std::move(rec));
        }
    }
    ev.strategy = compute_metrics(s_pred, s_gold, kNumStrategies, strategy_names());
    if (!e_gold.empty()) ev.emotion = compute_metrics(e_pred, e_gold, kNumEmotions, emotion_names());
    return ev;
}

}  // namespace cfonet
