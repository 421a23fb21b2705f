// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance runner: one PASS/FAIL line per criterion on stdout, progress on
// stderr. Pass criterion numbers as arguments to run a subset.

#include "fixtures.hpp"
#include "oracles.hpp"

#include <cfonet/checkpoint.hpp>
#include <cfonet/config.hpp>
#include <cfonet/encoder.hpp>
#include <cfonet/fusion.hpp>
#include <cfonet/memory.hpp>
#include <cfonet/metrics.hpp>
#include <cfonet/quadrant.hpp>
#include <cfonet/synthetic.hpp>
#include <cfonet/trainer.hpp>
#include <cfonet_cli/cli.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace cfonet;

namespace {

using Clock = std::chrono::steady_clock;

std::filesystem::path fs_path(const std::string& s) { return std::filesystem::path(s); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sci(double v) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(2) << v;
    return s.str();
}

std::string fmt(double v, int precision = 4) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << v;
    return s.str();
}

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = unit(rng);
    return m;
}

// ---------------------------------------------------------------- 1. gamma

Outcome gamma_suite() {
    const auto start = Clock::now();
    const double mus[] = {0.05, 0.2, 0.5, 1.0};
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, kNumStrategies - 1);
    int failures = 0;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int x = i % 3;
        const double y = 0.34 + 0.66 * static_cast<double>((i * 37) % 100) / 99.0;
        const double mu = mus[(i / 3) % 4];
        Vector probs = Vector::Constant(3, (1.0 - y) / 2.0);
        probs(x) = y;
        MemoryState state;
        for (int s = 0; s < kNumStrategies; ++s) state.gamma(s) = 2.0 * unit(rng);
        const Vector before = state.gamma;
        const int selected = pick(rng);
        Vector mask = Vector::Zero(kNumStrategies);
        mask(selected) = 1.0;
        update_gamma(state, mask, probs, mu);

        for (int s = 0; s < kNumStrategies; ++s) {
            const double expected = oracle::gamma_entry(before(s), s == selected, x, y, mu, 0.0, 2.0);
            const double err = std::abs(state.gamma(s) - expected);
            worst = std::max(worst, err);
            if (err > 1e-9) ++failures;
        }
        const double delta = feedback_delta(y, mu);
        if (!(delta > mu / std::exp(1.0) && delta <= mu)) ++failures;
        if (x == 1 && std::memcmp(state.gamma.data(), before.data(), sizeof(double) * kNumStrategies) != 0) ++failures;
        if (state.feedback_pool.size() != 1 || state.feedback_pool[0].strategy != selected) ++failures;
    }
    const double t = seconds_since(start);
    return {failures == 0 && t < 1.0,
            "100 points, max |err| " + sci(worst) + ", " + std::to_string(failures) + " failures, " +
                fmt(t, 3) + " s"};
}

// ---------------------------------------------------------------- 2. masks

Outcome mask_suite() {
    const auto start = Clock::now();
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> kdist(1, kNumStrategies);
    int failures = 0, with_ties = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Vector alpha(kNumStrategies);
        const bool tied = trial % 2 == 0;
        for (int i = 0; i < kNumStrategies; ++i) alpha(i) = tied ? std::floor(unit(rng) * 4.0) + 1.0 : unit(rng);
        alpha /= alpha.sum();
        std::set<double> distinct(alpha.data(), alpha.data() + alpha.size());
        if (distinct.size() < static_cast<std::size_t>(kNumStrategies)) ++with_ties;
        const int k = kdist(rng);
        const MaskPair m = make_masks(alpha, k);
        const oracle::Vec scores(alpha.data(), alpha.data() + alpha.size());
        Vector expected = Vector::Zero(kNumStrategies);
        for (int i : oracle::top_k_sorted(scores, k)) expected(i) = 1.0;
        Vector expected_f = Vector::Zero(kNumStrategies);
        expected_f(oracle::top_k_sorted(scores, 1)[0]) = 1.0;
        if (m.pool != expected || m.feedback != expected_f) ++failures;
        if (!(m.feedback.array() <= m.pool.array()).all()) ++failures;
        if (m.pool.sum() != k || m.feedback.sum() != 1.0) ++failures;
    }
    const double t = seconds_since(start);
    return {failures == 0 && t < 5.0 && with_ties > 0,
            "1000 draws (" + std::to_string(with_ties) + " with ties), " + std::to_string(failures) + " failures, " +
                fmt(t, 3) + " s"};
}

// ---------------------------------------------------------------- 3. gradients

Outcome gradient_suite() {
    const auto start = Clock::now();
    constexpr int kD = 8;
    std::vector<std::pair<std::string, oracle::GradCheck>> checks;

    {
        ParameterStore store;
        EncoderConfig ec;
        ec.embed_dim = 5;
        ec.hidden_dim = 4;
        ec.n_heads = 2;
        Encoder encoder(ec, 12, store);
        fixture::randomize(store, 3);
        encoder.reset_padding_row();
        const std::vector<std::vector<int>> tokens = {{2, 3}, {4, 5, 6}, {7}};
        const Speaker speakers[] = {Speaker::persuader, Speaker::persuadee, Speaker::persuader};
        const Matrix r = random_matrix(3, kD, 4);
        checks.emplace_back("encoder attention", oracle::grad_check(store, [&](ag::Tape& tape) {
            return ag::sum_all(ag::cwise_mul(encoder.encode_context(tape, tokens, speakers).contextual,
                                             tape.constant(r)));
        }));
    }
    {
        ParameterStore store;
        MemoryModule memory(kD, store);
        Parameter& c = store.add("input.C", 3, kD);
        fixture::randomize(store, 5);
        checks.emplace_back("strategy head", oracle::grad_check(store, [&](ag::Tape& tape) {
            return ag::neg_log_prob(memory.strategy_distribution(tape, tape.param(c)), 6, 1e-12);
        }));
        checks.emplace_back("emotion head", oracle::grad_check(store, [&](ag::Tape& tape) {
            return ag::neg_log_prob(memory.predict_emotion(tape, ag::slice_rows(tape.param(c), 0, 2)), 2, 1e-12);
        }));
    }
    for (FusionVariant v : {FusionVariant::mlp, FusionVariant::double_head, FusionVariant::co_attention}) {
        ParameterStore store;
        Fusion fusion(v, kD, 4, store);
        Parameter& c = store.add("input.C", 3, kD);
        Parameter& s = store.add("input.S", 4, kD);
        fixture::randomize(store, 6);
        checks.emplace_back("fusion " + std::string(name_of(v)), oracle::grad_check(store, [&](ag::Tape& tape) {
            return ag::neg_log_prob(fusion.fuse(tape, tape.param(c), tape.param(s)).strategy_probs, 1, 1e-12);
        }));
    }
    bool masked_rows_zero = true;
    double st_alpha_error = 0.0;
    {
        ParameterStore store;
        Fusion fusion(FusionVariant::double_head, kD, kNumStrategies, store);
        Parameter& s = store.add("memory.strategy_embedding", kNumStrategies, kD);
        Parameter& logits = store.add("alpha.logits", kNumStrategies, 1);
        Parameter& c = store.add("input.C", 3, kD);
        fixture::randomize(store, 7);
        Vector mask;
        {
            ag::Tape probe(false);
            mask = make_masks(ag::softmax(probe.param(logits)).value().col(0), 2).pool;
        }
        auto loss_with = [&](ag::Tape& tape, ag::Var alpha) {
            ag::Var masked = apply_mask(tape.param(s), mask, alpha);
            return ag::neg_log_prob(fusion.fuse(tape, tape.param(c), masked).strategy_probs, 3, 1e-12);
        };
        checks.emplace_back("straight-through mask (S)",
                            oracle::grad_check(store, [&](ag::Tape& tape) { return loss_with(tape, ag::Var{}); },
                                               {"memory.strategy_embedding"}));
        store.zero_grad();
        ag::Tape tape;
        ag::Var alpha = ag::softmax(tape.param(logits));
        tape.backward(loss_with(tape, alpha));
        for (int i = 0; i < kNumStrategies; ++i)
            if (mask(i) == 0.0 && !s.grad.row(i).isZero(0.0)) masked_rows_zero = false;
        // The estimator hands alpha the gradient of a soft mask at the hard point.
        const Matrix g_alpha = tape.grad(alpha.id);
        for (int i = 0; i < kNumStrategies; ++i) {
            auto at = [&](double mi) {
                Vector m = mask;
                m(i) = mi;
                ag::Tape t(false);
                ag::Var soft = ag::scale_rows(t.param(s), m);
                return ag::neg_log_prob(fusion.fuse(t, t.param(c), soft).strategy_probs, 3, 1e-12).value()(0, 0);
            };
            const double numeric = (at(mask(i) + 1e-4) - at(mask(i) - 1e-4)) / 2e-4;
            st_alpha_error = std::max(st_alpha_error, std::abs(numeric - g_alpha(i, 0)) /
                                                          std::max({std::abs(numeric), std::abs(g_alpha(i, 0)), 1e-6}));
        }
    }
    const double t = seconds_since(start);
    bool ok = masked_rows_zero && st_alpha_error < 1e-3 && t < 120.0;
    std::string detail;
    for (const auto& [name, r] : checks) {
        ok = ok && r.max_rel_error < 1e-3;
        std::cerr << "  [3] " << name << ": max rel err " << r.max_rel_error << " over " << r.checked << " entries\n";
        if (r.max_rel_error >= 1e-3) detail += name + " failed (" + r.worst + "); ";
    }
    std::cerr << "  [3] straight-through alpha: max rel err " << st_alpha_error << "\n";
    double worst = st_alpha_error;
    for (const auto& c : checks) worst = std::max(worst, c.second.max_rel_error);
    detail += std::to_string(checks.size() + 1) + " checks, max rel err " + sci(worst) + ", masked rows zero=" + (masked_rows_zero ? "yes" : "no") +
              ", " + fmt(t, 2) + " s";
    return {ok, detail};
}

// ---------------------------------------------------------------- 4. distributions

Outcome distribution_suite() {
    const auto corpus = fixture::synthetic(60, 4, 5);
    const Vocab vocab = build_vocab(corpus, 1);
    std::vector<std::unique_ptr<CfoNet>> models;
    for (FusionVariant v : {FusionVariant::mlp, FusionVariant::double_head, FusionVariant::co_attention}) {
        ModelConfig config = fixture::tiny_config(v);
        config.top_k = 3;
        models.push_back(std::make_unique<CfoNet>(config, vocab));
    }
    int passes = 0, checked = 0, failures = 0;
    double worst = 0.0;
    auto check = [&](const Vector& p) {
        ++checked;
        const double err = std::abs(p.sum() - 1.0);
        worst = std::max(worst, err);
        if (err > 1e-6 || p.minCoeff() < 0.0 || !p.allFinite()) ++failures;
    };
    for (std::size_t d = 0; passes < 500; ++d) {
        CfoNet& model = *models[d % models.size()];
        fixture::randomize(model.parameters(), 100 + d, d % 2 == 0 ? 0.5 : 2.0);
        model.sync_frozen();
        ag::Tape tape(false);
        DialogueRunner runner(model, tape, d % 2 == 0 ? Phase::train : Phase::eval);
        for (const auto& ex : make_examples(corpus[d % corpus.size()], 5)) {
            if (passes == 500) break;
            const TurnOutput out = runner.forward_turn(ex);
            check(out.prediction.strategy_probs);
            check(out.prediction.alpha);
            if (out.prediction.emotion_probs) check(*out.prediction.emotion_probs);
            if (out.trace.context_head) check(*out.trace.context_head);
            if (out.trace.strategy_head) check(*out.trace.strategy_head);
            ++passes;
        }
    }
    return {failures == 0, std::to_string(passes) + " forward passes, " + std::to_string(checked) +
                               " distributions, max |sum-1| " + sci(worst)};
}

// ---------------------------------------------------------------- 8. metrics

Outcome metrics_oracle() {
    int failures = 0;
    auto near = [&](double a, double b) {
        if (std::abs(a - b) > 1e-9) ++failures;
    };
    const std::vector<int> same = {0, 1, 2, 1, 0};
    const auto perfect = compute_metrics(same, same, 3);
    near(perfect.macro_precision, 1.0);
    near(perfect.macro_recall, 1.0);
    near(perfect.macro_f1, 1.0);

    const auto two = compute_metrics({0, 0, 1, 1}, {0, 1, 1, 1}, 2);
    near(two.per_class[0].precision, 0.5);
    near(two.per_class[0].recall, 1.0);
    near(two.per_class[0].f1, 2.0 / 3.0);
    near(two.per_class[1].precision, 1.0);
    near(two.per_class[1].recall, 2.0 / 3.0);
    near(two.per_class[1].f1, 0.8);
    near(two.macro_f1, (2.0 / 3.0 + 0.8) / 2.0);

    const auto single = compute_metrics({0, 0, 0, 0, 0, 0}, {0, 0, 1, 1, 2, 2}, 3);
    near(single.per_class[0].f1, 0.5);
    near(single.per_class[1].f1, 0.0);
    near(single.per_class[2].f1, 0.0);
    near(single.macro_f1, 0.5 / 3.0);
    return {failures == 0, "3 worked examples, " + std::to_string(failures) + " mismatches; macro-F1 " +
                               fmt(two.macro_f1) + " and " + fmt(single.macro_f1)};
}

// ---------------------------------------------------------------- 9. determinism

Outcome determinism() {
    fixture::TempDir dir;
    std::ostringstream sink, err;
    const std::string data = (dir / "data").string();
    const std::vector<std::string> small = {"--set", "synthetic.dialogues=80", "--set", "model.embed_dim=8",
                                            "--set", "model.hidden_dim=8",     "--set", "train.epochs=3",
                                            "--set", "train.max_context=3",    "--seed", "17"};
    auto with = [&](std::vector<std::string> args) {
        args.insert(args.end(), small.begin(), small.end());
        return args;
    };
    if (cli::run(with({"synth", "--out", data}), sink, err) != 0) return {false, "synth failed: " + err.str()};
    const std::string a = (dir / "run_a").string(), b = (dir / "run_b").string();
    if (cli::run(with({"train", "--data", data, "--out", a}), sink, err) != 0) return {false, "train failed: " + err.str()};
    if (cli::run(with({"train", "--data", data, "--out", b}), sink, err) != 0) return {false, "train failed: " + err.str()};
    const std::string log_a = fixture::read_file(fs_path(a) / "logs" / "metrics.jsonl");
    const std::string log_b = fixture::read_file(fs_path(b) / "logs" / "metrics.jsonl");
    const bool logs_equal = !log_a.empty() && log_a == log_b;
    const bool ckpt_equal = fixture::read_file(fs_path(a) / "model.ckpt") == fixture::read_file(fs_path(b) / "model.ckpt");

    // Round trip: predictions of the reloaded checkpoint equal the original's.
    const LoadedModel original = load_checkpoint(fs_path(a) / "model.ckpt");
    const std::string bytes = serialize_checkpoint(*original.model, original.config);
    const LoadedModel reloaded = deserialize_checkpoint(bytes);
    const bool resave_equal = serialize_checkpoint(*reloaded.model, reloaded.config) == bytes;
    LoadOptions opts;
    const auto test = load_dialogues(fs_path(data) / "test.jsonl", opts);
    const Evaluation ea = evaluate(*original.model, test);
    const Evaluation eb = evaluate(*reloaded.model, test);
    std::size_t compared = 0;
    bool predictions_equal = ea.records.size() >= 20;
    for (std::size_t i = 0; i < std::min<std::size_t>(20, ea.records.size()); ++i) {
        const auto& x = ea.records[i];
        const auto& y = eb.records[i];
        predictions_equal = predictions_equal && x.strategy_probs == y.strategy_probs && x.alpha == y.alpha &&
                            x.predicted_strategy == y.predicted_strategy && x.gamma_after == y.gamma_after &&
                            x.emotion_probs == y.emotion_probs;
        ++compared;
    }
    return {logs_equal && predictions_equal && resave_equal,
            std::string("metric logs ") + (logs_equal ? "identical" : "differ") + ", checkpoints " +
                (ckpt_equal ? "identical" : "differ") + ", " + std::to_string(compared) + " round-trip predictions " +
                (predictions_equal ? "equal" : "differ") + ", re-save " + (resave_equal ? "identical" : "differs")};
}

// ---------------------------------------------------------------- 10. quadrant

Outcome quadrant() {
    SyntheticConfig config = load_config(fixture::source_path("configs/synthetic.cfg")).synthetic;
    config.dialogues = 5000;
    config.p_repeat_after_pos = 1.0;
    config.p_avoid_after_neg = 1.0;
    const auto forced = quadrant_analysis(generate_synthetic(config, 10));
    const bool forced_ok = forced.positive.reuse_rate() == 1.0 && forced.negative.reuse_rate() == 0.0 &&
                           forced.negative.not_reuse_rate() == 1.0 && forced.positive.total() > 0;

    config.p_repeat_after_pos = 0.63;
    config.p_avoid_after_neg = 0.75;
    const auto soft = quadrant_analysis(generate_synthetic(config, 11));
    auto se = [](double p, std::size_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); };
    const double pos = soft.positive.reuse_rate();
    const double neg = soft.negative.not_reuse_rate();
    const double se_pos = se(0.63, soft.positive.total());
    const double se_neg = se(0.75, soft.negative.total());
    const bool soft_ok = std::abs(pos - 0.63) <= 3 * se_pos && std::abs(neg - 0.75) <= 3 * se_neg;
    return {forced_ok && soft_ok,
            "forced " + fmt(forced.positive.reuse_rate()) + "/" + fmt(forced.negative.reuse_rate()) +
                "; P(reuse|pos) " + fmt(pos) + " (n " + std::to_string(soft.positive.total()) + ", 3SE " +
                fmt(3 * se_pos) + "), P(not reuse|neg) " + fmt(neg) + " (n " +
                std::to_string(soft.negative.total()) + ", 3SE " + fmt(3 * se_neg) + ")"};
}

// ---------------------------------------------------------------- 5-7. training

struct TrainedRun {
    double dev_f1 = 0.0;
    std::vector<Vector> alphas;
    int epochs = 0;
    double seconds = 0.0;
};

TrainedRun train_run(const ExperimentConfig& base, const DatasetSplit& data, std::uint64_t seed,
                     const std::function<void(ModelConfig&)>& tweak, const std::string& label) {
    const auto start = Clock::now();
    ModelConfig config = base.model;
    config.seed = seed;
    tweak(config);
    CfoNet model(config, build_vocab(data.train, config.min_freq));
    const TrainResult result = train(model, data.train, data.dev);
    const Evaluation dev = evaluate(model, data.dev);
    TrainedRun run;
    run.dev_f1 = dev.strategy.macro_f1;
    run.epochs = static_cast<int>(result.log.size());
    for (const auto& r : dev.records)
        if (r.alpha.size() > 0) run.alphas.push_back(r.alpha);
    run.seconds = seconds_since(start);
    std::cerr << "  " << label << " seed " << seed << ": dev M-F1 " << fmt(run.dev_f1) << " after " << run.epochs
              << " epochs (" << fmt(run.seconds, 1) << " s)\n";
    return run;
}

DatasetSplit synthetic_split(const ExperimentConfig& config, std::uint64_t seed) {
    return split(generate_synthetic(config.synthetic, seed), config.data.split, config.data.split_seed);
}

struct TrainingCriteria {
    Outcome memory, fusion, top_k;
};

TrainingCriteria training_criteria(bool want5, bool want6, bool want7) {
    const ExperimentConfig base = load_config(fixture::source_path("configs/synthetic.cfg"));
    TrainingCriteria out;
    std::vector<TrainedRun> full;
    const auto start = Clock::now();
    const int seeds = want5 ? 5 : 1;
    std::vector<double> gaps;
    std::ostringstream per_seed;
    for (int s = 1; s <= seeds; ++s) {
        const DatasetSplit data = synthetic_split(base, 1000 + static_cast<std::uint64_t>(s));
        if (s == 1) std::cerr << "  corpus: " << data.train.size() << " train / " << data.dev.size() << " dev dialogues\n";
        full.push_back(train_run(base, data, static_cast<std::uint64_t>(s), [](ModelConfig&) {}, "[5] full"));
        if (want5) {
            const TrainedRun ablated = train_run(
                base, data, static_cast<std::uint64_t>(s), [](ModelConfig& c) { c.ablation.no_memory = true; },
                "[5] no_memory");
            gaps.push_back(full.back().dev_f1 - ablated.dev_f1);
            per_seed << (s > 1 ? " " : "") << std::showpos << fmt(100 * gaps.back(), 2) << std::noshowpos;
        }
    }
    const double elapsed5 = seconds_since(start);
    if (want5) {
        std::vector<double> sorted = gaps;
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[sorted.size() / 2];
        out.memory = {median >= 0.03 && elapsed5 <= 1800.0,
                      "median full - no_memory = " + fmt(100 * median, 2) + " points (per seed: " + per_seed.str() +
                          "; need >= +3.00), " + fmt(elapsed5 / 60.0, 1) + " min"};
    }

    const DatasetSplit data1 = synthetic_split(base, 1001);
    std::vector<std::vector<Vector>> alpha_sets;
    for (const auto& r : full) alpha_sets.push_back(r.alphas);
    if (want6) {
        std::map<std::string, double> f1 = {{"double_head", full.front().dev_f1}};
        for (FusionVariant v : {FusionVariant::mlp, FusionVariant::co_attention}) {
            const TrainedRun r = train_run(base, data1, 1, [v](ModelConfig& c) { c.fusion = v; },
                                           "[6] " + std::string(name_of(v)));
            f1[std::string(name_of(v))] = r.dev_f1;
            alpha_sets.push_back(r.alphas);
        }
        double lo = 1.0, hi = 0.0;
        std::string listing;
        for (const auto& [name, value] : f1) {
            lo = std::min(lo, value);
            hi = std::max(hi, value);
            listing += name + " " + fmt(value) + ", ";
        }
        out.fusion = {hi - lo <= 0.10, listing + "spread " + fmt(100 * (hi - lo), 2) + " points (limit 10)"};
    }
    if (want7) {
        const TrainedRun k1 = train_run(base, data1, 1, [](ModelConfig& c) { c.top_k = 1; }, "[7] top_k=1");
        alpha_sets.push_back(k1.alphas);
        bool monotone = true;
        std::string curve;
        for (const auto& alphas : alpha_sets) {
            if (alphas.empty()) continue;
            for (int k = 1; k < kNumStrategies; ++k)
                if (confidence_at_k(alphas, k) < confidence_at_k(alphas, k + 1)) monotone = false;
        }
        for (int k = 1; k <= 4; ++k) curve += (k > 1 ? " / " : "") + fmt(confidence_at_k(alpha_sets.front(), k), 3);
        out.top_k = {monotone, std::to_string(alpha_sets.size()) + " trained models non-increasing=" +
                                   (monotone ? "yes" : "no") + "; confidence@1..4 " + curve +
                                   "; M-F1 k=1 " + fmt(k1.dev_f1) + " vs k=2 " + fmt(full.front().dev_f1) +
                                   " (diff " + fmt(100 * (k1.dev_f1 - full.front().dev_f1), 2) + " points, reported)"};
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
    auto want = [&](int id) { return wanted.empty() || wanted.count(id) != 0; };

    const std::map<int, std::string> names = {
        {1, "gamma update arithmetic"},  {2, "top-k masks"},         {3, "finite-difference gradients"},
        {4, "output distributions"},     {5, "memory ablation gap"}, {6, "fusion variants cluster"},
        {7, "confidence@k monotone"},    {8, "metrics oracle"},      {9, "determinism and round trip"},
        {10, "quadrant rates"},
    };
    std::map<int, Outcome> results;
    auto run = [&](int id, const std::function<Outcome()>& fn) {
        if (!want(id)) return;
        const auto start = Clock::now();
        try {
            results[id] = fn();
        } catch (const std::exception& e) {
            results[id] = {false, std::string("exception: ") + e.what()};
        }
        std::cerr << "  [" << id << "] done in " << fmt(seconds_since(start), 2) << " s\n";
    };

    run(1, gamma_suite);
    run(2, mask_suite);
    run(3, gradient_suite);
    run(4, distribution_suite);
    run(8, metrics_oracle);
    run(9, determinism);
    run(10, quadrant);
    if (want(5) || want(6) || want(7)) {
        try {
            const TrainingCriteria t = training_criteria(want(5), want(6), want(7));
            if (want(5)) results[5] = t.memory;
            if (want(6)) results[6] = t.fusion;
            if (want(7)) results[7] = t.top_k;
        } catch (const std::exception& e) {
            for (int id : {5, 6, 7})
                if (want(id)) results[id] = {false, std::string("exception: ") + e.what()};
        }
    }

    int failed = 0;
    for (const auto& [id, r] : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << " [" << id << "] " << names.at(id) << ": " << r.detail << "\n";
        failed += !r.pass;
    }
    std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
