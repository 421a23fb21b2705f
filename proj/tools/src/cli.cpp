// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet_cli/cli.hpp"

#include <cfonet/checkpoint.hpp>
#include <cfonet/compare.hpp>
#include <cfonet/config.hpp>
#include <cfonet/errors.hpp>
#include <cfonet/metrics.hpp>
#include <cfonet/quadrant.hpp>
#include <cfonet/synthetic.hpp>
#include <cfonet/trainer.hpp>
#include <cfonet/vocab.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;

namespace cfonet::cli {

namespace {

struct Options {
    std::string config;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::string data;
    std::string out;
    std::string checkpoint;
    std::string split = "dev";
    std::string format = "text";
    std::string mapping;
    std::string baseline;
    std::vector<std::string> runs;
};

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void require(const std::string& value, const std::string& flag, const std::string& command) {
    if (value.empty()) throw ConfigError(command + " requires " + flag);
}

std::vector<Override> overrides_of(const Options& o) {
    std::vector<Override> list;
    for (const auto& s : o.sets) list.push_back(parse_override(s));
    if (o.seed) list.emplace_back("train.seed", std::to_string(*o.seed));
    return list;
}

ExperimentConfig experiment(const Options& o) {
    const auto list = overrides_of(o);
    return o.config.empty() ? parse_config("", list) : load_config(o.config, list);
}

/// Effective config with the provenance of every override.
std::string effective_text(const Options& o, const ExperimentConfig& config) {
    std::ostringstream s;
    s << "; effective configuration\n";
    s << "; base: " << (o.config.empty() ? "(defaults)" : o.config) << "\n";
    for (const auto& [k, v] : overrides_of(o)) s << "; override: " << k << "=" << v << "\n";
    s << config.to_text();
    return s.str();
}

std::string ids_manifest(const std::vector<Dialogue>& dialogues) {
    std::string s;
    for (const auto& d : dialogues) s += d.id + "\n";
    return s;
}

void write_splits(const fs::path& dir, const std::vector<Dialogue>& all, const DatasetSplit& parts, std::ostream& out) {
    fs::create_directories(dir);
    save_dialogues(dir / "dialogues.jsonl", all);
    const std::pair<const char*, const std::vector<Dialogue>*> named[] = {
        {"train", &parts.train}, {"dev", &parts.dev}, {"test", &parts.test}};
    for (const auto& [name, list] : named) {
        save_dialogues(dir / (std::string(name) + ".jsonl"), *list);
        write_file(dir / (std::string(name) + ".ids"), ids_manifest(*list));
        out << name << ": " << list->size() << " dialogues\n";
    }
}

LoadOptions load_options(const ExperimentConfig& config, const Options& o) {
    LoadOptions opts;
    opts.format = config.data.format;
    opts.thresholds = config.model.thresholds;
    const std::string mapping = o.mapping.empty() ? config.data.mapping : o.mapping;
    if (opts.format == CorpusFormat::p4g_csv) {
        if (mapping.empty()) throw ConfigError("p4g_csv input requires --mapping or data.mapping");
        opts.mapping = ColumnMapping::from_file(mapping);
    }
    return opts;
}

/// A split name inside a prepared directory, or a JSONL file.
std::vector<Dialogue> split_dialogues(const Options& o, const ExperimentConfig& config) {
    fs::path path = o.data;
    if (fs::is_directory(path)) path /= o.split + ".jsonl";
    LoadOptions opts;
    opts.thresholds = config.model.thresholds;
    auto dialogues = load_dialogues(path, opts);
    if (dialogues.empty()) throw DataError("split '" + path.string() + "' is empty");
    return dialogues;
}

int cmd_prepare(const Options& o, std::ostream& out) {
    require(o.data, "--data", "prepare");
    require(o.out, "--out", "prepare");
    const ExperimentConfig config = experiment(o);
    LoadReport report;
    const auto dialogues = load_dialogues(o.data, load_options(config, o), &report);
    const auto parts = split(dialogues, config.data.split, config.data.split_seed);
    write_splits(o.out, dialogues, parts, out);
    write_file(fs::path(o.out) / "effective.cfg", effective_text(o, config));
    if (report.unknown_strategies) {
        out << report.unknown_strategies << " unrecognized strategy label(s) mapped to none\n";
    }
    for (const auto& w : report.warnings) out << "warning: " << w << "\n";
    return 0;
}

int cmd_synth(const Options& o, std::ostream& out) {
    require(o.out, "--out", "synth");
    const ExperimentConfig config = experiment(o);
    const std::uint64_t seed = o.seed.value_or(config.model.seed);
    const auto dialogues = generate_synthetic(config.synthetic, seed);
    const auto parts = split(dialogues, config.data.split, config.data.split_seed);
    write_splits(o.out, dialogues, parts, out);
    write_file(fs::path(o.out) / "effective.cfg", effective_text(o, config));
    return 0;
}

void write_reports(const fs::path& dir, const std::string& split, const Evaluation& ev) {
    write_file(dir / (split + "_strategy.json"), ev.strategy.to_json());
    write_file(dir / (split + "_strategy.txt"), ev.strategy.to_text());
    if (ev.emotion) {
        write_file(dir / (split + "_emotion.json"), ev.emotion->to_json());
        write_file(dir / (split + "_emotion.txt"), ev.emotion->to_text());
    }
    std::string lines;
    for (const auto& r : ev.records) lines += r.to_json() + "\n";
    write_file(dir / (split + "_predictions.jsonl"), lines);
}

void print_evaluation(const Evaluation& ev, const std::string& format, std::ostream& out) {
    if (format == "json") {
        nlohmann::json j;
        j["strategy"] = nlohmann::json::parse(ev.strategy.to_json());
        j["emotion"] = ev.emotion ? nlohmann::json::parse(ev.emotion->to_json()) : nlohmann::json(nullptr);
        out << j.dump(2) << "\n";
        return;
    }
    out << "strategy\n" << ev.strategy.to_text();
    if (ev.emotion) out << "\nemotion\n" << ev.emotion->to_text();
}

int cmd_train(const Options& o, std::ostream& out) {
    require(o.data, "--data", "train");
    require(o.out, "--out", "train");
    ExperimentConfig config = experiment(o);
    const fs::path data(o.data);
    LoadOptions opts;
    opts.thresholds = config.model.thresholds;
    const auto train_set = load_dialogues(data / "train.jsonl", opts);
    const auto dev_set = load_dialogues(data / "dev.jsonl", opts);

    const fs::path dir(o.out);
    fs::create_directories(dir / "logs");
    fs::create_directories(dir / "reports");
    write_file(dir / "effective.cfg", effective_text(o, config));

    CfoNet model(config.model, build_vocab(train_set, config.model.min_freq));
    std::ofstream log(dir / "logs" / "metrics.jsonl", std::ios::binary | std::ios::trunc);
    const auto& ab = config.model.ablation;
    out << "training: " << model.parameters().scalar_count() << " parameters, fusion "
        << name_of(config.model.fusion) << ", ablation no_memory=" << ab.no_memory
        << " no_multitask=" << ab.no_multitask << " no_fusion=" << ab.no_fusion << "\n";
    const TrainResult result = train(model, train_set, dev_set, [&](const EpochLog& e) {
        log << e.to_json() << "\n";
        log.flush();
        out << "epoch " << e.epoch << " loss " << e.train_loss << " dev M-F1 " << e.dev_strategy_f1 << "\n";
    });
    save_checkpoint(dir / "model.ckpt", model, config);

    const Evaluation dev = evaluate(model, dev_set);
    write_reports(dir / "reports", "dev", dev);
    nlohmann::ordered_json summary;
    summary["best_epoch"] = result.best_epoch;
    summary["best_dev_strategy_f1"] = result.best_dev_f1;
    summary["epochs_run"] = result.log.size();
    summary["stopped_early"] = result.stopped_early;
    summary["ablation"] = {{"no_memory", ab.no_memory}, {"no_multitask", ab.no_multitask}, {"no_fusion", ab.no_fusion}};
    summary["fusion"] = std::string(name_of(config.model.fusion));
    write_file(dir / "reports" / "train_summary.json", summary.dump(2) + "\n");
    out << "best epoch " << result.best_epoch << ", dev strategy M-F1 " << result.best_dev_f1 << "\n";
    return 0;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
    require(o.checkpoint, "--checkpoint", "evaluate");
    require(o.data, "--data", "evaluate");
    LoadedModel loaded = load_checkpoint(o.checkpoint);
    const auto dialogues = split_dialogues(o, loaded.config);
    const Evaluation ev = evaluate(*loaded.model, dialogues);
    if (!o.out.empty()) write_reports(fs::path(o.out) / "reports", o.split, ev);
    print_evaluation(ev, o.format, out);
    return 0;
}

int cmd_predict(const Options& o, std::ostream& out) {
    require(o.checkpoint, "--checkpoint", "predict");
    require(o.data, "--data", "predict");
    LoadedModel loaded = load_checkpoint(o.checkpoint);
    const auto dialogues = split_dialogues(o, loaded.config);
    const Evaluation ev = evaluate(*loaded.model, dialogues);
    std::string lines;
    for (const auto& r : ev.records) lines += r.to_json() + "\n";
    if (o.out.empty()) {
        out << lines;
    } else {
        write_file(o.out, lines);
    }
    return 0;
}

/// Rebuilds dialogues from a prediction dump: each record contributes the
/// persuadee turn it saw (with the predicted emotion) and its predicted strategy.
std::vector<Dialogue> dialogues_from_predictions(const std::string& text) {
    std::map<std::string, std::vector<nlohmann::json>> by_dialogue;
    std::vector<std::string> order;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto j = nlohmann::json::parse(line);
        const std::string id = j.at("dialogue").get<std::string>();
        if (!by_dialogue.count(id)) order.push_back(id);
        by_dialogue[id].push_back(std::move(j));
    }
    std::vector<Dialogue> out;
    for (const auto& id : order) {
        auto& recs = by_dialogue[id];
        std::stable_sort(recs.begin(), recs.end(),
                         [](const auto& a, const auto& b) { return a.at("turn").template get<int>() < b.at("turn").template get<int>(); });
        Dialogue d;
        d.id = id;
        for (const auto& r : recs) {
            if (!r.at("predicted_emotion").is_null()) {
                Utterance ee;
                ee.speaker = Speaker::persuadee;
                ee.emotion = parse_emotion(r.at("predicted_emotion").get<std::string>());
                d.utterances.push_back(ee);
            }
            Utterance er;
            er.speaker = Speaker::persuader;
            er.strategy = parse_strategy(r.at("predicted_strategy").get<std::string>()).strategy;
            d.utterances.push_back(er);
        }
        for (std::size_t i = 0; i < d.utterances.size(); ++i) d.utterances[i].turn_index = static_cast<int>(i);
        out.push_back(std::move(d));
    }
    return out;
}

int cmd_analyze(const Options& o, std::ostream& out) {
    require(o.data, "--data", "analyze");
    const ExperimentConfig config = experiment(o);
    const std::string text = read_file(o.data);
    const auto first = text.substr(0, text.find('\n'));
    std::vector<Dialogue> dialogues;
    if (first.find("\"predicted_strategy\"") != std::string::npos) {
        try {
            dialogues = dialogues_from_predictions(text);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(std::string("malformed prediction dump: ") + e.what());
        }
    } else {
        std::istringstream in(text);
        dialogues = read_jsonl(in, config.model.thresholds);
    }
    const QuadrantReport report = quadrant_analysis(dialogues, config.quadrant_window);
    if (!o.out.empty()) {
        const fs::path dir(o.out);
        write_file(dir / "quadrant.json", report.to_json() + "\n");
        write_file(dir / "quadrant.txt", report.to_text());
        write_file(dir / "quadrant.csv", report.to_csv());
    }
    out << (o.format == "json" ? report.to_json() + "\n" : report.to_text());
    return 0;
}

int cmd_compare(const Options& o, std::ostream& out) {
    if (o.runs.empty()) throw ConfigError("compare requires at least one run directory");
    const char* tasks[] = {"strategy", "emotion"};
    nlohmann::ordered_json all;
    std::string text;
    for (const char* task : tasks) {
        std::vector<MetricsReport> reports;
        std::vector<std::string> labels;
        for (const auto& run : o.runs) {
            const fs::path file = fs::path(run) / "reports" / (o.split + "_" + task + ".json");
            if (!fs::exists(file)) {
                if (std::string(task) == "strategy") throw DataError("missing report " + file.string());
                continue;
            }
            reports.push_back(MetricsReport::from_json(read_file(file)));
            labels.push_back(fs::path(run).lexically_normal().filename().string().empty()
                                 ? fs::path(run).lexically_normal().parent_path().filename().string()
                                 : fs::path(run).lexically_normal().filename().string());
        }
        if (reports.size() != o.runs.size()) continue;
        const ComparisonTable table = compare_runs(reports, labels, o.baseline);
        all[task] = nlohmann::json::parse(table.to_json());
        text += std::string(task) + " (" + o.split + ")\n" + table.to_text() + "\n";
    }
    if (!o.out.empty()) {
        write_file(fs::path(o.out) / "comparison.json", all.dump(2) + "\n");
        write_file(fs::path(o.out) / "comparison.txt", text);
    }
    out << (o.format == "json" ? all.dump(2) + "\n" : text);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"cfonet: persuasion strategy recognition with emotional-feedback memory"};
    app.require_subcommand(1, 1);
    Options o;

    auto common = [&o](CLI::App* c) {
        c->add_option("--config", o.config, "Experiment config file")->check(CLI::ExistingFile);
        c->add_option("--set", o.sets, "Override section.key=value (repeatable, last wins)");
        c->add_option("--seed", o.seed, "Random seed (overrides train.seed)");
        c->add_option("--format", o.format, "Console output: text or json")
            ->check(CLI::IsMember({"text", "json"}));
    };

    auto* prepare = app.add_subcommand("prepare", "Normalize a raw corpus and split it");
    common(prepare);
    prepare->add_option("--data", o.data, "Raw corpus (JSONL or CSV)");
    prepare->add_option("--mapping", o.mapping, "CSV column mapping file");
    prepare->add_option("--out", o.out, "Output directory");

    auto* synth = app.add_subcommand("synth", "Generate and split a synthetic corpus");
    common(synth);
    synth->add_option("--out", o.out, "Output directory");

    auto* trainc = app.add_subcommand("train", "Train a model on a prepared directory");
    common(trainc);
    trainc->add_option("--data", o.data, "Prepared data directory");
    trainc->add_option("--out", o.out, "Run directory");

    auto* evaluatec = app.add_subcommand("evaluate", "Score a checkpoint on a split");
    common(evaluatec);
    evaluatec->add_option("--checkpoint", o.checkpoint, "Checkpoint file");
    evaluatec->add_option("--data", o.data, "Prepared data directory or JSONL file");
    evaluatec->add_option("--split", o.split, "Split name inside --data");
    evaluatec->add_option("--out", o.out, "Run directory for reports");

    auto* predict = app.add_subcommand("predict", "Per-turn predictions with gamma trajectory");
    common(predict);
    predict->add_option("--checkpoint", o.checkpoint, "Checkpoint file");
    predict->add_option("--data", o.data, "Dialogue JSONL file or prepared directory");
    predict->add_option("--split", o.split, "Split name inside --data");
    predict->add_option("--out", o.out, "Output JSONL (stdout when omitted)");

    auto* analyze = app.add_subcommand("analyze", "Strategy reuse by persuadee emotion");
    common(analyze);
    analyze->add_option("--data", o.data, "Dialogue JSONL or prediction JSONL");
    analyze->add_option("--out", o.out, "Report directory");

    auto* compare = app.add_subcommand("compare", "Side-by-side macro metrics of runs");
    common(compare);
    compare->add_option("runs", o.runs, "Run directories");
    compare->add_option("--baseline", o.baseline, "Baseline run name (default: first)");
    compare->add_option("--split", o.split, "Report split to compare");
    compare->add_option("--out", o.out, "Output directory");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error[UsageError]: " << e.what() << "\n";
        return 2;
    }

    try {
        CLI::App* chosen = app.get_subcommands().front();
        const std::string name = chosen->get_name();
        if (name == "prepare") return cmd_prepare(o, out);
        if (name == "synth") return cmd_synth(o, out);
        if (name == "train") return cmd_train(o, out);
        if (name == "evaluate") return cmd_evaluate(o, out);
        if (name == "predict") return cmd_predict(o, out);
        if (name == "analyze") return cmd_analyze(o, out);
        return cmd_compare(o, out);
    } catch (const Error& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "error[" << e.kind() << "]: " << msg << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "error[InternalError]: " << msg << "\n";
        return 3;
    }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace cfonet::cli
