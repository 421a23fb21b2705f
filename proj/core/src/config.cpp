// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/config.hpp"

#include "cfonet/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cfonet {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) throw ConfigError("expected a number, got '" + s + "'");
    return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
    Int v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) throw ConfigError("expected an integer, got '" + s + "'");
    return v;
}

bool parse_bool(const std::string& s) {
    std::string l = s;
    std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
    if (l == "true" || l == "1" || l == "yes" || l == "on") return true;
    if (l == "false" || l == "0" || l == "no" || l == "off") return false;
    throw ConfigError("expected true/false, got '" + s + "'");
}

std::string_view name_of(CorpusFormat f) { return f == CorpusFormat::p4g_csv ? "p4g_csv" : "jsonl"; }

CorpusFormat parse_format(std::string_view s) {
    if (s == "jsonl") return CorpusFormat::jsonl;
    if (s == "p4g_csv" || s == "csv") return CorpusFormat::p4g_csv;
    throw ConfigError("data format must be 'jsonl' or 'p4g_csv', got '" + std::string(s) + "'");
}

struct Field {
    std::function<std::string(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, const std::string&)> set;
};

template <typename T, typename Get>
Field make_field(Get ref, std::function<std::string(const T&)> show, std::function<T(const std::string&)> read) {
    return Field{
        [ref, show](const ExperimentConfig& c) { return show(ref(const_cast<ExperimentConfig&>(c))); },
        [ref, read](ExperimentConfig& c, const std::string& v) { ref(c) = read(v); },
    };
}

template <typename Get>
Field int_field(Get ref) {
    return make_field<int>(ref, [](const int& v) { return std::to_string(v); }, parse_int<int>);
}

template <typename Get>
Field u64_field(Get ref) {
    return make_field<std::uint64_t>(ref, [](const std::uint64_t& v) { return std::to_string(v); },
                                     parse_int<std::uint64_t>);
}

template <typename Get>
Field double_field(Get ref) {
    return make_field<double>(ref, [](const double& v) { return format_double(v); }, parse_double);
}

template <typename Get>
Field bool_field(Get ref) {
    return make_field<bool>(ref, [](const bool& v) { return std::string(v ? "true" : "false"); }, parse_bool);
}

template <typename Get>
Field string_field(Get ref) {
    return make_field<std::string>(ref, [](const std::string& v) { return v; },
                                   [](const std::string& v) { return v; });
}

template <typename T, typename Get, typename Parse>
Field enum_field(Get ref, Parse parse) {
    return make_field<T>(ref, [](const T& v) { return std::string(name_of(v)); },
                         [parse](const std::string& v) { return parse(v); });
}

using Registry = std::vector<std::pair<std::string, Field>>;

const Registry& registry() {
    static const Registry fields = [] {
        Registry r;
        auto add = [&r](std::string key, Field f) { r.emplace_back(std::move(key), std::move(f)); };
#define CFG(expr) [](ExperimentConfig& c) -> auto& { return c.expr; }
        add("model.embed_dim", int_field(CFG(model.encoder.embed_dim)));
        add("model.hidden_dim", int_field(CFG(model.encoder.hidden_dim)));
        add("model.n_heads", int_field(CFG(model.encoder.n_heads)));
        add("model.positional_encoding", bool_field(CFG(model.encoder.positional_encoding)));
        add("model.role_embedding", bool_field(CFG(model.encoder.role_embedding)));
        add("model.residual_norm", bool_field(CFG(model.encoder.residual_norm)));
        add("model.top_k", int_field(CFG(model.top_k)));
        add("model.mu", double_field(CFG(model.mu)));
        add("model.pool_capacity", int_field(CFG(model.pool_capacity)));
        add("model.pool_aggregation",
            enum_field<PoolAggregation>(CFG(model.pool_aggregation), parse_pool_aggregation));
        add("model.gamma_min", double_field(CFG(model.gamma_bounds.min)));
        add("model.gamma_max", double_field(CFG(model.gamma_bounds.max)));
        add("model.straight_through", bool_field(CFG(model.straight_through)));
        add("model.fusion", enum_field<FusionVariant>(CFG(model.fusion), parse_fusion_variant));
        add("model.memory_source_train",
            enum_field<MemorySource>(CFG(model.memory_source_train), parse_memory_source));
        add("model.memory_source_eval",
            enum_field<MemorySource>(CFG(model.memory_source_eval), parse_memory_source));

        add("train.learning_rate", double_field(CFG(model.learning_rate)));
        add("train.batch_size", int_field(CFG(model.batch_size)));
        add("train.epochs", int_field(CFG(model.epochs)));
        add("train.patience", int_field(CFG(model.patience)));
        add("train.grad_clip", double_field(CFG(model.grad_clip)));
        add("train.beta1", double_field(CFG(model.beta1)));
        add("train.beta2", double_field(CFG(model.beta2)));
        add("train.seed", u64_field(CFG(model.seed)));
        add("train.max_context", int_field(CFG(model.max_context)));
        add("train.min_freq", int_field(CFG(model.min_freq)));

        add("ablation.no_memory", bool_field(CFG(model.ablation.no_memory)));
        add("ablation.no_multitask", bool_field(CFG(model.ablation.no_multitask)));
        add("ablation.no_fusion", bool_field(CFG(model.ablation.no_fusion)));

        add("data.format", enum_field<CorpusFormat>(CFG(data.format), parse_format));
        add("data.mapping", string_field(CFG(data.mapping)));
        add("data.split_train", double_field(CFG(data.split.train)));
        add("data.split_dev", double_field(CFG(data.split.dev)));
        add("data.split_test", double_field(CFG(data.split.test)));
        add("data.split_seed", u64_field(CFG(data.split_seed)));
        add("data.emotion_threshold_neg", double_field(CFG(model.thresholds.negative)));
        add("data.emotion_threshold_pos", double_field(CFG(model.thresholds.positive)));

        add("synthetic.dialogues", int_field(CFG(synthetic.dialogues)));
        add("synthetic.persuader_turns", int_field(CFG(synthetic.persuader_turns)));
        add("synthetic.p_repeat_after_pos", double_field(CFG(synthetic.p_repeat_after_pos)));
        add("synthetic.p_avoid_after_neg", double_field(CFG(synthetic.p_avoid_after_neg)));
        add("synthetic.p_emotion_pos", double_field(CFG(synthetic.emotion_probs[0])));
        add("synthetic.p_emotion_neu", double_field(CFG(synthetic.emotion_probs[1])));
        add("synthetic.p_emotion_neg", double_field(CFG(synthetic.emotion_probs[2])));
        add("synthetic.p_ambiguous_strategy_text", double_field(CFG(synthetic.p_ambiguous_strategy_text)));
        add("synthetic.p_ambiguous_emotion_text", double_field(CFG(synthetic.p_ambiguous_emotion_text)));
        add("synthetic.keyword_rate", double_field(CFG(synthetic.keyword_rate)));
        add("synthetic.min_tokens", int_field(CFG(synthetic.min_tokens)));
        add("synthetic.max_tokens", int_field(CFG(synthetic.max_tokens)));

        add("eval.quadrant_window", enum_field<ReuseWindow>(CFG(quadrant_window), parse_reuse_window));
#undef CFG
        return r;
    }();
    return fields;
}

const Field* find_field(const std::string& key) {
    for (const auto& [k, f] : registry()) {
        if (k == key) return &f;
    }
    return nullptr;
}

}  // namespace

const std::vector<std::string>& ExperimentConfig::keys() {
    static const std::vector<std::string> out = [] {
        std::vector<std::string> k;
        for (const auto& entry : registry()) k.push_back(entry.first);
        return k;
    }();
    return out;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    const Field* f = find_field(key);
    if (!f) throw ConfigError("unknown config key '" + key + "'");
    try {
        f->set(*this, trim(value));
    } catch (const ConfigError& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

std::string ExperimentConfig::get(const std::string& key) const {
    const Field* f = find_field(key);
    if (!f) throw ConfigError("unknown config key '" + key + "'");
    return f->get(*this);
}

std::vector<std::string> ExperimentConfig::problems() const {
    std::vector<std::string> out = model.problems();
    const auto& s = data.split;
    if (s.train < 0 || s.dev < 0 || s.test < 0) out.push_back("data.split_* ratios must be >= 0");
    if (std::abs(s.train + s.dev + s.test - 1.0) > 1e-9) out.push_back("data.split_* ratios must sum to 1");
    try {
        synthetic.validate();
    } catch (const ConfigError& e) {
        out.push_back(e.what());
    }
    return out;
}

void ExperimentConfig::validate() const {
    const auto list = problems();
    if (list.empty()) return;
    std::ostringstream msg;
    msg << list.size() << " invalid setting(s): ";
    for (std::size_t i = 0; i < list.size(); ++i) msg << (i ? "; " : "") << list[i];
    throw ConfigError(msg.str());
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream out;
    std::string section;
    for (const auto& [key, field] : registry()) {
        const auto dot = key.find('.');
        const std::string sec = key.substr(0, dot);
        if (sec != section) {
            if (!section.empty()) out << '\n';
            out << '[' << sec << "]\n";
            section = sec;
        }
        out << key.substr(dot + 1) << " = " << field.get(*this) << '\n';
    }
    return out.str();
}

Override parse_override(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override '" + text + "' is not of the form section.key=value");
    }
    return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

ExperimentConfig parse_config(const std::string& text, const std::vector<Override>& overrides) {
    std::vector<Override> assignments;
    if (!trim(text).empty()) {
        boost::property_tree::ptree tree;
        std::istringstream in(text);
        try {
            boost::property_tree::ini_parser::read_ini(in, tree);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
        }
        for (const auto& [section, body] : tree) {
            if (body.empty()) {
                assignments.emplace_back(section, body.data());
                continue;
            }
            for (const auto& [key, value] : body) assignments.emplace_back(section + "." + key, value.data());
        }
    }
    assignments.insert(assignments.end(), overrides.begin(), overrides.end());

    ExperimentConfig config;
    std::vector<std::string> errors;
    for (const auto& [key, value] : assignments) {
        try {
            config.set(key, value);
        } catch (const ConfigError& e) {
            errors.emplace_back(e.what());
        }
    }
    const auto list = config.problems();
    errors.insert(errors.end(), list.begin(), list.end());
    if (!errors.empty()) {
        std::ostringstream msg;
        msg << errors.size() << " config error(s): ";
        for (std::size_t i = 0; i < errors.size(); ++i) msg << (i ? "; " : "") << errors[i];
        throw ConfigError(msg.str());
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<Override>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), overrides);
}

}  // namespace cfonet
