// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/corpus.hpp"

#include "cfonet/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

namespace cfonet {

using nlohmann::json;

void validate(const Dialogue& dialogue) {
    if (dialogue.utterances.empty()) throw DataError("dialogue '" + dialogue.id + "' has no utterances");
    int previous = -1;
    for (const Utterance& u : dialogue.utterances) {
        if (u.turn_index <= previous) {
            throw DataError("dialogue '" + dialogue.id + "': turn_index not strictly increasing at " +
                            std::to_string(u.turn_index));
        }
        previous = u.turn_index;
        if (u.strategy && u.speaker != Speaker::persuader) {
            throw DataError("dialogue '" + dialogue.id + "' turn " + std::to_string(u.turn_index) +
                            ": strategy label on a persuadee turn");
        }
        if ((u.sentiment || u.emotion) && u.speaker != Speaker::persuadee) {
            throw DataError("dialogue '" + dialogue.id + "' turn " + std::to_string(u.turn_index) +
                            ": sentiment on a persuader turn");
        }
    }
}

Emotion derive_emotion_label(double score, const EmotionThresholds& thresholds) {
    if (!std::isfinite(score)) throw NumericError("non-finite sentiment score");
    if (thresholds.negative > thresholds.positive) {
        throw ConfigError("emotion thresholds require negative <= positive");
    }
    if (score < thresholds.negative) return Emotion::neg;
    if (score > thresholds.positive) return Emotion::pos;
    return Emotion::neu;
}

void derive_emotions(std::vector<Dialogue>& dialogues, const EmotionThresholds& thresholds) {
    for (Dialogue& d : dialogues) {
        for (Utterance& u : d.utterances) {
            if (u.speaker == Speaker::persuadee && u.sentiment) {
                u.emotion = derive_emotion_label(*u.sentiment, thresholds);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// JSONL

namespace {

void note_unknown(LoadReport* report, const std::string& where, const std::string& raw) {
    if (report == nullptr) return;
    ++report->unknown_strategies;
    report->warnings.push_back(where + ": unknown strategy '" + raw + "' mapped to None");
}

Dialogue dialogue_from_json(const json& j, std::size_t line, const EmotionThresholds& thresholds,
                            LoadReport* report) {
    const std::string where = "line " + std::to_string(line);
    if (!j.is_object() || !j.contains("id") || !j.contains("turns") || !j["turns"].is_array()) {
        throw DataError(where + ": expected {\"id\", \"turns\": [...]}");
    }
    Dialogue d;
    d.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
    int index = 0;
    for (const json& t : j["turns"]) {
        Utterance u;
        u.turn_index = index++;
        const std::string speaker = t.value("speaker", std::string());
        if (speaker == "ER") {
            u.speaker = Speaker::persuader;
        } else if (speaker == "EE") {
            u.speaker = Speaker::persuadee;
        } else {
            throw DataError(where + ": speaker must be \"ER\" or \"EE\", got '" + speaker + "'");
        }
        if (!t.contains("text") || !t["text"].is_string()) throw DataError(where + ": turn without text");
        u.text = t["text"].get<std::string>();
        if (t.contains("strategy") && !t["strategy"].is_null()) {
            if (!t["strategy"].is_string()) throw DataError(where + ": strategy must be a string or null");
            const std::string raw = t["strategy"].get<std::string>();
            const StrategyParse parsed = parse_strategy(raw);
            if (!parsed.recognized) note_unknown(report, where, raw);
            u.strategy = parsed.strategy;
        }
        if (t.contains("sentiment") && !t["sentiment"].is_null()) {
            if (!t["sentiment"].is_number()) throw DataError(where + ": sentiment must be a number or null");
            u.sentiment = t["sentiment"].get<double>();
            if (!std::isfinite(*u.sentiment)) throw DataError(where + ": non-finite sentiment");
            u.emotion = derive_emotion_label(*u.sentiment, thresholds);
        }
        d.utterances.push_back(std::move(u));
    }
    try {
        validate(d);
    } catch (const DataError& e) {
        throw DataError(where + ": " + e.what());
    }
    return d;
}

}  // namespace

std::vector<Dialogue> read_jsonl(std::istream& in, const EmotionThresholds& thresholds,
                                 LoadReport* report) {
    std::vector<Dialogue> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError("line " + std::to_string(number) + ": malformed JSON (" + e.what() + ")");
        }
        out.push_back(dialogue_from_json(j, number, thresholds, report));
    }
    return out;
}

std::string to_jsonl_line(const Dialogue& dialogue) {
    json turns = json::array();
    for (const Utterance& u : dialogue.utterances) {
        json t;
        t["speaker"] = u.speaker == Speaker::persuader ? "ER" : "EE";
        t["text"] = u.text;
        t["strategy"] = u.strategy ? json(std::string(name_of(*u.strategy))) : json(nullptr);
        t["sentiment"] = u.sentiment ? json(*u.sentiment) : json(nullptr);
        turns.push_back(std::move(t));
    }
    json j;
    j["id"] = dialogue.id;
    j["turns"] = std::move(turns);
    return j.dump();
}

void write_jsonl(std::ostream& out, const std::vector<Dialogue>& dialogues) {
    for (const Dialogue& d : dialogues) out << to_jsonl_line(d) << '\n';
}

void save_dialogues(const std::filesystem::path& path, const std::vector<Dialogue>& dialogues) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_jsonl(out, dialogues);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

/// Reads one RFC-4180 record; quoted fields may contain commas, doubled
/// quotes and newlines. Returns false at end of input.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
    fields.clear();
    if (in.peek() == std::char_traits<char>::eof()) return false;
    std::string field;
    bool quoted = false;
    bool any = false;
    char c;
    while (in.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            ++line;
            break;
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    if (quoted) throw DataError("row ending at line " + std::to_string(line) + ": unterminated quote");
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

ColumnMapping ColumnMapping::from_pairs(const std::map<std::string, std::string>& pairs) {
    auto required = [&](const std::string& key) {
        auto it = pairs.find(key);
        if (it == pairs.end() || trim(it->second).empty()) {
            throw ConfigError("column mapping is missing required key '" + key + "'");
        }
        return trim(it->second);
    };
    auto optional = [&](const std::string& key, const std::string& fallback) {
        auto it = pairs.find(key);
        return it == pairs.end() ? fallback : trim(it->second);
    };
    ColumnMapping m;
    m.dialogue_id_column = required("dialogue_id_column");
    m.speaker_column = required("speaker_column");
    m.text_column = required("text_column");
    m.strategy_columns = split_list(required("strategy_columns"), ',');
    m.sentiment_column = required("sentiment_column");
    m.persuader_value = required("persuader_value");
    m.persuadee_value = required("persuadee_value");
    m.turn_column = optional("turn_column", "");
    m.strategy_separator = optional("strategy_separator", "");
    try {
        m.sentiment_min = std::stod(optional("sentiment_min", "-1"));
        m.sentiment_max = std::stod(optional("sentiment_max", "1"));
    } catch (const std::exception&) {
        throw ConfigError("column mapping: sentiment_min/sentiment_max must be numbers");
    }
    if (!(m.sentiment_max > m.sentiment_min)) {
        throw ConfigError("column mapping: sentiment_max must exceed sentiment_min");
    }
    return m;
}

ColumnMapping ColumnMapping::from_file(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw ConfigError("mapping file not found: " + path.string());
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(path.string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("malformed mapping file: " + std::string(e.what()));
    }
    std::map<std::string, std::string> pairs;
    for (const auto& [key, node] : tree) {
        if (node.empty()) {
            pairs[key] = node.data();
        } else if (key == "mapping") {
            for (const auto& [k, v] : node) pairs[k] = v.data();
        }
    }
    return from_pairs(pairs);
}

std::vector<Dialogue> read_p4g_csv(std::istream& in, const ColumnMapping& mapping,
                                   const EmotionThresholds& thresholds, LoadReport* report) {
    std::size_t line = 1;
    std::vector<std::string> header;
    if (!read_csv_record(in, header, line)) {
        if (report) report->warnings.push_back("empty CSV input");
        return {};
    }
    for (auto& h : header) h = trim(h);
    if (!header.empty() && header[0].size() >= 3 && header[0].compare(0, 3, "\xEF\xBB\xBF") == 0) {
        header[0] = header[0].substr(3);
    }
    auto column = [&](const std::string& name) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw DataError("mapping references absent column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t c_id = column(mapping.dialogue_id_column);
    const std::size_t c_speaker = column(mapping.speaker_column);
    const std::size_t c_text = column(mapping.text_column);
    const std::size_t c_sent = column(mapping.sentiment_column);
    std::vector<std::size_t> c_strategy;
    for (const auto& s : mapping.strategy_columns) c_strategy.push_back(column(s));
    const bool has_turn = !mapping.turn_column.empty();
    const std::size_t c_turn = has_turn ? column(mapping.turn_column) : 0;

    struct Row {
        double turn;
        std::size_t order;
        Utterance utterance;
    };
    std::vector<std::string> ids_in_order;
    std::unordered_map<std::string, std::vector<Row>> rows;
    std::vector<std::string> fields;
    std::size_t row_number = 1;
    std::size_t order = 0;
    while (true) {
        const std::size_t start_line = line;
        if (!read_csv_record(in, fields, line)) break;
        ++row_number;
        if (fields.size() == 1 && trim(fields[0]).empty()) continue;
        const std::string where = "row " + std::to_string(row_number) + " (line " + std::to_string(start_line) + ")";
        if (fields.size() != header.size()) {
            throw DataError(where + ": expected " + std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        Utterance u;
        const std::string speaker = trim(fields[c_speaker]);
        if (speaker == mapping.persuader_value) {
            u.speaker = Speaker::persuader;
        } else if (speaker == mapping.persuadee_value) {
            u.speaker = Speaker::persuadee;
        } else {
            throw DataError(where + ": unrecognized speaker value '" + speaker + "'");
        }
        u.text = fields[c_text];
        if (u.speaker == Speaker::persuader) {
            for (std::size_t c : c_strategy) {
                std::string cell = trim(fields[c]);
                if (!mapping.strategy_separator.empty()) {
                    auto labels = split_list(cell, mapping.strategy_separator[0]);
                    cell = labels.empty() ? std::string() : labels.front();
                }
                if (cell.empty()) continue;
                const StrategyParse parsed = parse_strategy(cell);
                if (!parsed.recognized) note_unknown(report, where, cell);
                u.strategy = parsed.strategy;
                break;
            }
        } else {
            const std::string cell = trim(fields[c_sent]);
            if (!cell.empty()) {
                double raw = 0.0;
                try {
                    std::size_t used = 0;
                    raw = std::stod(cell, &used);
                    if (used != cell.size()) throw std::invalid_argument(cell);
                } catch (const std::exception&) {
                    throw DataError(where + ": sentiment '" + cell + "' is not a number");
                }
                const double scaled = 2.0 * (raw - mapping.sentiment_min) /
                                          (mapping.sentiment_max - mapping.sentiment_min) - 1.0;
                u.sentiment = scaled;
                u.emotion = derive_emotion_label(scaled, thresholds);
            }
        }
        double turn = static_cast<double>(order);
        if (has_turn) {
            try {
                turn = std::stod(trim(fields[c_turn]));
            } catch (const std::exception&) {
                throw DataError(where + ": turn value '" + fields[c_turn] + "' is not a number");
            }
        }
        const std::string id = trim(fields[c_id]);
        if (rows.find(id) == rows.end()) ids_in_order.push_back(id);
        rows[id].push_back(Row{turn, order++, std::move(u)});
    }

    std::vector<Dialogue> out;
    for (const std::string& id : ids_in_order) {
        auto& list = rows[id];
        std::stable_sort(list.begin(), list.end(), [](const Row& a, const Row& b) {
            return a.turn < b.turn;
        });
        Dialogue d;
        d.id = id;
        int index = 0;
        for (Row& r : list) {
            r.utterance.turn_index = index++;
            d.utterances.push_back(std::move(r.utterance));
        }
        validate(d);
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<Dialogue> load_dialogues(const std::filesystem::path& path, const LoadOptions& options,
                                     LoadReport* report) {
    if (!std::filesystem::exists(path)) throw DataError("file not found: " + path.string());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<Dialogue> out = options.format == CorpusFormat::jsonl
                                    ? read_jsonl(in, options.thresholds, report)
                                    : read_p4g_csv(in, options.mapping, options.thresholds, report);
    if (out.empty() && report != nullptr) {
        report->warnings.push_back(path.string() + ": no dialogues found");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Examples and splits

std::vector<StrategyExample> make_examples(const Dialogue& dialogue, int max_context) {
    if (max_context < 2) throw ConfigError("max_context must be at least 2");
    std::vector<StrategyExample> out;
    const auto& us = dialogue.utterances;
    for (std::size_t j = 0; j < us.size(); ++j) {
        if (us[j].speaker != Speaker::persuader || !us[j].strategy) continue;
        StrategyExample ex;
        ex.dialogue_id = dialogue.id;
        ex.target_turn = static_cast<int>(j);
        const std::size_t begin = j + 1 >= static_cast<std::size_t>(max_context)
                                      ? j + 1 - static_cast<std::size_t>(max_context)
                                      : 0;
        ex.context_begin = static_cast<int>(begin);
        ex.context.assign(us.begin() + static_cast<std::ptrdiff_t>(begin),
                          us.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        ex.gold_strategy = *us[j].strategy;
        if (j > begin && us[j - 1].speaker == Speaker::persuadee && us[j - 1].emotion) {
            ex.gold_emotion = us[j - 1].emotion;
        }
        out.push_back(std::move(ex));
    }
    return out;
}

DatasetSplit split(const std::vector<Dialogue>& dialogues, const SplitRatios& ratios,
                   std::uint64_t seed) {
    if (ratios.train < 0 || ratios.dev < 0 || ratios.test < 0 ||
        std::abs(ratios.train + ratios.dev + ratios.test - 1.0) > 1e-9) {
        throw ConfigError("split ratios must be non-negative and sum to 1");
    }
    const int requested = (ratios.train > 0) + (ratios.dev > 0) + (ratios.test > 0);
    if (dialogues.size() < static_cast<std::size_t>(requested)) {
        throw DataError("cannot split " + std::to_string(dialogues.size()) + " dialogues into " +
                        std::to_string(requested) + " non-empty parts");
    }
    std::vector<std::size_t> order(dialogues.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto n = static_cast<double>(dialogues.size());
    const auto n_dev = static_cast<std::size_t>(std::floor(n * ratios.dev + 1e-9));
    const auto n_test = static_cast<std::size_t>(std::floor(n * ratios.test + 1e-9));
    DatasetSplit out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Dialogue& d = dialogues[order[i]];
        if (i < n_dev) {
            out.dev.push_back(d);
        } else if (i < n_dev + n_test) {
            out.test.push_back(d);
        } else {
            out.train.push_back(d);
        }
    }
    return out;
}

}  // namespace cfonet
