// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/metrics.hpp"

#include "cfonet/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>

namespace cfonet {

namespace {

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::size_t MetricsReport::zero_support_classes() const {
    return static_cast<std::size_t>(
        std::count_if(per_class.begin(), per_class.end(), [](const ClassMetrics& c) { return c.support == 0; }));
}

MetricsReport compute_metrics(const std::vector<int>& preds, const std::vector<int>& golds, int n_classes,
                              std::vector<std::string> class_names) {
    if (preds.size() != golds.size()) {
        throw DataError("prediction/gold length mismatch: " + std::to_string(preds.size()) + " vs " +
                        std::to_string(golds.size()));
    }
    if (preds.empty()) throw DataError("cannot compute metrics over zero examples");
    if (n_classes < 1) throw DataError("n_classes must be >= 1");
    if (class_names.empty()) {
        for (int c = 0; c < n_classes; ++c) class_names.push_back(std::to_string(c));
    }
    if (static_cast<int>(class_names.size()) != n_classes) throw DataError("class_names size != n_classes");

    const auto n = static_cast<std::size_t>(n_classes);
    MetricsReport r;
    r.class_names = std::move(class_names);
    r.per_class.assign(n, {});
    r.confusion.assign(n, std::vector<std::size_t>(n, 0));
    r.n_examples = preds.size();

    std::vector<std::size_t> predicted(n, 0);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const int p = preds[i];
        const int g = golds[i];
        if (p < 0 || p >= n_classes || g < 0 || g >= n_classes) {
            throw DataError("label outside [0, " + std::to_string(n_classes) + ") at position " + std::to_string(i));
        }
        ++r.confusion[g][p];
        ++r.per_class[g].support;
        ++predicted[p];
        if (p == g) {
            ++r.per_class[g].true_positives;
            ++correct;
        }
    }
    for (std::size_t c = 0; c < n; ++c) {
        ClassMetrics& m = r.per_class[c];
        m.precision = ratio(m.true_positives, predicted[c]);
        m.recall = ratio(m.true_positives, m.support);
        m.f1 = m.precision + m.recall == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
        r.macro_precision += m.precision;
        r.macro_recall += m.recall;
        r.macro_f1 += m.f1;
    }
    r.macro_precision /= static_cast<double>(n);
    r.macro_recall /= static_cast<double>(n);
    r.macro_f1 /= static_cast<double>(n);
    r.accuracy = ratio(correct, r.n_examples);
    return r;
}

double confidence_at_k(const std::vector<Vector>& distributions, int k) {
    if (distributions.empty()) throw DataError("confidence_at_k needs at least one distribution");
    double total = 0.0;
    for (const Vector& d : distributions) {
        if (k < 1 || k > d.size()) {
            throw ContractError("k = " + std::to_string(k) + " outside [1, " + std::to_string(d.size()) + "]");
        }
        std::vector<double> v(d.data(), d.data() + d.size());
        std::nth_element(v.begin(), v.begin() + (k - 1), v.end(), std::greater<>());
        total += v[static_cast<std::size_t>(k - 1)];
    }
    return total / static_cast<double>(distributions.size());
}

std::string MetricsReport::to_json() const {
    nlohmann::json j;
    j["n_examples"] = n_examples;
    j["accuracy"] = accuracy;
    j["macro_precision"] = macro_precision;
    j["macro_recall"] = macro_recall;
    j["macro_f1"] = macro_f1;
    j["macro_includes_zero_support"] = true;
    j["zero_support_classes"] = zero_support_classes();
    nlohmann::json classes = nlohmann::json::array();
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        const ClassMetrics& m = per_class[c];
        classes.push_back({{"name", class_names[c]},
                           {"precision", m.precision},
                           {"recall", m.recall},
                           {"f1", m.f1},
                           {"support", m.support},
                           {"true_positives", m.true_positives}});
    }
    j["classes"] = classes;
    j["confusion"] = confusion;
    return j.dump(2);
}

MetricsReport MetricsReport::from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        MetricsReport r;
        r.n_examples = j.at("n_examples").get<std::size_t>();
        r.accuracy = j.at("accuracy").get<double>();
        r.macro_precision = j.at("macro_precision").get<double>();
        r.macro_recall = j.at("macro_recall").get<double>();
        r.macro_f1 = j.at("macro_f1").get<double>();
        for (const auto& c : j.at("classes")) {
            r.class_names.push_back(c.at("name").get<std::string>());
            ClassMetrics m;
            m.precision = c.at("precision").get<double>();
            m.recall = c.at("recall").get<double>();
            m.f1 = c.at("f1").get<double>();
            m.support = c.at("support").get<std::size_t>();
            m.true_positives = c.at("true_positives").get<std::size_t>();
            r.per_class.push_back(m);
        }
        r.confusion = j.at("confusion").get<std::vector<std::vector<std::size_t>>>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed metrics report: ") + e.what());
    }
}

std::string MetricsReport::to_text() const {
    std::ostringstream out;
    char line[160];
    std::size_t width = 5;
    for (const auto& n : class_names) width = std::max(width, n.size());
    const int w = static_cast<int>(width);
    std::snprintf(line, sizeof line, "%-*s  %9s  %9s  %9s  %7s\n", w, "class", "precision", "recall", "f1", "support");
    out << line;
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        const ClassMetrics& m = per_class[c];
        std::snprintf(line, sizeof line, "%-*s  %9.4f  %9.4f  %9.4f  %7zu\n", w, class_names[c].c_str(), m.precision,
                      m.recall, m.f1, m.support);
        out << line;
    }
    std::snprintf(line, sizeof line, "%-*s  %9.4f  %9.4f  %9.4f  %7zu\n", w, "macro", macro_precision, macro_recall,
                  macro_f1, n_examples);
    out << line;
    std::snprintf(line, sizeof line, "accuracy %.4f; macro averages include %zu zero-support class(es)\n", accuracy,
                  zero_support_classes());
    out << line;
    return out.str();
}

}  // namespace cfonet
