// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/compare.hpp"

#include "cfonet/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace cfonet {

ComparisonTable compare_runs(const std::vector<MetricsReport>& reports, const std::vector<std::string>& labels,
                             const std::string& baseline) {
    if (reports.empty()) throw DataError("nothing to compare");
    if (reports.size() != labels.size()) throw DataError("one label per report required");
    for (const auto& r : reports) {
        if (r.n_classes() != reports.front().n_classes()) throw DataError("reports use different class spaces");
    }
    std::size_t base = 0;
    if (!baseline.empty()) {
        auto it = std::find(labels.begin(), labels.end(), baseline);
        if (it == labels.end()) throw DataError("baseline '" + baseline + "' is not among the compared runs");
        base = static_cast<std::size_t>(it - labels.begin());
    }
    ComparisonTable table;
    table.baseline = labels[base];
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const MetricsReport& r = reports[i];
        table.rows.push_back({labels[i], r.macro_precision, r.macro_recall, r.macro_f1,
                              r.macro_f1 - reports[base].macro_f1});
    }
    return table;
}

std::string ComparisonTable::to_text() const {
    std::size_t width = 3;
    for (const auto& r : rows) width = std::max(width, r.label.size());
    const int w = static_cast<int>(width);
    std::ostringstream out;
    char line[200];
    std::snprintf(line, sizeof line, "%-*s  %7s  %7s  %7s  %8s\n", w, "run", "P", "R", "M-F1", "dM-F1");
    out << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-*s  %7.2f  %7.2f  %7.2f  %+8.2f%s\n", w, r.label.c_str(),
                      100.0 * r.macro_precision, 100.0 * r.macro_recall, 100.0 * r.macro_f1, 100.0 * r.delta_f1,
                      r.label == baseline ? "  (baseline)" : "");
        out << line;
    }
    return out.str();
}

std::string ComparisonTable::to_json() const {
    nlohmann::json j;
    j["baseline"] = baseline;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        j["rows"].push_back({{"label", r.label},
                             {"macro_precision", r.macro_precision},
                             {"macro_recall", r.macro_recall},
                             {"macro_f1", r.macro_f1},
                             {"delta_f1", r.delta_f1}});
    }
    return j.dump(2);
}

}  // namespace cfonet
