#pragma once

#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "trajtopo/error.hpp"
#include "trajtopo/trajectory.hpp"

namespace trajtopo {

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct ClassificationReport {
    // confusion[t][p]: samples of true class t predicted as p.
    std::array<std::array<std::size_t, kNumClasses>, kNumClasses> confusion{};
    std::array<ClassMetrics, kNumClasses> per_class{};
    double accuracy = 0.0;
    std::size_t total = 0;
};

/// Precision and recall degrade to 0 when their denominator is empty (no
/// predictions for the class, or no true samples of it), and f1 is 0
/// whenever precision + recall is.
inline ClassificationReport make_report(const std::vector<int>& truth,
                                        const std::vector<int>& predicted) {
    if (truth.empty()) {
        throw InputError("cannot build a report from zero samples");
    }
    if (truth.size() != predicted.size()) {
        throw InputError("truth and prediction counts differ");
    }
    ClassificationReport report;
    report.total = truth.size();
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] < 0 || truth[i] >= kNumClasses || predicted[i] < 0 ||
            predicted[i] >= kNumClasses) {
            throw InputError("class index out of range in report input");
        }
        ++report.confusion[static_cast<std::size_t>(truth[i])]
                          [static_cast<std::size_t>(predicted[i])];
        if (truth[i] == predicted[i]) {
            ++correct;
        }
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(report.total);

    for (std::size_t c = 0; c < kNumClasses; ++c) {
        std::size_t row_sum = 0;
        std::size_t col_sum = 0;
        for (std::size_t k = 0; k < kNumClasses; ++k) {
            row_sum += report.confusion[c][k];
            col_sum += report.confusion[k][c];
        }
        const auto tp = static_cast<double>(report.confusion[c][c]);
        ClassMetrics& metrics = report.per_class[c];
        metrics.support = row_sum;
        metrics.precision = col_sum == 0 ? 0.0 : tp / static_cast<double>(col_sum);
        metrics.recall = row_sum == 0 ? 0.0 : tp / static_cast<double>(row_sum);
        const double denom = metrics.precision + metrics.recall;
        metrics.f1 = denom == 0.0 ? 0.0 : 2.0 * metrics.precision * metrics.recall / denom;
    }
    return report;
}

inline nlohmann::ordered_json report_to_json_value(const ClassificationReport& report) {
    nlohmann::ordered_json doc;
    doc["accuracy"] = report.accuracy;
    doc["total"] = report.total;
    doc["per_class"] = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const ClassMetrics& metrics = report.per_class[c];
        doc["per_class"].push_back({{"class", c},
                                    {"precision", metrics.precision},
                                    {"recall", metrics.recall},
                                    {"f1", metrics.f1},
                                    {"support", metrics.support}});
    }
    doc["confusion"] = nlohmann::ordered_json::array();
    for (const auto& row : report.confusion) {
        doc["confusion"].push_back(row);
    }
    return doc;
}

inline std::string report_to_json(const ClassificationReport& report) {
    return report_to_json_value(report).dump(2) + "\n";
}

inline std::string report_to_text(const ClassificationReport& report) {
    char line[160];
    std::string out = "class   precision   recall       f1  support\n";
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const ClassMetrics& metrics = report.per_class[c];
        std::snprintf(line, sizeof(line), "%5zu   %9.4f   %6.4f   %6.4f  %7zu\n", c,
                      metrics.precision, metrics.recall, metrics.f1, metrics.support);
        out += line;
    }
    std::snprintf(line, sizeof(line), "\naccuracy %.4f on %zu samples\n", report.accuracy,
                  report.total);
    out += line;
    out += "\nconfusion (rows true, columns predicted)\n";
    for (std::size_t t = 0; t < kNumClasses; ++t) {
        std::snprintf(line, sizeof(line), "%5zu", t);
        out += line;
        for (std::size_t p = 0; p < kNumClasses; ++p) {
            std::snprintf(line, sizeof(line), " %7zu", report.confusion[t][p]);
            out += line;
        }
        out += '\n';
    }
    return out;
}

inline std::string confusion_to_csv(const ClassificationReport& report) {
    std::string out = "true_class";
    for (std::size_t p = 0; p < kNumClasses; ++p) {
        out += ",pred_" + std::to_string(p);
    }
    out += '\n';
    for (std::size_t t = 0; t < kNumClasses; ++t) {
        out += std::to_string(t);
        for (std::size_t p = 0; p < kNumClasses; ++p) {
            out += ',' + std::to_string(report.confusion[t][p]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace trajtopo
