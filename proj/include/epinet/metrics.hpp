#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace epinet {

struct ConfusionMatrix {
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tp = 0;

    std::size_t total() const { return tn + fp + fn + tp; }
};

/// Standard 2x2 counts with positive = 1. Throws LengthMismatch and
/// InvalidArgument (empty input or non-binary values).
ConfusionMatrix confusion(const std::vector<int>& labels, const std::vector<int>& predictions);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct ClassReport {
    ClassMetrics negative;
    ClassMetrics positive;
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    double weighted_f1 = 0.0;
    std::size_t total = 0;
    /// Set when any rate had a zero denominator (the rate itself is 0).
    bool zero_division = false;
};

/// Per-class precision/recall/f1 plus accuracy, macro and support-weighted
/// averages. Zero denominators yield 0 and set the flag. Throws
/// InvalidArgument on an empty matrix.
ClassReport classification_report(const ConfusionMatrix& cm);

/// Fixed-layout text table (2-decimal rates, sklearn-style rows
/// Covid_Negative / Covid_Positive / accuracy / macro avg / weighted avg).
std::string report_text(const ClassReport& report);

/// CSV `class,precision,recall,f1,support` at full precision; same five
/// rows as the text table.
std::string report_csv(const ClassReport& report);

/// Rebuilds a report from report_csv output (zero_division is not
/// serialized and comes back false). Throws Error on malformed input.
ClassReport parse_report_csv(const std::string& text);

/// Dispatch on format name {"text", "csv"}; anything else throws
/// InvalidArgument naming the valid formats.
std::string export_report(const ClassReport& report, const std::string& format);

/// 2x2 CSV: rows true_0/true_1, columns pred_0/pred_1.
std::string confusion_csv(const ConfusionMatrix& cm);

} // namespace epinet
