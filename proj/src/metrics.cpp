#include "epinet/metrics.hpp"

#include <cstdio>

#include "epinet/csv.hpp"
#include "epinet/errors.hpp"
#include "epinet/text.hpp"

namespace epinet {

ConfusionMatrix confusion(const std::vector<int>& labels, const std::vector<int>& predictions) {
    if (labels.size() != predictions.size()) {
        throw Error(ErrorCode::LengthMismatch,
                    "label/prediction count mismatch: " + std::to_string(labels.size()) +
                        " vs " + std::to_string(predictions.size()));
    }
    if (labels.empty()) {
        throw Error(ErrorCode::InvalidArgument, "confusion needs a non-empty input");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int y = labels[i];
        const int p = predictions[i];
        if ((y != 0 && y != 1) || (p != 0 && p != 1)) {
            throw Error(ErrorCode::InvalidArgument, "labels and predictions must be 0 or 1");
        }
        if (y == 1) {
            p == 1 ? ++cm.tp : ++cm.fn;
        } else {
            p == 1 ? ++cm.fp : ++cm.tn;
        }
    }
    return cm;
}

ClassReport classification_report(const ConfusionMatrix& cm) {
    const std::size_t total = cm.total();
    if (total == 0) {
        throw Error(ErrorCode::InvalidArgument, "confusion matrix has no samples");
    }

    ClassReport out;
    out.total = total;
    bool zero_division = false;
    const auto rate = [&zero_division](double numerator, double denominator) {
        if (denominator == 0.0) {
            zero_division = true;
            return 0.0;
        }
        return numerator / denominator;
    };

    const auto tn = static_cast<double>(cm.tn);
    const auto fp = static_cast<double>(cm.fp);
    const auto fn = static_cast<double>(cm.fn);
    const auto tp = static_cast<double>(cm.tp);

    out.negative.support = cm.tn + cm.fp;
    out.positive.support = cm.fn + cm.tp;

    out.negative.precision = rate(tn, tn + fn);
    out.negative.recall = rate(tn, tn + fp);
    out.negative.f1 = rate(2.0 * out.negative.precision * out.negative.recall,
                           out.negative.precision + out.negative.recall);

    out.positive.precision = rate(tp, tp + fp);
    out.positive.recall = rate(tp, tp + fn);
    out.positive.f1 = rate(2.0 * out.positive.precision * out.positive.recall,
                           out.positive.precision + out.positive.recall);

    out.accuracy = (tn + tp) / static_cast<double>(total);

    out.macro_precision = 0.5 * (out.negative.precision + out.positive.precision);
    out.macro_recall = 0.5 * (out.negative.recall + out.positive.recall);
    out.macro_f1 = 0.5 * (out.negative.f1 + out.positive.f1);

    const auto sn = static_cast<double>(out.negative.support);
    const auto sp = static_cast<double>(out.positive.support);
    const auto tot = static_cast<double>(total);
    out.weighted_precision = (sn * out.negative.precision + sp * out.positive.precision) / tot;
    out.weighted_recall = (sn * out.negative.recall + sp * out.positive.recall) / tot;
    out.weighted_f1 = (sn * out.negative.f1 + sp * out.positive.f1) / tot;

    out.zero_division = zero_division;
    return out;
}

namespace {

constexpr const char* kNegativeLabel = "Covid_Negative";
constexpr const char* kPositiveLabel = "Covid_Positive";

std::string metric_row(const char* name, double p, double r, double f1, std::size_t support) {
    char line[128];
    std::snprintf(line, sizeof(line), "%14s %9.2f %9.2f %9.2f %9zu\n", name, p, r, f1, support);
    return line;
}

} // namespace

std::string report_text(const ClassReport& report) {
    char line[128];
    std::string out;
    std::snprintf(line, sizeof(line), "%14s %9s %9s %9s %9s\n", "", "precision", "recall",
                  "f1-score", "support");
    out += line;
    out += "\n";
    out += metric_row(kNegativeLabel, report.negative.precision, report.negative.recall,
                      report.negative.f1, report.negative.support);
    out += metric_row(kPositiveLabel, report.positive.precision, report.positive.recall,
                      report.positive.f1, report.positive.support);
    out += "\n";
    std::snprintf(line, sizeof(line), "%14s %9s %9s %9.2f %9zu\n", "accuracy", "", "",
                  report.accuracy, report.total);
    out += line;
    out += metric_row("macro avg", report.macro_precision, report.macro_recall, report.macro_f1,
                      report.total);
    out += metric_row("weighted avg", report.weighted_precision, report.weighted_recall,
                      report.weighted_f1, report.total);
    return out;
}

std::string report_csv(const ClassReport& report) {
    std::string out = "class,precision,recall,f1,support\n";
    const auto row = [](const std::string& name, double p, double r, double f1,
                        std::size_t support) {
        return csv::format_row({name, g17(p), g17(r), g17(f1), std::to_string(support)});
    };
    out += row(kNegativeLabel, report.negative.precision, report.negative.recall,
               report.negative.f1, report.negative.support);
    out += row(kPositiveLabel, report.positive.precision, report.positive.recall,
               report.positive.f1, report.positive.support);
    out += csv::format_row({"accuracy", "", "", g17(report.accuracy),
                            std::to_string(report.total)});
    out += row("macro avg", report.macro_precision, report.macro_recall, report.macro_f1,
               report.total);
    out += row("weighted avg", report.weighted_precision, report.weighted_recall,
               report.weighted_f1, report.total);
    return out;
}

namespace {

[[noreturn]] void report_parse_error(const std::string& message) {
    throw Error(ErrorCode::UnexpectedColumn, "report csv: " + message);
}

double field_real(const std::string& token, const char* what) {
    const auto v = try_parse_double(token);
    if (!v) report_parse_error("bad " + std::string(what) + " value `" + token + "`");
    return *v;
}

std::size_t field_count(const std::string& token, const char* what) {
    const auto v = try_parse_int(token);
    if (!v || *v < 0) report_parse_error("bad " + std::string(what) + " value `" + token + "`");
    return static_cast<std::size_t>(*v);
}

} // namespace

ClassReport parse_report_csv(const std::string& text) {
    const csv::Table table = csv::parse(text);
    const csv::Row expected_header = {"class", "precision", "recall", "f1", "support"};
    if (table.header != expected_header) report_parse_error("unexpected header");
    if (table.rows.size() != 5) {
        report_parse_error("expected 5 rows, got " + std::to_string(table.rows.size()));
    }

    ClassReport report;
    for (const auto& row : table.rows) {
        if (row.size() != 5) report_parse_error("wrong field count");
        const std::string& name = row[0];
        if (name == kNegativeLabel || name == kPositiveLabel) {
            ClassMetrics& m = (name == kNegativeLabel) ? report.negative : report.positive;
            m.precision = field_real(row[1], "precision");
            m.recall = field_real(row[2], "recall");
            m.f1 = field_real(row[3], "f1");
            m.support = field_count(row[4], "support");
        } else if (name == "accuracy") {
            report.accuracy = field_real(row[3], "accuracy");
            report.total = field_count(row[4], "total");
        } else if (name == "macro avg") {
            report.macro_precision = field_real(row[1], "macro precision");
            report.macro_recall = field_real(row[2], "macro recall");
            report.macro_f1 = field_real(row[3], "macro f1");
        } else if (name == "weighted avg") {
            report.weighted_precision = field_real(row[1], "weighted precision");
            report.weighted_recall = field_real(row[2], "weighted recall");
            report.weighted_f1 = field_real(row[3], "weighted f1");
        } else {
            report_parse_error("unknown row `" + name + "`");
        }
    }
    return report;
}

std::string export_report(const ClassReport& report, const std::string& format) {
    if (format == "text") return report_text(report);
    if (format == "csv") return report_csv(report);
    throw Error(ErrorCode::InvalidArgument,
                "unknown report format `" + format + "`; valid formats: text, csv");
}

std::string confusion_csv(const ConfusionMatrix& cm) {
    std::string out = ",pred_0,pred_1\n";
    out += "true_0," + std::to_string(cm.tn) + "," + std::to_string(cm.fp) + "\n";
    out += "true_1," + std::to_string(cm.fn) + "," + std::to_string(cm.tp) + "\n";
    return out;
}

} // namespace epinet
