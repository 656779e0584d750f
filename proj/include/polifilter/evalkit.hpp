#pragma once

// Evaluation: confusion tallies, per-class precision/recall/F1 and
// accuracy, optionally broken down by language, rendered as tables.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "polifilter/softclf.hpp"

namespace polifilter {

/// counts[gold][predicted], indexed by Label.
struct ConfusionCounts {
    std::array<std::array<std::uint64_t, 2>, 2> counts{};

    std::uint64_t& at(Label gold, Label predicted) {
        return counts[static_cast<std::size_t>(gold)][static_cast<std::size_t>(predicted)];
    }
    std::uint64_t at(Label gold, Label predicted) const {
        return counts[static_cast<std::size_t>(gold)][static_cast<std::size_t>(predicted)];
    }

    std::uint64_t total() const { return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1]; }
    std::uint64_t correct() const { return counts[0][0] + counts[1][1]; }

    ConfusionCounts& operator+=(const ConfusionCounts& other) {
        for (std::size_t g = 0; g < 2; ++g)
            for (std::size_t p = 0; p < 2; ++p) counts[g][p] += other.counts[g][p];
        return *this;
    }

    friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) { return a += b; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct LabelPair {
    std::string gold;
    std::string predicted;
    std::optional<std::string> language;
};

struct ConfusionTally {
    ConfusionCounts overall;
    std::map<std::string, ConfusionCounts> by_language;
    std::size_t errors = 0;
    std::vector<std::string> error_messages;  ///< first few only

    ConfusionTally& operator+=(const ConfusionTally& other) {
        overall += other.overall;
        for (const auto& [language, counts] : other.by_language) by_language[language] += counts;
        errors += other.errors;
        for (const auto& message : other.error_messages)
            if (error_messages.size() < kMaxMessages) error_messages.push_back(message);
        return *this;
    }

    void add(const LabelPair& pair) {
        const auto gold = parse_label(pair.gold);
        const auto predicted = parse_label(pair.predicted);
        if (!gold || !predicted) {
            ++errors;
            if (error_messages.size() < kMaxMessages)
                error_messages.push_back("unknown label in pair ('" + pair.gold + "', '" + pair.predicted + "')");
            return;
        }
        ++overall.at(*gold, *predicted);
        if (pair.language) ++by_language[*pair.language].at(*gold, *predicted);
    }

    static constexpr std::size_t kMaxMessages = 20;
};

template <class Range>
ConfusionTally confusion(const Range& pairs) {
    ConfusionTally tally;
    for (const LabelPair& pair : pairs) tally.add(pair);
    return tally;
}

struct ClassMetrics {
    Label label = Label::Politics;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
    std::uint64_t predicted = 0;
};

struct MetricsReport {
    std::array<ClassMetrics, 2> classes{};
    double accuracy = 0.0;
    std::uint64_t total = 0;
    std::map<std::string, MetricsReport> by_language;

    const ClassMetrics& of(Label label) const { return classes[static_cast<std::size_t>(label)]; }
};

/// Harmonic mean, 0 when both inputs are 0.
inline double f1_score(double precision, double recall) {
    const double denominator = precision + recall;
    return denominator > 0.0 ? 2.0 * precision * recall / denominator : 0.0;
}

inline MetricsReport metrics(const ConfusionCounts& counts) {
    MetricsReport report;
    report.total = counts.total();
    report.accuracy = report.total > 0 ? static_cast<double>(counts.correct()) / static_cast<double>(report.total) : 0.0;
    for (Label label : kLabels) {
        const Label other = label == Label::Politics ? Label::Multi : Label::Politics;
        const auto tp = counts.at(label, label);
        const auto fp = counts.at(other, label);
        const auto fn = counts.at(label, other);
        ClassMetrics& m = report.classes[static_cast<std::size_t>(label)];
        m.label = label;
        m.support = tp + fn;
        m.predicted = tp + fp;
        m.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        m.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        m.f1 = f1_score(m.precision, m.recall);
    }
    return report;
}

inline MetricsReport metrics(const ConfusionTally& tally) {
    MetricsReport report = metrics(tally.overall);
    for (const auto& [language, counts] : tally.by_language) report.by_language.emplace(language, metrics(counts));
    return report;
}

enum class TableFormat { Markdown, Tsv };

inline TableFormat parse_table_format(std::string_view text) {
    if (text == "markdown" || text == "md") return TableFormat::Markdown;
    if (text == "tsv" || text == "tab") return TableFormat::Tsv;
    throw std::invalid_argument("unknown table format '" + std::string(text) + "'");
}

/// Three decimals, halves rounded away from zero.
inline std::string format3(double value) {
    const auto scaled = static_cast<long long>(std::round(value * 1000.0));
    const long long magnitude = scaled < 0 ? -scaled : scaled;
    std::string out = (scaled < 0 ? "-" : "") + std::to_string(magnitude / 1000) + ".";
    const std::string fraction = std::to_string(magnitude % 1000);
    return out + std::string(3 - fraction.size(), '0') + fraction;
}

inline std::string language_name(std::string_view code) {
    static const std::map<std::string, std::string, std::less<>> names = {
        {"en", "English"}, {"de", "German"}, {"fr", "French"}, {"es", "Spanish"},
        {"it", "Italian"}, {"nl", "Dutch"},  {"pt", "Portuguese"}};
    const auto it = names.find(code);
    return it == names.end() ? std::string(code) : it->second;
}

struct ApproachReport {
    std::string approach;
    MetricsReport report;
};

namespace detail {

inline bool has_row(const ClassMetrics& m) { return m.support > 0 || m.predicted > 0; }

inline std::string render_rows(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                               std::size_t text_columns, TableFormat format) {
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& cells) {
        if (format == TableFormat::Tsv) {
            for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "\t" : "") << cells[i];
        } else {
            out << "|";
            for (const auto& cell : cells) out << ' ' << cell << " |";
        }
        out << '\n';
    };
    emit(header);
    if (format == TableFormat::Markdown) {
        std::vector<std::string> rule;
        for (std::size_t i = 0; i < header.size(); ++i) rule.push_back(i < text_columns ? "---" : "---:");
        emit(rule);
    }
    for (const auto& row : rows) emit(row);
    return out.str();
}

}  // namespace detail

/// Per-class table: one row per (approach, label) with accuracy on the last
/// row of each approach block.
inline std::string render_report(const std::vector<ApproachReport>& reports, TableFormat format) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [approach, report] : reports) {
        std::vector<const ClassMetrics*> shown;
        for (const auto& m : report.classes)
            if (detail::has_row(m)) shown.push_back(&m);
        for (std::size_t i = 0; i < shown.size(); ++i) {
            const ClassMetrics& m = *shown[i];
            rows.push_back({approach, std::string(to_string(m.label)), format3(m.precision), format3(m.recall),
                            format3(m.f1), std::to_string(m.support),
                            i + 1 == shown.size() ? format3(report.accuracy) : std::string()});
        }
    }
    return detail::render_rows({"approach", "label", "precision", "recall", "f1-score", "support", "accuracy"}, rows,
                               2, format);
}

/// Per-class-per-language table. Languages are ordered by total support
/// (descending, ties by code); within a language politics precedes multi.
inline std::string render_language_report(const std::vector<ApproachReport>& reports, TableFormat format) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [approach, report] : reports) {
        std::vector<std::pair<std::string, const MetricsReport*>> languages;
        for (const auto& [code, sub] : report.by_language) languages.emplace_back(code, &sub);
        std::stable_sort(languages.begin(), languages.end(),
                         [](const auto& a, const auto& b) { return a.second->total > b.second->total; });
        for (const auto& [code, sub] : languages)
            for (const auto& m : sub->classes)
                if (detail::has_row(m))
                    rows.push_back({approach, std::string(to_string(m.label)), language_name(code), format3(m.precision),
                                    format3(m.recall), format3(m.f1), std::to_string(m.support)});
    }
    return detail::render_rows({"approach", "label", "language", "precision", "recall", "f1-score", "support"}, rows,
                               3, format);
}

inline std::string render_report(const MetricsReport& report, TableFormat format, std::string_view approach = "filter") {
    return render_report(std::vector<ApproachReport>{{std::string(approach), report}}, format);
}

}  // namespace polifilter
