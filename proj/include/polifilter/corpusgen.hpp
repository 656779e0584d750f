#pragma once

// Training-corpus construction: criteria-based selection of positive and
// negative records and a seeded, stratified 60/20/20 split.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "polifilter/ingest.hpp"
#include "polifilter/langdetect.hpp"
#include "polifilter/lexicon.hpp"
#include "polifilter/records.hpp"
#include "polifilter/softclf.hpp"

namespace polifilter {

enum class DdcRule { InPoliticsRange, NotPoliticsRange, Any };

inline DdcRule parse_ddc_rule(std::string_view text) {
    if (text == "in") return DdcRule::InPoliticsRange;
    if (text == "not") return DdcRule::NotPoliticsRange;
    if (text == "any") return DdcRule::Any;
    throw std::invalid_argument("unknown DDC rule '" + std::string(text) + "' (expected in, not or any)");
}

struct SelectionCriteria {
    Label class_target = Label::Politics;
    std::set<std::string> doctypes = {"article", "review"};
    DdcRule ddc_rule = DdcRule::InPoliticsRange;
    std::set<std::string> languages = {"en"};
    double min_language_confidence = kDefaultMinLanguageConfidence;
    /// Year bound; strict ("published after") unless `year_bound_inclusive`.
    std::optional<int> min_year;
    bool year_bound_inclusive = false;
    bool require_abstract = true;
    std::size_t min_abstract_words = kDefaultMinAbstractWords;
    /// Records with any title/keyword/abstract token matching this are dropped.
    std::optional<std::string> exclusion_pattern;
    /// Optional journal allowlist, checked against the record's source.
    std::optional<std::set<std::string>> journals;

    /// English politics class: DDC 320-328, published after 2018.
    static SelectionCriteria english_politics() {
        SelectionCriteria c;
        c.min_year = 2018;
        return c;
    }

    /// English multi class: DDC outside 320-328, after 2015, no "politi*".
    static SelectionCriteria english_multi() {
        SelectionCriteria c;
        c.class_target = Label::Multi;
        c.ddc_rule = DdcRule::NotPoliticsRange;
        c.min_year = 2015;
        c.exclusion_pattern = "politi*";
        return c;
    }

    static SelectionCriteria multilingual_politics() {
        SelectionCriteria c;
        c.languages = {"en", "de", "fr"};
        return c;
    }

    static SelectionCriteria multilingual_multi() {
        SelectionCriteria c = english_multi();
        c.languages = {"en", "de", "fr"};
        c.min_year.reset();
        return c;
    }

    void validate() const {
        if (class_target == Label::Multi && !exclusion_pattern)
            throw std::invalid_argument("multi-class selection requires an exclusion pattern");
        if (doctypes.empty()) throw std::invalid_argument("doctypes must not be empty");
        if (languages.empty()) throw std::invalid_argument("languages must not be empty");
        if (min_abstract_words == 0) throw std::invalid_argument("min_abstract_words must be positive");
        if (exclusion_pattern) (void)Pattern::parse(*exclusion_pattern);
    }
};

struct LabeledRecord {
    MetadataRecord record;
    Label label;

    friend bool operator==(const LabeledRecord&, const LabeledRecord&) = default;
};

/// True iff any title, keyword or abstract token matches `pattern`.
inline bool mentions(const MetadataRecord& record, const Pattern& pattern) {
    for (const auto& token : field_tokens(record, FieldMode::TitleAbstractKeywords))
        if (pattern.matches(token)) return true;
    return false;
}

/// Checks every criterion; the abstract language is detected, not read from metadata.
template <LanguageDetector D>
bool passes(const MetadataRecord& record, const SelectionCriteria& criteria, const D& detector) {
    if (!record.doctype || !criteria.doctypes.contains(lowercase_nfc(detail::trim(*record.doctype)))) return false;
    switch (criteria.ddc_rule) {
    case DdcRule::InPoliticsRange:
        if (!ddc_in_politics_range(record)) return false;
        break;
    case DdcRule::NotPoliticsRange: {
        bool any_parseable = false;
        for (const auto& code : record.ddc) any_parseable = any_parseable || ddc_class_number(code).has_value();
        if (!any_parseable || ddc_in_politics_range(record)) return false;
        break;
    }
    case DdcRule::Any: break;
    }
    if (criteria.min_year) {
        if (!record.year) return false;
        if (criteria.year_bound_inclusive ? *record.year < *criteria.min_year : *record.year <= *criteria.min_year)
            return false;
    }
    if (criteria.journals && (!record.source || !criteria.journals->contains(*record.source))) return false;
    if (criteria.require_abstract && !has_valid_abstract(record, criteria.min_abstract_words)) return false;
    if (criteria.exclusion_pattern && mentions(record, Pattern::parse(*criteria.exclusion_pattern))) return false;
    if (record.abstract) {
        if (!is_permitted(detector.detect(*record.abstract), criteria.languages, criteria.min_language_confidence))
            return false;
    } else if (!record.language || !criteria.languages.contains(*record.language)) {
        return false;
    }
    return true;
}

/// Keeps the records that pass, labeled with the criteria's target class.
template <LanguageDetector D>
std::vector<LabeledRecord> select(std::span<const MetadataRecord> records, const SelectionCriteria& criteria,
                                  const D& detector) {
    criteria.validate();
    std::vector<LabeledRecord> selected;
    for (const auto& record : records)
        if (passes(record, criteria, detector)) selected.push_back({record, criteria.class_target});
    return selected;
}

struct CorpusSplit {
    std::vector<LabeledRecord> train;
    std::vector<LabeledRecord> test;
    std::vector<LabeledRecord> validation;
    std::uint64_t seed = 0;
};

/// Sizes for n records: floor of 60/20/20, remainder handed out train first,
/// then test, then validation. Each part is within one record of its share.
inline std::array<std::size_t, 3> split_sizes(std::size_t n) {
    std::array<std::size_t, 3> sizes = {n * 3 / 5, n / 5, n / 5};
    std::size_t remainder = n - sizes[0] - sizes[1] - sizes[2];
    for (std::size_t i = 0; remainder > 0; i = (i + 1) % 3, --remainder) ++sizes[i];
    return sizes;
}

namespace detail {

// Unbiased draw in [0, bound) from mt19937_64; std::uniform_int_distribution
// differs between standard libraries, this does not.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t value;
    do value = rng();
    while (value >= limit);
    return value % bound;
}

}  // namespace detail

/// Seeded Fisher-Yates shuffle per label (politics, then multi) followed by
/// a 60/20/20 cut of each label group.
inline CorpusSplit split(std::span<const LabeledRecord> records, std::uint64_t seed) {
    if (records.empty()) throw std::invalid_argument("cannot split an empty corpus");
    CorpusSplit out;
    out.seed = seed;
    std::mt19937_64 rng(seed);
    for (Label label : kLabels) {
        std::vector<LabeledRecord> group;
        for (const auto& r : records)
            if (r.label == label) group.push_back(r);
        for (std::size_t i = group.size(); i > 1; --i) std::swap(group[i - 1], group[detail::bounded(rng, i)]);
        const auto sizes = split_sizes(group.size());
        auto it = std::make_move_iterator(group.begin());
        out.train.insert(out.train.end(), it, it + static_cast<std::ptrdiff_t>(sizes[0]));
        it += static_cast<std::ptrdiff_t>(sizes[0]);
        out.test.insert(out.test.end(), it, it + static_cast<std::ptrdiff_t>(sizes[1]));
        it += static_cast<std::ptrdiff_t>(sizes[1]);
        out.validation.insert(out.validation.end(), it, it + static_cast<std::ptrdiff_t>(sizes[2]));
    }
    return out;
}

inline nlohmann::json to_json(const LabeledRecord& labeled) {
    nlohmann::json out = to_json(labeled.record);
    out["label"] = to_string(labeled.label);
    return out;
}

/// Reads a labeled record object ({...record fields, "label": ...}).
inline LabeledRecord labeled_from_json(const nlohmann::json& object) {
    LabeledRecord out{record_from_json(object), Label::Politics};
    const auto it = object.find("label");
    if (it == object.end() || !it->is_string()) throw std::runtime_error("missing-label");
    const auto label = parse_label(it->get<std::string>());
    if (!label) throw std::runtime_error("invalid-field:label");
    out.label = *label;
    return out;
}

}  // namespace polifilter
