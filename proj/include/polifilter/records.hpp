#pragma once

// Record model, text normalization and record-level predicates shared by
// every filtering stage.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/brkiter.h>
#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/ubrk.h>
#include <unicode/unistr.h>

namespace polifilter {

inline constexpr int kMinRecordYear = 1400;
inline constexpr int kMaxRecordYear = 2100;
inline constexpr std::size_t kDefaultMinAbstractWords = 20;

/// One scholarly item as harvested from an aggregator.
struct MetadataRecord {
    std::string id;
    std::optional<std::string> title;
    std::optional<std::string> abstract;
    std::vector<std::string> keywords;
    std::optional<std::string> language;  ///< ISO-639-1, lowercase
    std::vector<std::string> ddc;         ///< raw DDC strings, e.g. "328.3"
    std::optional<std::string> doctype;
    std::optional<std::string> source;
    std::optional<int> year;

    friend bool operator==(const MetadataRecord&, const MetadataRecord&) = default;
};

inline bool is_language_code(std::string_view code) {
    return code.size() == 2 && code[0] >= 'a' && code[0] <= 'z' && code[1] >= 'a' && code[1] <= 'z';
}

/// Checks the per-record invariants. Returns the first violated one, or
/// nothing when the record is well formed. Batch-level id uniqueness is the
/// caller's concern.
inline std::optional<std::string> validate(const MetadataRecord& record) {
    if (record.id.empty()) return "missing-id";
    if (record.language && !is_language_code(*record.language)) return "invalid-field:language";
    if (record.year && (*record.year < kMinRecordYear || *record.year > kMaxRecordYear))
        return "invalid-field:year";
    return std::nullopt;
}

namespace detail {

inline const icu::Normalizer2& nfc() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* instance = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status) || instance == nullptr)
        throw std::runtime_error(std::string("ICU NFC normalizer unavailable: ") + u_errorName(status));
    return *instance;
}

// BreakIterator instances are stateful; one per thread.
inline icu::BreakIterator& word_breaker() {
    thread_local std::unique_ptr<icu::BreakIterator> breaker = [] {
        UErrorCode status = U_ZERO_ERROR;
        std::unique_ptr<icu::BreakIterator> it(
            icu::BreakIterator::createWordInstance(icu::Locale::getRoot(), status));
        if (U_FAILURE(status) || !it)
            throw std::runtime_error(std::string("ICU word break iterator unavailable: ") + u_errorName(status));
        return it;
    }();
    return *breaker;
}

inline icu::UnicodeString nfc_lower(std::string_view text) {
    icu::UnicodeString source =
        icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2& normalizer = nfc();
    icu::UnicodeString composed;
    if (normalizer.isNormalized(source, status) && U_SUCCESS(status)) {
        composed = std::move(source);
    } else {
        status = U_ZERO_ERROR;
        composed = normalizer.normalize(source, status);
        if (U_FAILURE(status)) composed = source;
    }
    composed.toLower(icu::Locale::getRoot());
    // Lowercasing can produce decomposed sequences (e.g. U+0130).
    status = U_ZERO_ERROR;
    if (!normalizer.isNormalized(composed, status)) {
        status = U_ZERO_ERROR;
        icu::UnicodeString recomposed = normalizer.normalize(composed, status);
        if (U_SUCCESS(status)) composed = std::move(recomposed);
    }
    return composed;
}

inline std::string to_utf8(const icu::UnicodeString& text) {
    std::string out;
    text.toUTF8String(out);
    return out;
}

inline std::string_view trim(std::string_view s) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace detail

/// Lowercase word tokens of a text plus the text they came from.
struct NormalizedText {
    std::vector<std::string> tokens;
    std::string raw;

    /// Tokens joined by single spaces; normalizing this gives the same tokens.
    std::string reconstruct() const {
        std::string out;
        for (const auto& token : tokens) {
            if (!out.empty()) out += ' ';
            out += token;
        }
        return out;
    }
};

/// Appends the normalized word tokens of `text` to `out`.
inline void append_tokens(std::string_view text, std::vector<std::string>& out) {
    if (text.empty()) return;
    const icu::UnicodeString lowered = detail::nfc_lower(text);
    icu::BreakIterator& breaker = detail::word_breaker();
    breaker.setText(lowered);
    int32_t start = breaker.first();
    for (int32_t end = breaker.next(); end != icu::BreakIterator::DONE; start = end, end = breaker.next()) {
        const int32_t status = breaker.getRuleStatus();
        // Whitespace and punctuation segments carry the NONE status.
        if (status >= UBRK_WORD_NONE && status < UBRK_WORD_NONE_LIMIT) continue;
        std::string token;
        lowered.tempSubStringBetween(start, end).toUTF8String(token);
        if (!token.empty()) out.push_back(std::move(token));
    }
}

/// NFC-composes, lowercases and splits `text` on Unicode word boundaries.
inline NormalizedText normalize(std::string_view text) {
    NormalizedText result;
    result.raw = std::string(text);
    append_tokens(text, result.tokens);
    return result;
}

/// NFC + lowercase without segmentation. Used for lexicon stems and labels.
inline std::string lowercase_nfc(std::string_view text) { return detail::to_utf8(detail::nfc_lower(text)); }

inline std::size_t word_count(std::string_view text) {
    std::vector<std::string> tokens;
    append_tokens(text, tokens);
    return tokens.size();
}

/// True iff the abstract exists and has at least `min_words` normalized tokens.
inline bool has_valid_abstract(const MetadataRecord& record, std::size_t min_words = kDefaultMinAbstractWords) {
    if (min_words == 0) throw std::invalid_argument("min_words must be positive");
    if (!record.abstract) return false;
    return word_count(*record.abstract) >= min_words;
}

/// Integer class number of a DDC code ("328.3" -> 328). Codes that are not
/// digits optionally followed by '.' and more digits yield nothing.
inline std::optional<int> ddc_class_number(std::string_view code) {
    code = detail::trim(code);
    std::size_t i = 0;
    int value = 0;
    while (i < code.size() && std::isdigit(static_cast<unsigned char>(code[i]))) {
        if (value > 100000) return std::nullopt;
        value = value * 10 + (code[i] - '0');
        ++i;
    }
    if (i == 0) return std::nullopt;
    if (i == code.size()) return value;
    if (code[i] != '.') return std::nullopt;
    for (std::size_t j = i + 1; j < code.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(code[j]))) return std::nullopt;
    return value;
}

inline bool ddc_code_in_politics_range(std::string_view code) {
    const auto number = ddc_class_number(code);
    return number && *number >= 320 && *number <= 328;
}

/// True iff any DDC code of the record falls in the political science classes 320-328.
inline bool ddc_in_politics_range(const MetadataRecord& record) {
    return std::any_of(record.ddc.begin(), record.ddc.end(),
                       [](const std::string& code) { return ddc_code_in_politics_range(code); });
}

}  // namespace polifilter
