#pragma once

// Hard filter: weighted wildcard keywords scored against record tokens.
//
// Scores are fixed-point milli-units (1000 == 1.0) so that threshold
// comparisons such as 0.6 + 0.4 >= 1 are exact.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <iterator>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "polifilter/records.hpp"

namespace polifilter {

using Milli = std::int64_t;

inline constexpr Milli kMilliPerUnit = 1000;
inline constexpr Milli kDefaultThresholdMilli = 1000;

/// Which record fields feed the hard filter.
enum class FieldMode { TitleKeywords, TitleAbstractKeywords };

inline std::string_view to_string(FieldMode mode) {
    return mode == FieldMode::TitleKeywords ? "title-keywords" : "title-abstract-keywords";
}

inline FieldMode parse_field_mode(std::string_view text) {
    if (text == "title-keywords" || text == "TITLE_KEYWORDS") return FieldMode::TitleKeywords;
    if (text == "title-abstract-keywords" || text == "TITLE_ABSTRACT_KEYWORDS") return FieldMode::TitleAbstractKeywords;
    throw std::invalid_argument("unknown field mode '" + std::string(text) + "'");
}

/// A keyword with optional leading and/or trailing '*'.
class Pattern {
public:
    enum class Kind { Exact, Prefix, Suffix, Infix };

    /// Parses "stem", "*stem", "stem*" or "*stem*". The stem is NFC-lowercased.
    static Pattern parse(std::string_view text) {
        text = detail::trim(text);
        bool leading = false;
        bool trailing = false;
        if (!text.empty() && text.front() == '*') {
            leading = true;
            text.remove_prefix(1);
        }
        if (!text.empty() && text.back() == '*') {
            trailing = true;
            text.remove_suffix(1);
        }
        if (text.empty()) throw std::invalid_argument("pattern has an empty stem");
        if (text.find('*') != std::string_view::npos)
            throw std::invalid_argument("pattern stem '" + std::string(text) + "' contains an inner '*'");
        if (std::any_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c) != 0; }))
            throw std::invalid_argument("pattern stem '" + std::string(text) + "' contains whitespace");
        std::string stem = lowercase_nfc(text);
        const NormalizedText tokens = normalize(stem);
        if (tokens.tokens.size() != 1 || tokens.tokens.front() != stem)
            throw std::invalid_argument("pattern stem '" + std::string(text) + "' is not a single word token");

        Kind kind = Kind::Exact;
        if (leading && trailing) kind = Kind::Infix;
        else if (leading) kind = Kind::Suffix;
        else if (trailing) kind = Kind::Prefix;
        return Pattern(kind, std::move(stem));
    }

    Kind kind() const noexcept { return kind_; }
    const std::string& stem() const noexcept { return stem_; }

    /// Canonical text form: the stem with its wildcards.
    std::string text() const {
        const bool leading = kind_ == Kind::Suffix || kind_ == Kind::Infix;
        const bool trailing = kind_ == Kind::Prefix || kind_ == Kind::Infix;
        return (leading ? "*" : "") + stem_ + (trailing ? "*" : "");
    }

    /// Matches one normalized token. Wildcards never span tokens.
    bool matches(std::string_view token) const noexcept {
        switch (kind_) {
        case Kind::Exact: return token == stem_;
        case Kind::Prefix: return token.starts_with(stem_);
        case Kind::Suffix: return token.ends_with(stem_);
        case Kind::Infix: return token.find(stem_) != std::string_view::npos;
        }
        return false;
    }

    friend bool operator==(const Pattern&, const Pattern&) = default;

private:
    Pattern(Kind kind, std::string stem) : kind_(kind), stem_(std::move(stem)) {}

    Kind kind_;
    std::string stem_;
};

inline bool pattern_matches(const Pattern& pattern, std::string_view token) { return pattern.matches(token); }

inline bool pattern_matches(std::string_view pattern, std::string_view token) {
    return Pattern::parse(pattern).matches(token);
}

struct LexiconEntry {
    Pattern pattern;
    Milli score_milli;
};

struct KeywordMatch {
    std::string pattern;
    Milli score_milli;
    std::string token;  ///< first token that matched

    friend bool operator==(const KeywordMatch&, const KeywordMatch&) = default;
};

struct ScoreBreakdown {
    Milli total_milli = 0;
    std::vector<KeywordMatch> matches;  ///< in lexicon entry order

    friend bool operator==(const ScoreBreakdown&, const ScoreBreakdown&) = default;
};

struct HardDecision {
    bool relevant = false;
    ScoreBreakdown breakdown;
    FieldMode mode = FieldMode::TitleKeywords;
    Milli threshold_milli = kDefaultThresholdMilli;
};

class LexiconError : public std::runtime_error {
public:
    LexiconError(std::size_t line, const std::string& message)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line),
          reason_(message) {}

    /// 1-based source line, 0 when not tied to a line.
    std::size_t line() const noexcept { return line_; }
    /// The message without the line prefix.
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t line_;
    std::string reason_;
};

/// Tokens the hard filter looks at for a record, in field order.
inline std::vector<std::string> field_tokens(const MetadataRecord& record, FieldMode mode) {
    std::vector<std::string> tokens;
    if (record.title) append_tokens(*record.title, tokens);
    if (mode == FieldMode::TitleAbstractKeywords && record.abstract) append_tokens(*record.abstract, tokens);
    for (const auto& keyword : record.keywords) append_tokens(keyword, tokens);
    return tokens;
}

/// An immutable weighted keyword list with a lookup index per wildcard kind.
class Lexicon {
public:
    Lexicon() = default;

    explicit Lexicon(std::vector<LexiconEntry> entries, Milli threshold_milli = kDefaultThresholdMilli)
        : entries_(std::move(entries)), threshold_milli_(threshold_milli) {
        if (threshold_milli_ <= 0) throw LexiconError(0, "threshold must be positive");
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            const LexiconEntry& entry = entries_[i];
            if (entry.score_milli <= 0 || entry.score_milli > kMilliPerUnit)
                throw LexiconError(0, "score of '" + entry.pattern.text() + "' outside (0, 1]");
            Index& index = index_for(entry.pattern.kind());
            if (!index.by_stem.emplace(entry.pattern.stem(), i).second)
                throw LexiconError(0, "duplicate pattern '" + entry.pattern.text() + "'");
            index.lengths.insert(entry.pattern.stem().size());
        }
    }

    const std::vector<LexiconEntry>& entries() const noexcept { return entries_; }
    Milli threshold_milli() const noexcept { return threshold_milli_; }
    std::size_t size() const noexcept { return entries_.size(); }

    /// Sums each matching entry once. Equivalent to testing every entry
    /// against every token, without the entry-count factor.
    ScoreBreakdown score_tokens(const std::vector<std::string>& tokens) const {
        std::vector<const std::string*> first_token(entries_.size(), nullptr);
        for (const std::string& token : tokens) {
            const std::string_view view(token);
            auto hit = [&](const Index& index, std::string_view piece) {
                const auto it = index.by_stem.find(piece);
                if (it != index.by_stem.end() && first_token[it->second] == nullptr) first_token[it->second] = &token;
            };
            hit(exact_, view);
            for (std::size_t len : prefix_.lengths) {
                if (len > view.size()) break;
                hit(prefix_, view.substr(0, len));
            }
            for (std::size_t len : suffix_.lengths) {
                if (len > view.size()) break;
                hit(suffix_, view.substr(view.size() - len));
            }
            for (std::size_t len : infix_.lengths) {
                if (len > view.size()) break;
                for (std::size_t offset = 0; offset + len <= view.size(); ++offset) hit(infix_, view.substr(offset, len));
            }
        }

        ScoreBreakdown breakdown;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (first_token[i] == nullptr) continue;
            breakdown.total_milli += entries_[i].score_milli;
            breakdown.matches.push_back({entries_[i].pattern.text(), entries_[i].score_milli, *first_token[i]});
        }
        return breakdown;
    }

    ScoreBreakdown score(const MetadataRecord& record, FieldMode mode) const {
        return score_tokens(field_tokens(record, mode));
    }

    HardDecision classify(const MetadataRecord& record, FieldMode mode) const {
        HardDecision decision;
        decision.breakdown = score(record, mode);
        decision.relevant = decision.breakdown.total_milli >= threshold_milli_;
        decision.mode = mode;
        decision.threshold_milli = threshold_milli_;
        return decision;
    }

private:
    struct StemHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
    };

    struct Index {
        std::unordered_map<std::string, std::size_t, StemHash, std::equal_to<>> by_stem;
        std::set<std::size_t> lengths;
    };

    Index& index_for(Pattern::Kind kind) {
        switch (kind) {
        case Pattern::Kind::Exact: return exact_;
        case Pattern::Kind::Prefix: return prefix_;
        case Pattern::Kind::Suffix: return suffix_;
        case Pattern::Kind::Infix: return infix_;
        }
        return exact_;
    }

    std::vector<LexiconEntry> entries_;
    Milli threshold_milli_ = kDefaultThresholdMilli;
    Index exact_, prefix_, suffix_, infix_;
};

inline ScoreBreakdown score_record(const Lexicon& lexicon, const MetadataRecord& record, FieldMode mode) {
    return lexicon.score(record, mode);
}

inline HardDecision classify_hard(const Lexicon& lexicon, const MetadataRecord& record, FieldMode mode) {
    return lexicon.classify(record, mode);
}

/// Parses a decimal score in (0, 1] into milli-units, rounding half away
/// from zero at the third decimal. Only plain "d[.ddd...]" forms are accepted.
inline Milli parse_score_milli(std::string_view text) {
    text = detail::trim(text);
    const std::string shown(text);
    std::size_t i = 0;
    Milli whole = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        if (whole > 1000000) throw std::invalid_argument("score '" + shown + "' outside (0, 1]");
        whole = whole * 10 + (text[i] - '0');
        ++i;
    }
    const std::size_t whole_digits = i;
    std::string fraction;
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') fraction += text[i++];
    }
    if (i != text.size() || (whole_digits == 0 && fraction.empty()))
        throw std::invalid_argument("score '" + shown + "' is not a decimal number");

    const bool fraction_nonzero = fraction.find_first_not_of('0') != std::string::npos;
    if ((whole == 0 && !fraction_nonzero) || whole > 1 || (whole == 1 && fraction_nonzero))
        throw std::invalid_argument("score '" + shown + "' outside (0, 1]");

    fraction.resize(std::max<std::size_t>(fraction.size(), 4), '0');
    Milli milli = whole * kMilliPerUnit + std::stoll(fraction.substr(0, 3));
    if (fraction[3] >= '5') ++milli;
    if (milli <= 0)
        throw std::invalid_argument("score '" + shown + "' rounds to zero at three decimals");
    return milli;
}

/// Loads "pattern<TAB>score" lines. Blank lines and '#' comments are skipped,
/// as is an optional "keyword<TAB>score" header before the first entry.
inline Lexicon load_lexicon(std::istream& in, Milli threshold_milli = kDefaultThresholdMilli) {
    std::vector<LexiconEntry> entries;
    std::unordered_map<std::string, std::size_t> first_line;
    std::string line;
    std::size_t line_no = 0;
    bool seen_content = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        const std::string_view content = detail::trim(line);
        if (content.empty() || content.front() == '#') continue;

        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw LexiconError(line_no, "expected 'pattern<TAB>score'");
        const std::string_view pattern_text = detail::trim(std::string_view(line).substr(0, tab));
        const std::string_view score_text = std::string_view(line).substr(tab + 1);
        if (score_text.find('\t') != std::string_view::npos)
            throw LexiconError(line_no, "expected exactly two tab-separated columns");
        if (!seen_content && pattern_text == "keyword" && detail::trim(score_text) == "score") {
            seen_content = true;
            continue;
        }
        seen_content = true;

        try {
            Pattern pattern = Pattern::parse(pattern_text);
            const Milli score = parse_score_milli(score_text);
            const auto [it, inserted] = first_line.emplace(pattern.text(), line_no);
            if (!inserted)
                throw LexiconError(line_no, "duplicate pattern '" + pattern.text() + "' (first defined at line " +
                                                std::to_string(it->second) + ")");
            entries.push_back({std::move(pattern), score});
        } catch (const LexiconError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw LexiconError(line_no, e.what());
        }
    }
    if (in.bad()) throw LexiconError(0, "read error");
    return Lexicon(std::move(entries), threshold_milli);
}

inline Lexicon load_lexicon(std::string_view text, Milli threshold_milli = kDefaultThresholdMilli) {
    std::istringstream in{std::string(text)};
    return load_lexicon(in, threshold_milli);
}

}  // namespace polifilter
