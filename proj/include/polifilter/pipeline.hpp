#pragma once

// Routing pipeline: type/source gate, DDC gate, abstract gate, language gate
// and the hard/soft filters, yielding one verdict per record with a trace of
// every stage it passed through.

#include <algorithm>
#include <atomic>
#include <concepts>
#include <cstddef>
#include <exception>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "polifilter/langdetect.hpp"
#include "polifilter/lexicon.hpp"
#include "polifilter/records.hpp"
#include "polifilter/softclf.hpp"

namespace polifilter {

template <class H>
concept HardFilter = requires(const H& filter, const MetadataRecord& record, FieldMode mode) {
    { filter.classify(record, mode) } -> std::same_as<HardDecision>;
};

static_assert(HardFilter<Lexicon>);

enum class Verdict { Politics, Multi, Excluded };
enum class Stage { TypeSource, Ddc, Abstract, HardFilter, Language, SoftFilter };
enum class LanguageFallback { Exclude, HardFilter };

inline std::string_view to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::Politics: return "POLITICS";
    case Verdict::Multi: return "MULTI";
    case Verdict::Excluded: return "EXCLUDED";
    }
    return "?";
}

inline std::string_view to_string(Stage stage) {
    switch (stage) {
    case Stage::TypeSource: return "TYPE_SOURCE";
    case Stage::Ddc: return "DDC";
    case Stage::Abstract: return "ABSTRACT";
    case Stage::HardFilter: return "HARD_FILTER";
    case Stage::Language: return "LANGUAGE";
    case Stage::SoftFilter: return "SOFT_FILTER";
    }
    return "?";
}

inline std::string_view to_string(LanguageFallback fallback) {
    return fallback == LanguageFallback::Exclude ? "exclude" : "hard-filter";
}

inline LanguageFallback parse_language_fallback(std::string_view text) {
    if (text == "exclude" || text == "EXCLUDE") return LanguageFallback::Exclude;
    if (text == "hard-filter" || text == "hard" || text == "HARD_FILTER") return LanguageFallback::HardFilter;
    throw std::invalid_argument("unknown language fallback '" + std::string(text) + "'");
}

struct PipelineConfig {
    std::set<std::string> allowed_doctypes = {"article", "review"};
    std::optional<std::set<std::string>> allowed_sources;
    std::size_t min_abstract_words = kDefaultMinAbstractWords;
    std::set<std::string> permitted_languages = default_permitted_languages();
    double min_language_confidence = kDefaultMinLanguageConfidence;
    FieldMode hard_mode_no_abstract = FieldMode::TitleKeywords;
    LanguageFallback language_fallback = LanguageFallback::HardFilter;
    /// On a soft-backend transport error, score with the hard filter over all
    /// fields instead of excluding the record.
    bool soft_fallback = true;

    void validate() const {
        if (allowed_doctypes.empty()) throw std::invalid_argument("allowed_doctypes must not be empty");
        if (permitted_languages.empty()) throw std::invalid_argument("permitted_languages must not be empty");
        if (allowed_sources && allowed_sources->empty())
            throw std::invalid_argument("allowed_sources, when set, must not be empty");
        if (min_abstract_words == 0) throw std::invalid_argument("min_abstract_words must be positive");
        if (!(min_language_confidence >= 0.0 && min_language_confidence <= 1.0))
            throw std::invalid_argument("min_language_confidence must be in [0, 1]");
    }

    nlohmann::json to_json() const {
        nlohmann::json out{{"allowed_doctypes", allowed_doctypes},
                           {"min_abstract_words", min_abstract_words},
                           {"permitted_languages", permitted_languages},
                           {"min_language_confidence", min_language_confidence},
                           {"hard_mode_no_abstract", to_string(hard_mode_no_abstract)},
                           {"language_fallback", to_string(language_fallback)},
                           {"soft_fallback", soft_fallback}};
        out["allowed_sources"] = allowed_sources ? nlohmann::json(*allowed_sources) : nlohmann::json(nullptr);
        return out;
    }
};

struct TraceStep {
    Stage stage;
    std::string outcome;

    friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

using Evidence = std::variant<std::monostate, HardDecision, Classification>;

struct PipelineDecision {
    std::string id;
    Verdict verdict = Verdict::Excluded;
    Stage deciding_stage = Stage::TypeSource;
    std::vector<TraceStep> trace;
    Evidence evidence;
    bool degraded = false;  ///< soft filter failed and the hard filter decided instead
};

namespace detail {

inline std::string lower_ascii(std::string_view text) {
    std::string out(detail::trim(text));
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

struct RouteState {
    PipelineDecision decision;

    void step(Stage stage, std::string outcome) { decision.trace.push_back({stage, std::move(outcome)}); }

    PipelineDecision finish(Stage stage, Verdict verdict) {
        decision.deciding_stage = stage;
        decision.verdict = verdict;
        return std::move(decision);
    }
};

template <HardFilter H>
PipelineDecision decide_hard(RouteState& state, const H& hard, const MetadataRecord& record, FieldMode mode) {
    HardDecision result = hard.classify(record, mode);
    state.step(Stage::HardFilter, std::string(result.relevant ? "relevant:" : "not-relevant:") +
                                      std::to_string(result.breakdown.total_milli) + "/" + std::string(to_string(mode)));
    const Verdict verdict = result.relevant ? Verdict::Politics : Verdict::Multi;
    state.decision.evidence = std::move(result);
    return state.finish(Stage::HardFilter, verdict);
}

}  // namespace detail

/// Routes one record. Stages run in order and the first terminal outcome
/// wins:
///   1. doctype/source allowlists (mismatch -> EXCLUDED)
///   2. any DDC code in 320-328 -> POLITICS
///   3. abstract shorter than min_abstract_words -> hard filter on title+keywords
///   4. abstract language not permitted -> EXCLUDED or hard filter on all fields
///   5. soft classifier on title+abstract
/// `soft` may be null, in which case step 5 uses the hard filter on all fields.
/// Component exceptions become an EXCLUDED decision at the failing stage.
template <HardFilter H, LanguageDetector D, SoftClassifier S>
PipelineDecision route(const MetadataRecord& record, const PipelineConfig& config, const H& hard, const D& detector,
                       const S* soft) {
    detail::RouteState state;
    state.decision.id = record.id;
    Stage current = Stage::TypeSource;
    try {
        if (auto violation = validate(record)) {
            state.step(Stage::TypeSource, "invalid-record:" + *violation);
            return state.finish(Stage::TypeSource, Verdict::Excluded);
        }
        const std::string doctype = record.doctype ? detail::lower_ascii(*record.doctype) : std::string();
        if (!config.allowed_doctypes.contains(doctype)) {
            state.step(Stage::TypeSource, "doctype-not-allowed:" + (record.doctype ? doctype : std::string("absent")));
            return state.finish(Stage::TypeSource, Verdict::Excluded);
        }
        if (config.allowed_sources && (!record.source || !config.allowed_sources->contains(*record.source))) {
            state.step(Stage::TypeSource, "source-not-allowed:" + record.source.value_or("absent"));
            return state.finish(Stage::TypeSource, Verdict::Excluded);
        }
        state.step(Stage::TypeSource, "pass");

        current = Stage::Ddc;
        if (ddc_in_politics_range(record)) {
            state.step(Stage::Ddc, "in-range");
            return state.finish(Stage::Ddc, Verdict::Politics);
        }
        state.step(Stage::Ddc, record.ddc.empty() ? "absent" : "out-of-range");

        current = Stage::Abstract;
        if (!has_valid_abstract(record, config.min_abstract_words)) {
            state.step(Stage::Abstract, record.abstract ? "too-short" : "absent");
            current = Stage::HardFilter;
            return detail::decide_hard(state, hard, record, config.hard_mode_no_abstract);
        }
        state.step(Stage::Abstract, "valid");

        current = Stage::Language;
        const std::optional<LangGuess> guess = detector.detect(*record.abstract);
        if (!is_permitted(guess, config.permitted_languages, config.min_language_confidence)) {
            std::string outcome = "undetermined";
            if (guess) {
                outcome = (config.permitted_languages.contains(guess->code) ? "low-confidence:" : "not-permitted:") +
                          guess->code;
            }
            state.step(Stage::Language, std::move(outcome));
            if (config.language_fallback == LanguageFallback::Exclude)
                return state.finish(Stage::Language, Verdict::Excluded);
            current = Stage::HardFilter;
            return detail::decide_hard(state, hard, record, FieldMode::TitleAbstractKeywords);
        }
        state.step(Stage::Language, "permitted:" + guess->code);

        current = Stage::SoftFilter;
        if (soft == nullptr) {
            state.step(Stage::SoftFilter, "disabled");
            current = Stage::HardFilter;
            return detail::decide_hard(state, hard, record, FieldMode::TitleAbstractKeywords);
        }
        std::optional<Classification> result;
        try {
            result = soft->classify(ClassifierInput::from(record));
        } catch (const TransportError& e) {
            state.step(Stage::SoftFilter, std::string("transport-error:") + e.what());
            if (!config.soft_fallback) return state.finish(Stage::SoftFilter, Verdict::Excluded);
            state.decision.degraded = true;
            current = Stage::HardFilter;
            return detail::decide_hard(state, hard, record, FieldMode::TitleAbstractKeywords);
        }
        state.step(Stage::SoftFilter, std::string(to_string(result->label)));
        state.decision.evidence = *result;
        return state.finish(Stage::SoftFilter, result->label == Label::Politics ? Verdict::Politics : Verdict::Multi);
    } catch (const std::exception& e) {
        state.decision.evidence = std::monostate{};
        state.step(current, std::string("error:") + e.what());
        return state.finish(current, Verdict::Excluded);
    }
}

/// Overload for "no soft backend".
template <HardFilter H, LanguageDetector D>
PipelineDecision route(const MetadataRecord& record, const PipelineConfig& config, const H& hard, const D& detector,
                       std::nullptr_t) {
    return route(record, config, hard, detector, static_cast<const SoftBackend*>(nullptr));
}

/// Routes records on up to `jobs` threads; output order matches input order.
template <HardFilter H, LanguageDetector D, SoftClassifier S>
std::vector<PipelineDecision> route_batch(std::span<const MetadataRecord> records, const PipelineConfig& config,
                                          const H& hard, const D& detector, const S* soft, unsigned jobs = 1) {
    std::vector<PipelineDecision> decisions(records.size());
    const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), records.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < records.size(); ++i)
            decisions[i] = route(records[i], config, hard, detector, soft);
        return decisions;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < records.size(); i = next.fetch_add(1))
                    decisions[i] = route(records[i], config, hard, detector, soft);
            });
    }
    return decisions;
}

// ---------------------------------------------------------------------------
// Output

inline nlohmann::json to_json(const ScoreBreakdown& breakdown) {
    nlohmann::json matches = nlohmann::json::array();
    for (const auto& match : breakdown.matches)
        matches.push_back({{"pattern", match.pattern}, {"score_milli", match.score_milli}, {"token", match.token}});
    return {{"total_milli", breakdown.total_milli}, {"matches", matches}};
}

inline nlohmann::json to_json(const PipelineDecision& decision) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& step : decision.trace) trace.push_back({{"stage", to_string(step.stage)}, {"outcome", step.outcome}});
    nlohmann::json evidence = nullptr;
    if (const auto* hard = std::get_if<HardDecision>(&decision.evidence)) {
        evidence = to_json(hard->breakdown);
        evidence["kind"] = "hard";
        evidence["mode"] = to_string(hard->mode);
        evidence["threshold_milli"] = hard->threshold_milli;
    } else if (const auto* soft = std::get_if<Classification>(&decision.evidence)) {
        evidence = {{"kind", "soft"}, {"label", to_string(soft->label)}, {"score", soft->score}};
    }
    nlohmann::json out{{"id", decision.id},
                       {"verdict", to_string(decision.verdict)},
                       {"deciding_stage", to_string(decision.deciding_stage)},
                       {"trace", trace},
                       {"evidence", evidence}};
    if (decision.degraded) out["degraded"] = true;
    return out;
}

struct DecisionCounts {
    std::size_t read = 0;
    std::size_t politics = 0;
    std::size_t multi = 0;
    std::size_t excluded = 0;
    std::size_t degraded = 0;

    void add(const PipelineDecision& decision) {
        ++read;
        switch (decision.verdict) {
        case Verdict::Politics: ++politics; break;
        case Verdict::Multi: ++multi; break;
        case Verdict::Excluded: ++excluded; break;
        }
        if (decision.degraded) ++degraded;
    }

    nlohmann::json to_json() const {
        return {{"read", read}, {"politics", politics}, {"multi", multi}, {"excluded", excluded}, {"degraded", degraded}};
    }
};

}  // namespace polifilter
