#pragma once

// Language gate: a pluggable detector contract plus a character n-gram
// detector built from embedded reference texts.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "polifilter/langdetect_profiles.hpp"
#include "polifilter/records.hpp"

namespace polifilter {

struct LangGuess {
    std::string code;
    double confidence = 0.0;  ///< in [0, 1]

    friend bool operator==(const LangGuess&, const LangGuess&) = default;
};

/// Anything that maps text to a language guess; nothing means undetermined.
template <class D>
concept LanguageDetector = requires(const D& detector, std::string_view text) {
    { detector.detect(text) } -> std::convertible_to<std::optional<LangGuess>>;
};

inline const std::set<std::string>& default_permitted_languages() {
    static const std::set<std::string> languages = {"en", "de", "fr"};
    return languages;
}

inline constexpr double kDefaultMinLanguageConfidence = 0.5;

inline bool is_permitted(const std::optional<LangGuess>& guess, const std::set<std::string>& permitted,
                         double min_confidence = kDefaultMinLanguageConfidence) {
    return guess && guess->confidence >= min_confidence && permitted.contains(guess->code);
}

/// Multinomial naive Bayes over character 1-3 grams of space-padded tokens.
/// Confidence is the posterior of the best language under a uniform prior.
class NgramDetector {
public:
    static constexpr std::string_view kVersion = "ngram-nb-1";
    static constexpr std::size_t kMinTokens = 3;

    NgramDetector() {
        std::vector<std::pair<std::string, std::string>> samples;
        for (const auto& reference : profiles::kReferenceTexts)
            samples.emplace_back(std::string(reference.code), std::string(reference.text));
        train(samples);
    }

    /// Builds profiles from caller-supplied (code, text) samples.
    explicit NgramDetector(const std::vector<std::pair<std::string, std::string>>& samples) { train(samples); }

    std::optional<LangGuess> detect(std::string_view text) const {
        const NormalizedText normalized = normalize(text);
        if (normalized.tokens.size() < kMinTokens || languages_.empty()) return std::nullopt;

        std::vector<double> log_likelihood(languages_.size(), 0.0);
        for_each_gram(normalized.tokens, [&](std::string_view gram) {
            const auto it = gram_index_.find(std::string(gram));
            for (std::size_t l = 0; l < languages_.size(); ++l) {
                const double count = it == gram_index_.end() ? 0.0 : counts_[l][it->second];
                log_likelihood[l] += std::log((count + 1.0) / denominators_[l]);
            }
        });

        std::size_t best = 0;
        for (std::size_t l = 1; l < languages_.size(); ++l)
            if (log_likelihood[l] > log_likelihood[best]) best = l;
        double normalizer = 0.0;
        for (double value : log_likelihood) normalizer += std::exp(value - log_likelihood[best]);
        return LangGuess{languages_[best], std::clamp(1.0 / normalizer, 0.0, 1.0)};
    }

    const std::vector<std::string>& languages() const noexcept { return languages_; }

private:
    template <class Fn>
    static void for_each_gram(const std::vector<std::string>& tokens, Fn&& fn) {
        for (const auto& token : tokens) {
            const std::string padded = " " + token + " ";
            // Offsets of UTF-8 code point starts, plus the end.
            std::vector<std::size_t> starts;
            for (std::size_t i = 0; i < padded.size(); ++i)
                if ((static_cast<unsigned char>(padded[i]) & 0xC0) != 0x80) starts.push_back(i);
            starts.push_back(padded.size());
            const std::size_t chars = starts.size() - 1;
            for (std::size_t n = 1; n <= 3; ++n)
                for (std::size_t i = 0; i + n <= chars; ++i) {
                    const std::string_view gram(padded.data() + starts[i], starts[i + n] - starts[i]);
                    if (gram != " ") fn(gram);
                }
        }
    }

    void train(const std::vector<std::pair<std::string, std::string>>& samples) {
        std::map<std::string, std::size_t> language_index;
        for (const auto& [code, text] : samples) language_index.emplace(code, 0);
        for (auto& [code, index] : language_index) {
            index = languages_.size();
            languages_.push_back(code);
        }
        counts_.assign(languages_.size(), {});
        std::vector<double> totals(languages_.size(), 0.0);
        for (const auto& [code, text] : samples) {
            const std::size_t l = language_index.at(code);
            for_each_gram(normalize(text).tokens, [&](std::string_view gram) {
                const auto [it, inserted] = gram_index_.emplace(std::string(gram), gram_index_.size());
                for (auto& row : counts_)
                    if (row.size() <= it->second) row.resize(it->second + 1, 0.0);
                counts_[l][it->second] += 1.0;
                totals[l] += 1.0;
            });
        }
        const double vocabulary = static_cast<double>(gram_index_.size());
        denominators_.resize(languages_.size());
        for (std::size_t l = 0; l < languages_.size(); ++l) denominators_[l] = totals[l] + vocabulary + 1.0;
    }

    std::vector<std::string> languages_;
    std::unordered_map<std::string, std::size_t> gram_index_;
    std::vector<std::vector<double>> counts_;
    std::vector<double> denominators_;
};

inline std::optional<LangGuess> detect_language(const NgramDetector& detector, std::string_view text) {
    return detector.detect(text);
}

static_assert(LanguageDetector<NgramDetector>);

}  // namespace polifilter
