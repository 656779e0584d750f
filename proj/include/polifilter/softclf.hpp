#pragma once

// Soft filter: classifier contract over title + abstract, a multinomial
// naive Bayes baseline, and an HTTP client for a remote inference service.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <chrono>
#include <cstddef>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "polifilter/records.hpp"

namespace polifilter {

enum class Label { Politics = 0, Multi = 1 };

inline constexpr std::array<Label, 2> kLabels = {Label::Politics, Label::Multi};

inline std::string_view to_string(Label label) { return label == Label::Politics ? "politics" : "multi"; }

inline std::optional<Label> parse_label(std::string_view text) {
    if (text == "politics") return Label::Politics;
    if (text == "multi") return Label::Multi;
    return std::nullopt;
}

struct Classification {
    Label label = Label::Multi;
    double score = 0.0;  ///< confidence of `label`, in [0, 1]
};

/// The text handed to a classifier: title and abstract joined by one space,
/// with runs of whitespace collapsed.
struct ClassifierInput {
    std::string text;

    static ClassifierInput from(std::string_view title, std::string_view abstract) {
        std::string joined;
        auto append = [&](std::string_view part) {
            bool pending_space = !joined.empty();
            for (char c : part) {
                if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
                    pending_space = !joined.empty();
                    continue;
                }
                if (pending_space) joined += ' ';
                pending_space = false;
                joined += c;
            }
        };
        append(title);
        append(abstract);
        if (joined.empty()) throw std::invalid_argument("classifier input needs a title or an abstract");
        return ClassifierInput{std::move(joined)};
    }

    static ClassifierInput from(const MetadataRecord& record) {
        return from(record.title.value_or(std::string()), record.abstract.value_or(std::string()));
    }
};

/// Raised when a backend could not produce a classification at all.
class TransportError : public std::runtime_error {
public:
    enum class Kind { Connection, Timeout, Status, MalformedBody, UnknownLabel };

    TransportError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

template <class C>
concept SoftClassifier = requires(const C& classifier, const ClassifierInput& input) {
    { classifier.classify(input) } -> std::same_as<Classification>;
};

/// Runtime-selected backend.
class SoftBackend {
public:
    virtual ~SoftBackend() = default;
    virtual Classification classify(const ClassifierInput& input) const = 0;
    virtual std::string describe() const = 0;
};

// ---------------------------------------------------------------------------
// Baseline

class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ModelFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Multinomial bag-of-words naive Bayes with add-one smoothing.
/// Class order is fixed: politics, multi.
class BaselineModel {
public:
    static constexpr int kFormatVersion = 1;
    static constexpr std::string_view kFormatName = "polifilter-baseline";

    BaselineModel() = default;

    std::size_t vocabulary_size() const noexcept { return vocabulary_.size(); }
    const std::map<std::string, std::size_t, std::less<>>& vocabulary() const noexcept { return vocabulary_; }
    double log_prior(Label label) const { return log_priors_[index(label)]; }
    const std::vector<double>& log_likelihoods(Label label) const { return log_likelihoods_[index(label)]; }

    /// Per-class log posteriors normalized to sum to one in linear space.
    std::array<double, 2> posteriors(const ClassifierInput& input) const {
        std::array<double, 2> log_post = log_priors_;
        std::vector<std::string> tokens;
        append_tokens(input.text, tokens);
        for (const auto& token : tokens) {
            const auto it = vocabulary_.find(token);
            if (it == vocabulary_.end()) continue;
            for (std::size_t c = 0; c < 2; ++c) log_post[c] += log_likelihoods_[c][it->second];
        }
        const double top = std::max(log_post[0], log_post[1]);
        const double z = std::exp(log_post[0] - top) + std::exp(log_post[1] - top);
        return {std::exp(log_post[0] - top) / z, std::exp(log_post[1] - top) / z};
    }

    /// Argmax posterior; ties resolve to politics.
    Classification classify(const ClassifierInput& input) const {
        const auto post = posteriors(input);
        if (post[0] >= post[1]) return {Label::Politics, post[0]};
        return {Label::Multi, post[1]};
    }

    nlohmann::json to_json() const {
        nlohmann::json vocabulary = nlohmann::json::array();
        std::vector<std::string> ordered(vocabulary_.size());
        for (const auto& [token, i] : vocabulary_) ordered[i] = token;
        for (auto& token : ordered) vocabulary.push_back(std::move(token));
        return nlohmann::json{{"format", kFormatName},
                              {"format_version", kFormatVersion},
                              {"classes", {"politics", "multi"}},
                              {"log_priors", log_priors_},
                              {"vocabulary", vocabulary},
                              {"log_likelihoods", log_likelihoods_}};
    }

    static BaselineModel from_json(const nlohmann::json& doc) {
        try {
            if (doc.at("format").get<std::string>() != kFormatName) throw ModelFormatError("not a baseline model file");
            const int version = doc.at("format_version").get<int>();
            if (version != kFormatVersion)
                throw ModelFormatError("unsupported baseline model format version " + std::to_string(version));
            if (doc.at("classes") != nlohmann::json{"politics", "multi"})
                throw ModelFormatError("unexpected class order");
            BaselineModel model;
            model.log_priors_ = doc.at("log_priors").get<std::array<double, 2>>();
            const auto words = doc.at("vocabulary").get<std::vector<std::string>>();
            for (std::size_t i = 0; i < words.size(); ++i)
                if (!model.vocabulary_.emplace(words[i], i).second)
                    throw ModelFormatError("duplicate vocabulary token '" + words[i] + "'");
            model.log_likelihoods_ = doc.at("log_likelihoods").get<std::array<std::vector<double>, 2>>();
            for (const auto& row : model.log_likelihoods_)
                if (row.size() != words.size()) throw ModelFormatError("likelihood table does not match vocabulary");
            return model;
        } catch (const nlohmann::json::exception& e) {
            throw ModelFormatError(std::string("malformed baseline model: ") + e.what());
        }
    }

    void save(std::ostream& out) const { out << to_json().dump() << '\n'; }

    static BaselineModel load(std::istream& in) {
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw ModelFormatError(std::string("malformed baseline model: ") + e.what());
        }
        return from_json(doc);
    }

private:
    static std::size_t index(Label label) { return static_cast<std::size_t>(label); }

    friend BaselineModel train_baseline(const std::vector<std::pair<ClassifierInput, Label>>& corpus);

    std::map<std::string, std::size_t, std::less<>> vocabulary_;
    std::array<double, 2> log_priors_{};
    std::array<std::vector<double>, 2> log_likelihoods_;
};

/// Counts tokens per class; P(w|c) = (n(w,c) + 1) / (n(c) + |V|).
inline BaselineModel train_baseline(const std::vector<std::pair<ClassifierInput, Label>>& corpus) {
    std::array<std::size_t, 2> documents{};
    std::map<std::string, std::array<std::size_t, 2>> counts;
    std::array<std::size_t, 2> totals{};
    for (const auto& [input, label] : corpus) {
        const auto c = static_cast<std::size_t>(label);
        ++documents[c];
        std::vector<std::string> tokens;
        append_tokens(input.text, tokens);
        for (auto& token : tokens) {
            ++counts[std::move(token)][c];
            ++totals[c];
        }
    }
    if (documents[0] == 0 || documents[1] == 0)
        throw TrainingError("training corpus needs at least one example of each label");

    BaselineModel model;
    const double n = static_cast<double>(documents[0] + documents[1]);
    const double v = static_cast<double>(counts.size());
    for (std::size_t c = 0; c < 2; ++c) {
        model.log_priors_[c] = std::log(static_cast<double>(documents[c]) / n);
        model.log_likelihoods_[c].reserve(counts.size());
    }
    std::size_t i = 0;
    for (const auto& [token, per_class] : counts) {
        model.vocabulary_.emplace(token, i++);
        for (std::size_t c = 0; c < 2; ++c)
            model.log_likelihoods_[c].push_back(
                std::log((static_cast<double>(per_class[c]) + 1.0) / (static_cast<double>(totals[c]) + v)));
    }
    return model;
}

class BaselineBackend final : public SoftBackend {
public:
    explicit BaselineBackend(BaselineModel model) : model_(std::move(model)) {}
    Classification classify(const ClassifierInput& input) const override { return model_.classify(input); }
    std::string describe() const override {
        return "baseline(format " + std::to_string(BaselineModel::kFormatVersion) + ", vocabulary " +
               std::to_string(model_.vocabulary_size()) + ")";
    }
    const BaselineModel& model() const noexcept { return model_; }

private:
    BaselineModel model_;
};

// ---------------------------------------------------------------------------
// Remote

/// Parses a {"label": ..., "score": ...} response body.
inline Classification parse_classification_body(std::string_view body) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw TransportError(TransportError::Kind::MalformedBody, std::string("response is not JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("label") || !doc.contains("score") || !doc["label"].is_string() ||
        !doc["score"].is_number())
        throw TransportError(TransportError::Kind::MalformedBody, "response lacks a string label and numeric score");
    const auto label_text = doc["label"].get<std::string>();
    const auto label = parse_label(label_text);
    if (!label) throw TransportError(TransportError::Kind::UnknownLabel, "unknown label '" + label_text + "'");
    const double score = doc["score"].get<double>();
    if (!(score >= 0.0 && score <= 1.0))
        throw TransportError(TransportError::Kind::MalformedBody, "score outside [0, 1]");
    return {*label, score};
}

/// Splits "http://host[:port][/prefix]" into a base URL and the request
/// path. The path is the prefix with "/classify" appended unless the
/// prefix already ends with it.
struct Endpoint {
    std::string base;
    std::string path;

    static Endpoint parse(std::string_view url) {
        constexpr std::string_view scheme = "http://";
        if (!url.starts_with(scheme)) throw std::invalid_argument("endpoint must be an http:// URL: " + std::string(url));
        const auto slash = url.find('/', scheme.size());
        Endpoint endpoint;
        endpoint.base = std::string(url.substr(0, slash));
        if (endpoint.base.size() == scheme.size()) throw std::invalid_argument("endpoint has no host: " + std::string(url));
        std::string path = slash == std::string_view::npos ? std::string() : std::string(url.substr(slash));
        while (!path.empty() && path.back() == '/') path.pop_back();
        if (!path.ends_with("/classify")) path += "/classify";
        endpoint.path = std::move(path);
        return endpoint;
    }
};

struct RemoteOptions {
    std::chrono::milliseconds timeout{10000};
    std::ptrdiff_t max_in_flight = 4;
};

/// POSTs {"text": ...} to the endpoint and validates the reply. One
/// connection per call; concurrent calls are capped by `max_in_flight`.
class RemoteBackend final : public SoftBackend {
public:
    explicit RemoteBackend(std::string_view url, RemoteOptions options = {})
        : endpoint_(Endpoint::parse(url)), options_(options),
          slots_(std::make_unique<std::counting_semaphore<>>(std::max<std::ptrdiff_t>(1, options.max_in_flight))) {}

    Classification classify(const ClassifierInput& input) const override {
        slots_->acquire();
        struct Release {
            std::counting_semaphore<>& s;
            ~Release() { s.release(); }
        } release{*slots_};

        httplib::Client client(endpoint_.base);
        const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
        const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - seconds);
        client.set_connection_timeout(seconds.count(), micros.count());
        client.set_read_timeout(seconds.count(), micros.count());
        client.set_write_timeout(seconds.count(), micros.count());

        const std::string body = nlohmann::json{{"text", input.text}}.dump(-1, ' ', false,
                                                                           nlohmann::json::error_handler_t::replace);
        const auto result = client.Post(endpoint_.path, body, "application/json");
        if (!result) {
            const auto error = result.error();
            const auto kind = (error == httplib::Error::ConnectionTimeout || error == httplib::Error::Read)
                                  ? TransportError::Kind::Timeout
                                  : TransportError::Kind::Connection;
            throw TransportError(kind, "request to " + url() + " failed: " + httplib::to_string(error));
        }
        if (result->status < 200 || result->status >= 300)
            throw TransportError(TransportError::Kind::Status,
                                 "request to " + url() + " returned HTTP " + std::to_string(result->status));
        return parse_classification_body(result->body);
    }

    std::string describe() const override { return "remote(" + url() + ")"; }
    std::string url() const { return endpoint_.base + endpoint_.path; }

private:
    Endpoint endpoint_;
    RemoteOptions options_;
    std::unique_ptr<std::counting_semaphore<>> slots_;
};

inline Classification classify_remote(std::string_view endpoint, const ClassifierInput& input,
                                      std::chrono::milliseconds timeout) {
    return RemoteBackend(endpoint, RemoteOptions{timeout, 1}).classify(input);
}

inline Classification classify(const SoftBackend& backend, const ClassifierInput& input) {
    return backend.classify(input);
}

static_assert(SoftClassifier<BaselineModel>);
static_assert(SoftClassifier<SoftBackend>);

}  // namespace polifilter
