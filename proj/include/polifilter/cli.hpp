#pragma once

// Operator entry points behind the `polifilter` tool. Each subcommand is a
// function over parsed options and output streams so it can be driven from
// tests without a process boundary.
//
// Exit status: 0 success, 1 runtime or I/O failure, 2 usage error.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polifilter/corpusgen.hpp"
#include "polifilter/evalkit.hpp"
#include "polifilter/ingest.hpp"
#include "polifilter/langdetect.hpp"
#include "polifilter/lexicon.hpp"
#include "polifilter/pipeline.hpp"
#include "polifilter/records.hpp"
#include "polifilter/softclf.hpp"

#ifndef POLIFILTER_VERSION
#define POLIFILTER_VERSION "0.0.0"
#endif

namespace polifilter::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;
inline constexpr std::string_view kSoftUrlEnv = "POLIFILTER_SOFT_URL";

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Helpers

inline std::set<std::string> split_list(std::string_view text) {
    std::set<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = detail::trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!piece.empty()) out.emplace(piece);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline bool parse_bool(std::string_view text) {
    if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
    if (text == "false" || text == "no" || text == "off" || text == "0") return false;
    throw UsageError("expected a boolean, got '" + std::string(text) + "'");
}

/// Parses "key = value" lines; '#' starts a comment line.
inline std::map<std::string, std::string> parse_config(std::istream& in, const std::string& origin = "config") {
    std::map<std::string, std::string> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto content = detail::trim(line);
        if (content.empty() || content.front() == '#') continue;
        const auto eq = content.find('=');
        if (eq == std::string_view::npos)
            throw UsageError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        values[std::string(detail::trim(content.substr(0, eq)))] = std::string(detail::trim(content.substr(eq + 1)));
    }
    return values;
}

inline std::unique_ptr<std::istream> open_input(const std::string& path) {
    if (path == "-") return nullptr;
    auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return in;
}

/// Writes to a file, or to the fallback stream for "-".
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) {
        if (path == "-") {
            stream_ = &fallback;
        } else {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
            stream_ = &file_;
        }
    }
    std::ostream& stream() { return *stream_; }
    void finish(const std::string& path) {
        stream_->flush();
        if (!*stream_) throw std::runtime_error("write error on '" + path + "'");
    }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

enum class InputFormat { Auto, Jsonl, DcXml };

inline InputFormat parse_input_format(std::string_view text) {
    if (text == "auto") return InputFormat::Auto;
    if (text == "jsonl") return InputFormat::Jsonl;
    if (text == "dcxml" || text == "xml") return InputFormat::DcXml;
    throw UsageError("unknown input format '" + std::string(text) + "'");
}

inline IngestReport read_records(std::istream& in, const std::string& path, InputFormat format, const RecordSink& sink,
                                 const RejectionSink& on_reject = {}) {
    if (format == InputFormat::Auto)
        format = (path.ends_with(".xml") || path.ends_with(".XML")) ? InputFormat::DcXml : InputFormat::Jsonl;
    return format == InputFormat::DcXml ? parse_records_dc_xml(in, sink, on_reject)
                                        : parse_records_jsonl(in, sink, on_reject);
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

// ---------------------------------------------------------------------------
// filter

struct SoftSpec {
    enum class Kind { None, Baseline, Remote } kind = Kind::None;
    std::string target;  ///< model path or endpoint URL

    static SoftSpec parse(std::string_view text) {
        SoftSpec spec;
        if (text == "none" || text.empty()) return spec;
        if (text == "remote") {
            const char* url = std::getenv(std::string(kSoftUrlEnv).c_str());
            if (url == nullptr || *url == '\0')
                throw UsageError("--soft remote needs a URL or the " + std::string(kSoftUrlEnv) + " variable");
            return SoftSpec{Kind::Remote, url};
        }
        if (text.starts_with("baseline:")) return SoftSpec{Kind::Baseline, std::string(text.substr(9))};
        if (text.starts_with("remote:")) return SoftSpec{Kind::Remote, std::string(text.substr(7))};
        throw UsageError("--soft expects none, baseline:<path>, remote or remote:<url>, got '" + std::string(text) + "'");
    }

    std::string to_string() const {
        switch (kind) {
        case Kind::None: return "none";
        case Kind::Baseline: return "baseline:" + target;
        case Kind::Remote: return "remote:" + target;
        }
        return "none";
    }
};

struct FilterOptions {
    std::string input;
    std::string output = "-";
    std::string lexicon;
    std::optional<std::string> manifest;
    InputFormat input_format = InputFormat::Auto;
    PipelineConfig config;
    SoftSpec soft;
    Milli threshold_milli = kDefaultThresholdMilli;
    unsigned jobs = 1;
    std::uint64_t seed = 0;
    RemoteOptions remote;
    std::size_t chunk_size = 4096;
};

/// Applies config-file keys onto filter options. Unknown keys are usage errors.
inline void apply_config(const std::map<std::string, std::string>& values, FilterOptions& options) {
    for (const auto& [key, value] : values) {
        try {
            if (key == "doctypes" || key == "allowed_doctypes") options.config.allowed_doctypes = split_list(value);
            else if (key == "sources" || key == "allowed_sources")
                options.config.allowed_sources = value.empty() || value == "any" ? std::nullopt
                                                                                 : std::optional(split_list(value));
            else if (key == "min_abstract_words") options.config.min_abstract_words = std::stoul(value);
            else if (key == "langs" || key == "permitted_languages") options.config.permitted_languages = split_list(value);
            else if (key == "min_lang_confidence" || key == "min_language_confidence")
                options.config.min_language_confidence = std::stod(value);
            else if (key == "hard_mode" || key == "hard_mode_no_abstract")
                options.config.hard_mode_no_abstract = parse_field_mode(value);
            else if (key == "lang_fallback" || key == "language_fallback")
                options.config.language_fallback = parse_language_fallback(value);
            else if (key == "fallback" || key == "soft_fallback")
                options.config.soft_fallback = value == "hard" || (value != "exclude" && parse_bool(value));
            else if (key == "soft") options.soft = SoftSpec::parse(value);
            else if (key == "threshold_milli") options.threshold_milli = std::stoll(value);
            else if (key == "jobs") options.jobs = static_cast<unsigned>(std::stoul(value));
            else if (key == "timeout_ms") options.remote.timeout = std::chrono::milliseconds(std::stoll(value));
            else if (key == "max_in_flight") options.remote.max_in_flight = std::stoll(value);
            else throw UsageError("unknown config key '" + key + "'");
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception& e) {
            throw UsageError("bad value for config key '" + key + "': " + e.what());
        }
    }
}

struct RunManifest {
    nlohmann::json config;
    std::string input;
    std::string output;
    std::string lexicon;
    std::string soft;
    nlohmann::json components;
    IngestReport ingest;
    DecisionCounts counts;
    double wall_time_seconds = 0.0;
    std::string started_at;

    nlohmann::json to_json() const {
        return {{"tool", "polifilter"},
                {"version", POLIFILTER_VERSION},
                {"config", config},
                {"input", input},
                {"output", output},
                {"lexicon", lexicon},
                {"soft", soft},
                {"components", components},
                {"ingest", ingest.to_json()},
                {"counts", counts.to_json()},
                {"wall_time_seconds", wall_time_seconds},
                {"started_at", started_at}};
    }
};

inline int cmd_filter(const FilterOptions& options, std::ostream& out, std::ostream& err) {
    const auto started = std::chrono::steady_clock::now();
    options.config.validate();

    Lexicon lexicon;
    {
        std::ifstream in(options.lexicon);
        if (!in) throw UsageError("cannot open lexicon '" + options.lexicon + "'");
        try {
            lexicon = load_lexicon(in, options.threshold_milli);
        } catch (const LexiconError& e) {
            throw std::runtime_error(options.lexicon + ":" + std::to_string(e.line()) + ": " + e.reason());
        }
    }

    std::unique_ptr<SoftBackend> soft;
    if (options.soft.kind == SoftSpec::Kind::Baseline) {
        std::ifstream in(options.soft.target);
        if (!in) throw std::runtime_error("cannot open baseline model '" + options.soft.target + "'");
        soft = std::make_unique<BaselineBackend>(BaselineModel::load(in));
    } else if (options.soft.kind == SoftSpec::Kind::Remote) {
        RemoteOptions remote = options.remote;
        remote.max_in_flight = std::max<std::ptrdiff_t>(remote.max_in_flight, static_cast<std::ptrdiff_t>(options.jobs));
        soft = std::make_unique<RemoteBackend>(options.soft.target, remote);
    }
    const NgramDetector detector;

    const auto input_holder = open_input(options.input);
    std::istream& in = input_holder ? *input_holder : std::cin;
    Output output(options.output, out);

    RunManifest manifest;
    manifest.started_at = utc_timestamp();
    manifest.config = options.config.to_json();
    manifest.config["threshold_milli"] = lexicon.threshold_milli();
    manifest.config["jobs"] = options.jobs;
    manifest.config["seed"] = options.seed;
    manifest.input = options.input;
    manifest.output = options.output;
    manifest.lexicon = options.lexicon;
    manifest.soft = options.soft.to_string();
    manifest.components = {{"polifilter", POLIFILTER_VERSION},
                           {"lexicon_entries", lexicon.size()},
                           {"language_detector", NgramDetector::kVersion},
                           {"soft_backend", soft ? soft->describe() : std::string("none")}};

    std::vector<MetadataRecord> chunk;
    chunk.reserve(options.chunk_size);
    auto flush = [&] {
        const auto decisions = route_batch(std::span<const MetadataRecord>(chunk), options.config, lexicon, detector,
                                           soft.get(), options.jobs);
        for (const auto& decision : decisions) {
            output.stream() << dump_line(to_json(decision)) << '\n';
            manifest.counts.add(decision);
        }
        chunk.clear();
    };
    manifest.ingest = read_records(
        in, options.input, options.input_format,
        [&](MetadataRecord&& record) {
            chunk.push_back(std::move(record));
            if (chunk.size() >= options.chunk_size) flush();
        },
        [&](const Rejection& rejection) {
            err << options.input << ":" << rejection.line << ": rejected (" << rejection.reason << ")\n";
        });
    flush();
    output.finish(options.output);

    manifest.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const std::string manifest_path =
        options.manifest.value_or(options.output == "-" ? std::string() : options.output + ".manifest.json");
    if (!manifest_path.empty()) {
        std::ofstream file(manifest_path, std::ios::trunc);
        if (!file) throw std::runtime_error("cannot write manifest '" + manifest_path + "'");
        file << manifest.to_json().dump(2) << '\n';
    }
    err << "filtered " << manifest.counts.read << " records: " << manifest.counts.politics << " politics, "
        << manifest.counts.multi << " multi, " << manifest.counts.excluded << " excluded";
    if (manifest.counts.degraded > 0) err << ", " << manifest.counts.degraded << " degraded to hard filter";
    if (manifest.ingest.rejected > 0) err << "; " << manifest.ingest.rejected << " input records rejected";
    err << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
    std::optional<std::string> pairs;
    std::optional<std::string> gold;
    std::optional<std::string> predicted;
    bool by_language = false;
    TableFormat format = TableFormat::Markdown;
    std::string approach = "filter";
    std::string output = "-";
};

namespace detail {

inline std::optional<std::string> string_field(const nlohmann::json& object, std::initializer_list<const char*> keys) {
    for (const char* key : keys) {
        const auto it = object.find(key);
        if (it != object.end() && it->is_string()) return it->get<std::string>();
    }
    return std::nullopt;
}

/// Label of a prediction line: decisions carry a verdict, plain files a label.
inline std::optional<std::string> predicted_label(const nlohmann::json& object) {
    if (auto verdict = string_field(object, {"verdict"})) {
        if (*verdict == "POLITICS") return "politics";
        if (*verdict == "MULTI") return "multi";
        return lowercase_nfc(*verdict);
    }
    return string_field(object, {"predicted", "label"});
}

template <class Fn>
void for_each_json_line(std::istream& in, const std::string& path, std::ostream& err, Fn&& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (polifilter::detail::trim(line).empty()) continue;
        nlohmann::json object;
        try {
            object = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception&) {
            err << path << ":" << line_no << ": warning: malformed line skipped\n";
            continue;
        }
        if (!object.is_object()) {
            err << path << ":" << line_no << ": warning: not an object, skipped\n";
            continue;
        }
        fn(object, line_no);
    }
    if (in.bad()) throw std::runtime_error("read error on '" + path + "'");
}

}  // namespace detail

inline int cmd_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err) {
    ConfusionTally tally;
    std::size_t warnings = 0;

    if (options.pairs) {
        const auto holder = open_input(*options.pairs);
        std::istream& in = holder ? *holder : std::cin;
        detail::for_each_json_line(in, *options.pairs, err, [&](const nlohmann::json& object, std::size_t) {
            LabelPair pair;
            pair.gold = detail::string_field(object, {"gold"}).value_or("");
            pair.predicted = detail::string_field(object, {"predicted"}).value_or("");
            pair.language = detail::string_field(object, {"language"});
            tally.add(pair);
        });
    } else {
        if (!options.gold || !options.predicted) throw UsageError("evaluate needs --pairs or both --gold and --pred");
        struct Gold {
            std::string label;
            std::optional<std::string> language;
            bool matched = false;
        };
        std::unordered_map<std::string, Gold> gold;
        std::vector<std::string> gold_order;
        {
            const auto holder = open_input(*options.gold);
            std::istream& in = holder ? *holder : std::cin;
            detail::for_each_json_line(in, *options.gold, err, [&](const nlohmann::json& object, std::size_t line) {
                const auto id = detail::string_field(object, {"id"});
                if (!id) {
                    err << *options.gold << ":" << line << ": warning: gold line without id\n";
                    ++warnings;
                    return;
                }
                Gold entry{detail::string_field(object, {"gold", "label"}).value_or(""),
                           detail::string_field(object, {"language"}), false};
                if (gold.emplace(*id, std::move(entry)).second) gold_order.push_back(*id);
            });
        }
        std::size_t unmatched_predictions = 0;
        {
            const auto holder = open_input(*options.predicted);
            std::istream& in = holder ? *holder : std::cin;
            detail::for_each_json_line(in, *options.predicted, err, [&](const nlohmann::json& object, std::size_t line) {
                const auto id = detail::string_field(object, {"id"});
                const auto it = id ? gold.find(*id) : gold.end();
                if (it == gold.end() || it->second.matched) {
                    err << *options.predicted << ":" << line << ": warning: no gold record for id '"
                        << id.value_or("") << "'\n";
                    ++unmatched_predictions;
                    return;
                }
                it->second.matched = true;
                tally.add(LabelPair{it->second.label, detail::predicted_label(object).value_or(""),
                                    it->second.language});
            });
        }
        std::size_t unmatched_gold = 0;
        for (const auto& id : gold_order)
            if (!gold.at(id).matched) {
                err << "note: no prediction for gold id '" << id << "'\n";
                ++unmatched_gold;
            }
        warnings += unmatched_predictions;
        if (unmatched_gold + unmatched_predictions > 0)
            err << "warning: " << unmatched_gold << " gold ids without prediction, " << unmatched_predictions
                << " predictions without gold\n";
    }
    if (tally.errors > 0) {
        err << "warning: " << tally.errors << " pairs with labels outside {politics, multi} skipped\n";
        for (const auto& message : tally.error_messages) err << "  " << message << '\n';
    }
    warnings += tally.errors;

    const MetricsReport report = metrics(tally);
    Output output(options.output, out);
    const std::vector<ApproachReport> reports{{options.approach, report}};
    output.stream() << (options.by_language ? render_language_report(reports, options.format)
                                            : render_report(reports, options.format));
    output.finish(options.output);
    err << "evaluated " << report.total << " pairs, " << warnings << " warnings\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// lexicon-check

inline int cmd_lexicon_check(const std::string& path, Milli threshold_milli, std::ostream& out, std::ostream& err) {
    std::ifstream in(path);
    if (!in) {
        err << "error: cannot open '" << path << "'\n";
        return kExitRuntime;
    }
    try {
        const Lexicon lexicon = load_lexicon(in, threshold_milli);
        out << "OK: " << lexicon.size() << " entries\n";
        return kExitOk;
    } catch (const LexiconError& e) {
        err << path << ":" << e.line() << ": error: " << e.reason() << '\n';
        return kExitRuntime;
    }
}

// ---------------------------------------------------------------------------
// corpus

struct CorpusOptions {
    std::vector<std::string> inputs;
    InputFormat input_format = InputFormat::Auto;
    std::string target = "both";  ///< politics, multi or both
    std::string preset = "english";
    std::optional<std::set<std::string>> languages;
    std::optional<int> published_after;
    bool no_year_bound = false;
    bool year_inclusive = false;
    std::optional<std::string> ddc_rule;
    std::optional<std::string> exclusion_pattern;
    std::optional<std::string> journals_file;
    std::optional<std::size_t> min_abstract_words;
    std::uint64_t seed = 0;
    std::string out_dir;
    bool no_split = false;
};

inline SelectionCriteria criteria_for(const CorpusOptions& options, Label target) {
    SelectionCriteria c;
    if (options.preset == "english")
        c = target == Label::Politics ? SelectionCriteria::english_politics() : SelectionCriteria::english_multi();
    else if (options.preset == "multilingual")
        c = target == Label::Politics ? SelectionCriteria::multilingual_politics()
                                      : SelectionCriteria::multilingual_multi();
    else
        throw UsageError("unknown preset '" + options.preset + "' (expected english or multilingual)");
    if (options.languages) c.languages = *options.languages;
    if (options.published_after) c.min_year = *options.published_after;
    if (options.no_year_bound) c.min_year.reset();
    c.year_bound_inclusive = options.year_inclusive;
    if (options.ddc_rule) c.ddc_rule = parse_ddc_rule(*options.ddc_rule);
    if (options.exclusion_pattern && target == Label::Multi) c.exclusion_pattern = *options.exclusion_pattern;
    if (options.min_abstract_words) c.min_abstract_words = *options.min_abstract_words;
    if (options.journals_file && target == Label::Politics) {
        std::ifstream in(*options.journals_file);
        if (!in) throw std::runtime_error("cannot open journal list '" + *options.journals_file + "'");
        std::set<std::string> journals;
        std::string line;
        while (std::getline(in, line))
            if (const auto name = polifilter::detail::trim(line); !name.empty() && name.front() != '#')
                journals.emplace(name);
        c.journals = std::move(journals);
    }
    c.validate();
    return c;
}

inline int cmd_corpus(const CorpusOptions& options, std::ostream& out, std::ostream& err) {
    std::vector<Label> targets;
    if (options.target == "politics" || options.target == "both") targets.push_back(Label::Politics);
    if (options.target == "multi" || options.target == "both") targets.push_back(Label::Multi);
    if (targets.empty()) throw UsageError("--target must be politics, multi or both");
    std::vector<SelectionCriteria> criteria;
    for (Label target : targets) criteria.push_back(criteria_for(options, target));

    std::vector<MetadataRecord> records;
    IngestReport ingest;
    for (const auto& path : options.inputs) {
        const auto holder = open_input(path);
        std::istream& in = holder ? *holder : std::cin;
        const auto report = read_records(in, path, options.input_format,
                                         [&](MetadataRecord&& r) { records.push_back(std::move(r)); });
        ingest.read += report.read;
        ingest.accepted += report.accepted;
        ingest.rejected += report.rejected;
    }

    const NgramDetector detector;
    std::vector<LabeledRecord> selected;
    for (const auto& c : criteria) {
        auto part = select(std::span<const MetadataRecord>(records), c, detector);
        out << "selected " << part.size() << " " << to_string(c.class_target) << " records\n";
        selected.insert(selected.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }

    // Self-audit: nothing selected for a class may mention its exclusion pattern.
    std::size_t violations = 0;
    for (const auto& c : criteria) {
        if (!c.exclusion_pattern) continue;
        const Pattern pattern = Pattern::parse(*c.exclusion_pattern);
        std::size_t hits = 0;
        for (const auto& labeled : selected)
            if (labeled.label == c.class_target && mentions(labeled.record, pattern)) ++hits;
        out << "audit: " << hits << " " << to_string(c.class_target) << " records match '" << *c.exclusion_pattern
            << "'\n";
        violations += hits;
    }

    std::filesystem::create_directories(options.out_dir);
    auto write = [&](const std::string& name, const std::vector<LabeledRecord>& rows) {
        const std::string path = (std::filesystem::path(options.out_dir) / name).string();
        Output file(path, out);
        for (const auto& row : rows) file.stream() << dump_line(to_json(row)) << '\n';
        file.finish(path);
    };
    write("selected.jsonl", selected);
    if (!options.no_split) {
        if (selected.empty()) {
            err << "error: nothing selected, cannot split\n";
            return kExitRuntime;
        }
        const CorpusSplit parts = split(std::span<const LabeledRecord>(selected), options.seed);
        write("train.jsonl", parts.train);
        write("test.jsonl", parts.test);
        write("validation.jsonl", parts.validation);
        out << "split (seed " << options.seed << "): train " << parts.train.size() << ", test " << parts.test.size()
            << ", validation " << parts.validation.size() << '\n';
    }
    if (ingest.rejected > 0) err << "warning: " << ingest.rejected << " input records rejected\n";
    if (violations > 0) {
        err << "error: exclusion audit failed for " << violations << " records\n";
        return kExitRuntime;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// train-baseline

inline int cmd_train_baseline(const std::vector<std::string>& inputs, const std::string& model_path, std::ostream& out,
                              std::ostream& err) {
    std::vector<std::pair<ClassifierInput, Label>> corpus;
    std::size_t skipped = 0;
    for (const auto& path : inputs) {
        const auto holder = open_input(path);
        std::istream& in = holder ? *holder : std::cin;
        detail::for_each_json_line(in, path, err, [&](const nlohmann::json& object, std::size_t line) {
            try {
                const LabeledRecord labeled = labeled_from_json(object);
                corpus.emplace_back(ClassifierInput::from(labeled.record), labeled.label);
            } catch (const std::exception& e) {
                err << path << ":" << line << ": warning: skipped (" << e.what() << ")\n";
                ++skipped;
            }
        });
    }
    const BaselineModel model = train_baseline(corpus);
    Output output(model_path, out);
    model.save(output.stream());
    output.finish(model_path);
    err << "trained baseline on " << corpus.size() << " documents (" << skipped << " skipped), vocabulary "
        << model.vocabulary_size() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Argument parsing

/// Parses `args` (without the program name) and runs the chosen subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Political science relevance filter for scholarly metadata", "polifilter"};
    app.require_subcommand(1);
    app.set_version_flag("--version", POLIFILTER_VERSION);

    // filter
    FilterOptions filter;
    std::optional<std::string> config_path, soft_text, hard_mode, langs, fallback, lang_fallback, doctypes, sources,
        input_format;
    std::optional<std::size_t> min_words;
    std::optional<double> min_confidence;
    std::optional<Milli> threshold;
    std::optional<unsigned> jobs;
    std::optional<long long> timeout_ms;
    auto* filter_cmd = app.add_subcommand("filter", "Route records through the filtering pipeline");
    filter_cmd->add_option("--in", filter.input, "Input records (JSONL or Dublin Core XML, '-' for stdin)")->required();
    filter_cmd->add_option("--out", filter.output, "Decision output (JSONL, '-' for stdout)");
    filter_cmd->add_option("--lexicon", filter.lexicon, "Keyword lexicon (TSV)")->required();
    filter_cmd->add_option("--config", config_path, "Key-value config file; flags override it");
    filter_cmd->add_option("--soft", soft_text, "Soft backend: none | baseline:<model> | remote[:<url>]");
    filter_cmd->add_option("--hard-mode", hard_mode, "Fields for records without abstract: title-keywords | title-abstract-keywords");
    filter_cmd->add_option("--langs", langs, "Permitted abstract languages, comma separated");
    filter_cmd->add_option("--min-abstract-words", min_words, "Minimum words for a valid abstract");
    filter_cmd->add_option("--min-lang-confidence", min_confidence, "Minimum language detector confidence");
    filter_cmd->add_option("--fallback", fallback, "On soft backend failure: hard | exclude");
    filter_cmd->add_option("--lang-fallback", lang_fallback, "For non-permitted languages: hard | exclude");
    filter_cmd->add_option("--doctypes", doctypes, "Allowed document types, comma separated");
    filter_cmd->add_option("--sources", sources, "Allowed sources, comma separated (default: any)");
    filter_cmd->add_option("--threshold-milli", threshold, "Relevance threshold in milli-units (default 1000)");
    filter_cmd->add_option("--input-format", input_format, "auto | jsonl | dcxml");
    filter_cmd->add_option("--jobs", jobs, "Worker threads");
    filter_cmd->add_option("--seed", filter.seed, "Recorded in the run manifest");
    filter_cmd->add_option("--timeout-ms", timeout_ms, "Remote soft backend timeout");
    filter_cmd->add_option("--manifest", filter.manifest, "Run manifest path (default <out>.manifest.json)");

    // evaluate
    EvaluateOptions evaluate;
    std::string eval_format = "markdown";
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Compute precision/recall/F1 tables");
    evaluate_cmd->add_option("--pairs", evaluate.pairs, "Pair file: {id, gold, predicted, language?} per line");
    evaluate_cmd->add_option("--gold", evaluate.gold, "Gold labels: {id, label|gold, language?} per line");
    evaluate_cmd->add_option("--pred", evaluate.predicted, "Predictions: decisions or {id, predicted|label} per line");
    evaluate_cmd->add_flag("--by-language", evaluate.by_language, "Break results down by language");
    evaluate_cmd->add_option("--format", eval_format, "markdown | tsv");
    evaluate_cmd->add_option("--approach", evaluate.approach, "Approach name shown in the table");
    evaluate_cmd->add_option("--out", evaluate.output, "Table output ('-' for stdout)");

    // lexicon-check
    std::string lexicon_path;
    Milli lexicon_threshold = kDefaultThresholdMilli;
    auto* lexicon_cmd = app.add_subcommand("lexicon-check", "Validate a keyword lexicon");
    lexicon_cmd->add_option("lexicon,--lexicon", lexicon_path, "Lexicon file")->required();
    lexicon_cmd->add_option("--threshold-milli", lexicon_threshold, "Relevance threshold in milli-units");

    // corpus
    CorpusOptions corpus;
    std::optional<std::string> corpus_langs, corpus_format;
    auto* corpus_cmd = app.add_subcommand("corpus", "Select and split a labeled training corpus");
    corpus_cmd->add_option("--in", corpus.inputs, "Input record files")->required();
    corpus_cmd->add_option("--target", corpus.target, "politics | multi | both");
    corpus_cmd->add_option("--preset", corpus.preset, "english | multilingual selection criteria");
    corpus_cmd->add_option("--langs", corpus_langs, "Abstract languages, comma separated");
    corpus_cmd->add_option("--published-after", corpus.published_after, "Keep records published after this year");
    corpus_cmd->add_flag("--no-year-bound", corpus.no_year_bound, "Drop the publication year criterion");
    corpus_cmd->add_flag("--year-inclusive", corpus.year_inclusive, "Treat the year bound as inclusive");
    corpus_cmd->add_option("--ddc", corpus.ddc_rule, "DDC rule override: in | not | any");
    corpus_cmd->add_option("--exclude", corpus.exclusion_pattern, "Exclusion pattern for the multi class");
    corpus_cmd->add_option("--journals", corpus.journals_file, "Journal allowlist for the politics class");
    corpus_cmd->add_option("--min-abstract-words", corpus.min_abstract_words, "Minimum abstract words");
    corpus_cmd->add_option("--input-format", corpus_format, "auto | jsonl | dcxml");
    corpus_cmd->add_option("--seed", corpus.seed, "Shuffle seed for the split");
    corpus_cmd->add_option("--out-dir", corpus.out_dir, "Output directory")->required();
    corpus_cmd->add_flag("--no-split", corpus.no_split, "Only write selected.jsonl");

    // train-baseline
    std::vector<std::string> train_inputs;
    std::string model_path;
    auto* train_cmd = app.add_subcommand("train-baseline", "Train the naive Bayes soft-filter baseline");
    train_cmd->add_option("--train", train_inputs, "Labeled record files")->required();
    train_cmd->add_option("--out", model_path, "Model output path")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*filter_cmd) {
            if (config_path) {
                std::ifstream in(*config_path);
                if (!in) throw UsageError("cannot open config '" + *config_path + "'");
                apply_config(parse_config(in, *config_path), filter);
            }
            if (soft_text) filter.soft = SoftSpec::parse(*soft_text);
            if (hard_mode) filter.config.hard_mode_no_abstract = parse_field_mode(*hard_mode);
            if (langs) filter.config.permitted_languages = split_list(*langs);
            if (min_words) filter.config.min_abstract_words = *min_words;
            if (min_confidence) filter.config.min_language_confidence = *min_confidence;
            if (fallback) {
                if (*fallback != "hard" && *fallback != "exclude") throw UsageError("--fallback expects hard or exclude");
                filter.config.soft_fallback = *fallback == "hard";
            }
            if (lang_fallback) filter.config.language_fallback = parse_language_fallback(*lang_fallback);
            if (doctypes) filter.config.allowed_doctypes = split_list(*doctypes);
            if (sources) filter.config.allowed_sources = split_list(*sources);
            if (threshold) filter.threshold_milli = *threshold;
            if (input_format) filter.input_format = parse_input_format(*input_format);
            if (jobs) filter.jobs = std::max(1u, *jobs);
            if (timeout_ms) filter.remote.timeout = std::chrono::milliseconds(*timeout_ms);
            try {
                filter.config.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            return cmd_filter(filter, out, err);
        }
        if (*evaluate_cmd) {
            evaluate.format = parse_table_format(eval_format);
            if (!evaluate.pairs && !(evaluate.gold && evaluate.predicted))
                throw UsageError("evaluate needs --pairs or both --gold and --pred");
            return cmd_evaluate(evaluate, out, err);
        }
        if (*lexicon_cmd) return cmd_lexicon_check(lexicon_path, lexicon_threshold, out, err);
        if (*corpus_cmd) {
            if (corpus_langs) corpus.languages = split_list(*corpus_langs);
            if (corpus_format) corpus.input_format = parse_input_format(*corpus_format);
            return cmd_corpus(corpus, out, err);
        }
        if (*train_cmd) return cmd_train_baseline(train_inputs, model_path, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace polifilter::cli
