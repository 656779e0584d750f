#pragma once

// Record ingestion: line-delimited JSON records and Dublin Core XML.

#include <cctype>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <expat.h>
#include <json.hpp>

#include "polifilter/records.hpp"

namespace polifilter {

using json = nlohmann::json;

struct IngestReport {
    std::size_t read = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::map<std::string, std::size_t> reject_reasons;

    void reject(const std::string& reason) {
        ++rejected;
        ++reject_reasons[reason];
    }

    json to_json() const {
        return json{{"read", read}, {"accepted", accepted}, {"rejected", rejected}, {"reject_reasons", reject_reasons}};
    }
};

/// One rejected input unit, reported through the optional rejection callback.
struct Rejection {
    std::size_t line = 0;  ///< 1-based input line (JSONL) or 0
    std::string reason;
    std::string detail;
};

using RecordSink = std::function<void(MetadataRecord&&)>;
using RejectionSink = std::function<void(const Rejection&)>;

class IngestError : public std::runtime_error {
public:
    IngestError(const std::string& message, std::uint64_t byte_offset)
        : std::runtime_error(message + " (byte offset " + std::to_string(byte_offset) + ")"), byte_offset_(byte_offset) {}

    std::uint64_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::uint64_t byte_offset_;
};

// ---------------------------------------------------------------------------
// JSON mapping

inline json to_json(const MetadataRecord& record) {
    json out = json::object();
    out["id"] = record.id;
    if (record.title) out["title"] = *record.title;
    if (record.abstract) out["abstract"] = *record.abstract;
    out["keywords"] = record.keywords;
    if (record.language) out["language"] = *record.language;
    out["ddc"] = record.ddc;
    if (record.doctype) out["doctype"] = *record.doctype;
    if (record.source) out["source"] = *record.source;
    if (record.year) out["year"] = *record.year;
    return out;
}

/// One JSON object on one line, invalid UTF-8 replaced rather than thrown.
inline std::string dump_line(const json& value) {
    return value.dump(-1, ' ', false, json::error_handler_t::replace);
}

inline std::string serialize_record(const MetadataRecord& record) { return dump_line(to_json(record)); }

namespace detail {

struct FieldError : std::runtime_error {
    explicit FieldError(const std::string& field) : std::runtime_error("invalid-field:" + field) {}
};

inline std::optional<std::string> optional_string(const json& object, const char* field) {
    const auto it = object.find(field);
    if (it == object.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw FieldError(field);
    return it->get<std::string>();
}

inline std::vector<std::string> string_list(const json& object, const char* field) {
    const auto it = object.find(field);
    if (it == object.end() || it->is_null()) return {};
    if (!it->is_array()) throw FieldError(field);
    std::vector<std::string> out;
    out.reserve(it->size());
    for (const auto& item : *it) {
        if (!item.is_string()) throw FieldError(field);
        out.push_back(item.get<std::string>());
    }
    return out;
}

}  // namespace detail

/// Maps a JSON object onto a record. Throws std::runtime_error whose message
/// is the rejection reason ("missing-id", "invalid-field:<name>").
inline MetadataRecord record_from_json(const json& object) {
    if (!object.is_object()) throw std::runtime_error("malformed-record");
    MetadataRecord record;
    const auto id = object.find("id");
    if (id == object.end() || id->is_null()) throw std::runtime_error("missing-id");
    if (!id->is_string()) throw detail::FieldError("id");
    record.id = id->get<std::string>();
    record.title = detail::optional_string(object, "title");
    record.abstract = detail::optional_string(object, "abstract");
    record.keywords = detail::string_list(object, "keywords");
    record.language = detail::optional_string(object, "language");
    record.ddc = detail::string_list(object, "ddc");
    record.doctype = detail::optional_string(object, "doctype");
    record.source = detail::optional_string(object, "source");
    if (const auto year = object.find("year"); year != object.end() && !year->is_null()) {
        if (!year->is_number_integer()) throw detail::FieldError("year");
        const auto value = year->get<std::int64_t>();
        if (value < kMinRecordYear || value > kMaxRecordYear) throw detail::FieldError("year");
        record.year = static_cast<int>(value);
    }
    if (auto violation = validate(record)) throw std::runtime_error(*violation);
    return record;
}

/// Streams one record object per line into `sink`. Bad lines are rejected
/// with a reason and never stop the stream; only an unreadable stream throws.
inline IngestReport parse_records_jsonl(std::istream& in, const RecordSink& sink, const RejectionSink& on_reject = {}) {
    IngestReport report;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    auto reject = [&](const std::string& reason, const std::string& detail) {
        report.reject(reason);
        if (on_reject) on_reject(Rejection{line_no, reason, detail});
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        ++report.read;
        json parsed;
        try {
            parsed = json::parse(line);
        } catch (const json::parse_error& e) {
            reject("malformed-record", e.what());
            continue;
        }
        MetadataRecord record;
        try {
            record = record_from_json(parsed);
        } catch (const std::exception& e) {
            reject(e.what(), std::string());
            continue;
        }
        if (!seen_ids.insert(record.id).second) {
            reject("duplicate-id", record.id);
            continue;
        }
        ++report.accepted;
        sink(std::move(record));
    }
    if (in.bad()) throw IngestError("read error in record stream", 0);
    return report;
}

struct ParsedRecords {
    std::vector<MetadataRecord> records;
    IngestReport report;
};

inline ParsedRecords parse_records_jsonl(std::istream& in) {
    ParsedRecords out;
    out.report = parse_records_jsonl(in, [&](MetadataRecord&& r) { out.records.push_back(std::move(r)); });
    return out;
}

// ---------------------------------------------------------------------------
// Dublin Core XML

inline constexpr std::string_view kDublinCoreNs = "http://purl.org/dc/elements/1.1/";
inline constexpr std::string_view kDublinCoreTermsNs = "http://purl.org/dc/terms/";

/// True for subjects that are bare DDC numbers: three digits, optional decimals.
inline bool is_ddc_subject(std::string_view subject) {
    static const std::regex pattern(R"(^[0-9]{3}(\.[0-9]+)?$)");
    subject = detail::trim(subject);
    return std::regex_match(subject.begin(), subject.end(), pattern);
}

/// First standalone four-digit run in [1400, 2100], e.g. "2019-05-01" -> 2019.
inline std::optional<int> extract_year(std::string_view date) {
    for (std::size_t i = 0; i + 4 <= date.size(); ++i) {
        auto digit = [&](std::size_t k) { return std::isdigit(static_cast<unsigned char>(date[k])) != 0; };
        if (!digit(i) || (i > 0 && digit(i - 1))) continue;
        std::size_t end = i;
        while (end < date.size() && digit(end)) ++end;
        if (end - i == 4) {
            const int year = std::stoi(std::string(date.substr(i, 4)));
            if (year >= kMinRecordYear && year <= kMaxRecordYear) return year;
        }
        i = end - 1;
    }
    return std::nullopt;
}

/// Normalizes a dc:language value to a two-letter code when recognizable.
inline std::optional<std::string> normalize_language(std::string_view value) {
    std::string code;
    for (char c : detail::trim(value)) code += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (const auto dash = code.find_first_of("-_"); dash != std::string::npos) code.resize(dash);
    if (is_language_code(code)) return code;
    static const std::map<std::string, std::string, std::less<>> three_letter = {
        {"eng", "en"}, {"ger", "de"}, {"deu", "de"}, {"fre", "fr"}, {"fra", "fr"}, {"spa", "es"},
        {"ita", "it"}, {"dut", "nl"}, {"nld", "nl"}, {"por", "pt"}, {"rus", "ru"}, {"pol", "pl"}};
    if (const auto it = three_letter.find(code); it != three_letter.end()) return it->second;
    return std::nullopt;
}

/// Reduces dc:type values like "info:eu-repo/semantics/article" to "article".
inline std::string normalize_doctype(std::string_view value) {
    std::string out(detail::trim(value));
    if (const auto slash = out.find_last_of('/'); slash != std::string::npos) out.erase(0, slash + 1);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

namespace detail {

class DublinCoreHandler {
public:
    DublinCoreHandler(const RecordSink& sink, const RejectionSink& on_reject, IngestReport& report)
        : sink_(sink), on_reject_(on_reject), report_(report) {}

    void start(std::string_view name, const XML_Char** attributes) {
        const auto [ns, local] = split(name);
        if (local == "record" && !in_record_) {
            in_record_ = true;
            depth_ = 0;
            record_ = MetadataRecord{};
            identifier_.reset();
            dc_identifier_.reset();
            for (const XML_Char** a = attributes; a && *a; a += 2)
                if (std::string_view(a[0]) == "id") identifier_ = std::string(a[1]);
            return;
        }
        if (!in_record_) return;
        ++depth_;
        if (!field_.empty()) return;  // nested markup inside a DC field: keep collecting text
        if (ns == kDublinCoreNs || ns == kDublinCoreTermsNs) {
            field_ = std::string(local);
            field_depth_ = depth_;
            text_.clear();
        } else if (local == "identifier" && !identifier_) {
            field_ = "header-identifier";
            field_depth_ = depth_;
            text_.clear();
        }
    }

    void end(std::string_view name) {
        if (!in_record_) return;
        if (depth_ == 0) {
            const auto local = split(name).second;
            if (local == "record") finish_record();
            return;
        }
        if (!field_.empty() && depth_ == field_depth_) {
            assign(field_, std::string(trim(text_)));
            field_.clear();
        }
        --depth_;
    }

    void text(std::string_view chunk) {
        if (in_record_ && !field_.empty()) text_.append(chunk);
    }

private:
    static std::pair<std::string_view, std::string_view> split(std::string_view name) {
        const auto sep = name.rfind(' ');
        if (sep == std::string_view::npos) return {std::string_view(), name};
        return {name.substr(0, sep), name.substr(sep + 1)};
    }

    void assign(const std::string& field, std::string value) {
        if (value.empty()) return;
        if (field == "header-identifier") {
            identifier_ = std::move(value);
        } else if (field == "identifier") {
            if (!dc_identifier_) dc_identifier_ = std::move(value);
        } else if (field == "title") {
            if (!record_.title) record_.title = std::move(value);
        } else if (field == "description" || field == "abstract") {
            if (!record_.abstract) record_.abstract = std::move(value);
        } else if (field == "subject") {
            if (is_ddc_subject(value)) record_.ddc.push_back(std::string(trim(value)));
            else record_.keywords.push_back(std::move(value));
        } else if (field == "language") {
            if (!record_.language) record_.language = normalize_language(value);
        } else if (field == "type") {
            if (!record_.doctype) record_.doctype = normalize_doctype(value);
        } else if (field == "date" || field == "issued") {
            if (!record_.year) record_.year = extract_year(value);
        } else if (field == "source") {
            if (!record_.source) record_.source = std::move(value);
        }
    }

    void finish_record() {
        in_record_ = false;
        ++report_.read;
        if (identifier_) record_.id = *identifier_;
        else if (dc_identifier_) record_.id = *dc_identifier_;
        std::optional<std::string> reason = validate(record_);
        if (!reason && !seen_ids_.insert(record_.id).second) reason = "duplicate-id";
        if (reason) {
            report_.reject(*reason);
            if (on_reject_) on_reject_(Rejection{0, *reason, record_.id});
            return;
        }
        ++report_.accepted;
        sink_(std::move(record_));
    }

    const RecordSink& sink_;
    const RejectionSink& on_reject_;
    IngestReport& report_;
    std::unordered_set<std::string> seen_ids_;

    bool in_record_ = false;
    int depth_ = 0;
    MetadataRecord record_;
    std::optional<std::string> identifier_;
    std::optional<std::string> dc_identifier_;
    std::string field_;
    int field_depth_ = 0;
    std::string text_;
};

struct ExpatParser {
    XML_Parser parser;
    ExpatParser() : parser(XML_ParserCreateNS(nullptr, ' ')) {
        if (parser == nullptr) throw std::bad_alloc();
    }
    ~ExpatParser() { XML_ParserFree(parser); }
    ExpatParser(const ExpatParser&) = delete;
    ExpatParser& operator=(const ExpatParser&) = delete;
};

}  // namespace detail

/// Streams records out of an XML document whose `record` elements carry
/// Dublin Core children (OAI-PMH oai_dc responses and flat dumps alike).
/// The record id comes from an `id` attribute, a non-DC `identifier`
/// element (the OAI header), or the first dc:identifier, in that order.
/// Malformed XML throws IngestError after delivering the records before it.
inline IngestReport parse_records_dc_xml(std::istream& in, const RecordSink& sink, const RejectionSink& on_reject = {}) {
    IngestReport report;
    detail::DublinCoreHandler handler(sink, on_reject, report);
    detail::ExpatParser expat;
    XML_SetUserData(expat.parser, &handler);
    XML_SetElementHandler(
        expat.parser,
        [](void* data, const XML_Char* name, const XML_Char** attributes) {
            static_cast<detail::DublinCoreHandler*>(data)->start(name, attributes);
        },
        [](void* data, const XML_Char* name) { static_cast<detail::DublinCoreHandler*>(data)->end(name); });
    XML_SetCharacterDataHandler(expat.parser, [](void* data, const XML_Char* s, int len) {
        static_cast<detail::DublinCoreHandler*>(data)->text(std::string_view(s, static_cast<std::size_t>(len)));
    });

    std::vector<char> buffer(1 << 16);
    for (;;) {
        in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        const auto got = in.gcount();
        if (in.bad()) throw IngestError("read error in XML stream", static_cast<std::uint64_t>(XML_GetCurrentByteIndex(expat.parser)));
        const bool final = got < static_cast<std::streamsize>(buffer.size());
        if (XML_Parse(expat.parser, buffer.data(), static_cast<int>(got), final) == XML_STATUS_ERROR) {
            const auto offset = XML_GetCurrentByteIndex(expat.parser);
            throw IngestError(std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(expat.parser)) +
                                  " at line " + std::to_string(XML_GetCurrentLineNumber(expat.parser)),
                              offset < 0 ? 0 : static_cast<std::uint64_t>(offset));
        }
        if (final) break;
    }
    return report;
}

inline ParsedRecords parse_records_dc_xml(std::istream& in) {
    ParsedRecords out;
    out.report = parse_records_dc_xml(in, [&](MetadataRecord&& r) { out.records.push_back(std::move(r)); });
    return out;
}

}  // namespace polifilter
