#include "citerank/ingest.hpp"

#include <algorithm>
#include <chrono>

#include <json.hpp>

namespace citerank {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& msg) {
    throw RecordError(RecordError::Reason::validation, msg);
}

json parse_object(std::string_view line) {
    json j = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded())
        throw RecordError(RecordError::Reason::syntax, "malformed record: not valid JSON");
    if (!j.is_object())
        throw RecordError(RecordError::Reason::syntax, "malformed record: expected a JSON object");
    return j;
}

std::string required_id(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) invalid(std::string("missing field \"") + key + "\"");
    if (!it->is_string()) invalid(std::string("field \"") + key + "\" must be a string");
    auto s = it->get<std::string>();
    if (s.empty()) invalid(std::string("field \"") + key + "\" must be nonempty");
    return s;
}

std::optional<std::string> optional_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) invalid(std::string("field \"") + key + "\" must be a string or null");
    auto s = it->get<std::string>();
    if (s.empty()) invalid(std::string("field \"") + key + "\" must be nonempty when present");
    return s;
}

int checked_year(const json& v, const char* key) {
    if (!v.is_number_integer()) invalid(std::string("field \"") + key + "\" must be an integer year");
    const auto y = v.get<long long>();
    if (y < kMinYear || y > max_year())
        invalid(std::string("field \"") + key + "\" out of range [" + std::to_string(kMinYear) + ", " +
                std::to_string(max_year()) + "]: " + std::to_string(y));
    return static_cast<int>(y);
}

int required_year(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) invalid(std::string("missing field \"") + key + "\"");
    return checked_year(*it, key);
}

}  // namespace

std::string_view to_string(CitationClass c) {
    switch (c) {
        case CitationClass::supporting: return "supporting";
        case CitationClass::mentioning: return "mentioning";
        case CitationClass::contrasting: return "contrasting";
    }
    return "mentioning";
}

std::optional<CitationClass> citation_class_from_string(std::string_view s) {
    if (s == "supporting") return CitationClass::supporting;
    if (s == "mentioning") return CitationClass::mentioning;
    if (s == "contrasting") return CitationClass::contrasting;
    return std::nullopt;
}

int max_year() {
    static const int year = [] {
        const auto today = std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now());
        return static_cast<int>(std::chrono::year_month_day(today).year()) + 1;
    }();
    return year;
}

namespace {
std::string located(const std::string& message, std::size_t line, const std::string& path) {
    if (line == 0) return message;
    return (path.empty() ? "line " : path + ":") + std::to_string(line) + ": " + message;
}
}  // namespace

RecordError::RecordError(Reason reason, const std::string& message, std::size_t line, const std::string& path)
    : DataError(located(message, line, path)),
      reason_(reason),
      message_(message),
      line_(line) {}

StatementRecord parse_statement(std::string_view line) {
    const json j = parse_object(line);
    StatementRecord r;
    r.citing_id = required_id(j, "citing_id");
    r.cited_id = required_id(j, "cited_id");
    r.citing_year = required_year(j, "citing_year");
    auto it = j.find("class");
    if (it == j.end()) invalid("missing field \"class\"");
    if (!it->is_string()) invalid("field \"class\" must be a string");
    const auto label = it->get<std::string>();
    auto cls = citation_class_from_string(label);
    if (!cls) invalid("unknown citation class \"" + label + "\"");
    r.cls = *cls;
    return r;
}

ReferenceEvent parse_reference(std::string_view line) {
    const json j = parse_object(line);
    ReferenceEvent r;
    r.citing_id = required_id(j, "citing_id");
    r.cited_id = required_id(j, "cited_id");
    r.citing_year = required_year(j, "citing_year");
    return r;
}

PublicationRecord parse_publication(std::string_view line) {
    const json j = parse_object(line);
    PublicationRecord r;
    r.id = required_id(j, "id");
    r.journal_id = optional_string(j, "journal_id");
    r.field = optional_string(j, "field");
    if (auto it = j.find("year"); it != j.end() && !it->is_null()) r.year = checked_year(*it, "year");
    return r;
}

AffiliationRecord parse_affiliation(std::string_view line) {
    const json j = parse_object(line);
    AffiliationRecord r;
    r.pub_id = required_id(j, "pub_id");
    auto it = j.find("institution_ids");
    if (it == j.end()) invalid("missing field \"institution_ids\"");
    if (!it->is_array()) invalid("field \"institution_ids\" must be an array");
    for (const auto& v : *it) {
        if (!v.is_string()) invalid("institution ids must be strings");
        auto s = v.get<std::string>();
        if (s.empty()) invalid("institution ids must be nonempty");
        r.institution_ids.push_back(std::move(s));
    }
    std::sort(r.institution_ids.begin(), r.institution_ids.end());
    r.institution_ids.erase(std::unique(r.institution_ids.begin(), r.institution_ids.end()),
                            r.institution_ids.end());
    return r;
}

std::string to_line(const StatementRecord& r) {
    nlohmann::ordered_json j;
    j["citing_id"] = r.citing_id;
    j["cited_id"] = r.cited_id;
    j["citing_year"] = r.citing_year;
    j["class"] = std::string(to_string(r.cls));
    return j.dump();
}

std::string to_line(const ReferenceEvent& r) {
    nlohmann::ordered_json j;
    j["citing_id"] = r.citing_id;
    j["cited_id"] = r.cited_id;
    j["citing_year"] = r.citing_year;
    return j.dump();
}

std::string to_line(const PublicationRecord& r) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    if (r.journal_id) j["journal_id"] = *r.journal_id;
    if (r.field) j["field"] = *r.field;
    if (r.year) j["year"] = *r.year;
    return j.dump();
}

std::string to_line(const AffiliationRecord& r) {
    nlohmann::ordered_json j;
    j["pub_id"] = r.pub_id;
    j["institution_ids"] = r.institution_ids;
    return j.dump();
}

LineReader::LineReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open " + path);
}

bool LineReader::next(std::string& line) {
    if (!std::getline(in_, line)) {
        if (in_.bad()) throw IoError("read failure on " + path_);
        return false;
    }
    ++line_number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::size_t LineReader::read_batch(std::vector<std::string>& out, std::size_t max) {
    std::size_t n = 0;
    std::string line;
    while (n < max && next(line)) {
        out.push_back(std::move(line));
        ++n;
    }
    return n;
}

void LineTally::reject(const RecordError& e, std::size_t line) {
    ++report_.lines;
    if (mode_ == Mode::strict)
        throw RecordError(e.reason(), e.message(), line, report_.path);
    ++report_.skipped;
    if (!report_.first_bad_line || line < *report_.first_bad_line) {
        report_.first_bad_line = line;
        report_.first_error = e.message();
    }
}

std::string StreamReport::summary_line() const {
    nlohmann::ordered_json j;
    j["skipped"] = skipped;
    j["first_bad_line"] = first_bad_line ? json(*first_bad_line) : json(nullptr);
    j["file"] = path;
    return j.dump();
}

}  // namespace citerank
