#pragma once

#include <cstddef>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "citerank/error.hpp"
#include "citerank/metrics.hpp"

namespace citerank {

enum class CitationClass { supporting, mentioning, contrasting };

std::string_view to_string(CitationClass c);
std::optional<CitationClass> citation_class_from_string(std::string_view s);

/// One classified in-text citation. Counted per occurrence; never deduplicated.
struct StatementRecord {
    std::string citing_id;
    std::string cited_id;
    int citing_year = 0;
    CitationClass cls = CitationClass::mentioning;

    friend bool operator==(const StatementRecord&, const StatementRecord&) = default;
};

/// One reference-list link from metadata, without stance.
struct ReferenceEvent {
    std::string citing_id;
    std::string cited_id;
    int citing_year = 0;

    friend bool operator==(const ReferenceEvent&, const ReferenceEvent&) = default;
};

struct PublicationRecord {
    std::string id;
    std::optional<std::string> journal_id;
    std::optional<std::string> field;
    std::optional<int> year;

    friend bool operator==(const PublicationRecord&, const PublicationRecord&) = default;
};

struct AffiliationRecord {
    std::string pub_id;
    std::vector<std::string> institution_ids;  // sorted, unique

    friend bool operator==(const AffiliationRecord&, const AffiliationRecord&) = default;
};

/// Earliest accepted year for citing works and publications.
inline constexpr int kMinYear = 1400;
/// Current calendar year + 1.
int max_year();

/// A rejected line. `line` is 0 (and path empty) when raised by a bare parse_* call.
class RecordError : public DataError {
public:
    enum class Reason { syntax, validation };

    RecordError(Reason reason, const std::string& message, std::size_t line = 0,
                const std::string& path = {});

    Reason reason() const noexcept { return reason_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& message() const noexcept { return message_; }

private:
    Reason reason_;
    std::string message_;
    std::size_t line_;
};

StatementRecord parse_statement(std::string_view line);
ReferenceEvent parse_reference(std::string_view line);
PublicationRecord parse_publication(std::string_view line);
AffiliationRecord parse_affiliation(std::string_view line);

std::string to_line(const StatementRecord& r);
std::string to_line(const ReferenceEvent& r);
std::string to_line(const PublicationRecord& r);
std::string to_line(const AffiliationRecord& r);

/// Dispatches to the parse_* function for a record type.
template <class Record>
Record parse_record(std::string_view line);
template <> inline StatementRecord parse_record<StatementRecord>(std::string_view l) { return parse_statement(l); }
template <> inline ReferenceEvent parse_record<ReferenceEvent>(std::string_view l) { return parse_reference(l); }
template <> inline PublicationRecord parse_record<PublicationRecord>(std::string_view l) { return parse_publication(l); }
template <> inline AffiliationRecord parse_record<AffiliationRecord>(std::string_view l) { return parse_affiliation(l); }

enum class Mode { strict, lenient };

/// Reads a file line by line, tracking 1-based line numbers. Strips a trailing '\r'.
class LineReader {
public:
    explicit LineReader(const std::string& path);

    bool next(std::string& line);
    std::size_t line_number() const noexcept { return line_number_; }
    const std::string& path() const noexcept { return path_; }

    /// Appends up to `max` lines to `out`; returns the number appended.
    std::size_t read_batch(std::vector<std::string>& out, std::size_t max);

private:
    std::string path_;
    std::ifstream in_;
    std::size_t line_number_ = 0;
};

struct StreamReport {
    std::string path;
    std::size_t lines = 0;
    std::size_t records = 0;
    std::size_t skipped = 0;
    std::optional<std::size_t> first_bad_line;
    std::string first_error;

    /// {"skipped":n,"first_bad_line":m,"file":path}
    std::string summary_line() const;
};

/// Folds over-limit lines into a report; throws RecordError (with line) in strict mode.
class LineTally {
public:
    explicit LineTally(Mode mode, std::string path) : mode_(mode) { report_.path = std::move(path); }

    void accept() { ++report_.records; ++report_.lines; }
    void reject(const RecordError& e, std::size_t line);

    const StreamReport& report() const { return report_; }
    StreamReport& report() { return report_; }

private:
    Mode mode_;
    StreamReport report_;
};

/// Parses `path` line by line and hands each record to `sink`. Memory use does not
/// depend on file size. Strict mode throws on the first bad line; lenient mode
/// skips and counts bad lines.
template <class Record>
StreamReport stream(const std::string& path, Mode mode, const std::function<void(Record&&)>& sink) {
    LineReader reader(path);
    LineTally tally(mode, path);
    std::string line;
    while (reader.next(line)) {
        try {
            Record r = parse_record<Record>(line);
            tally.accept();
            sink(std::move(r));
        } catch (const RecordError& e) {
            tally.reject(e, reader.line_number());
        }
    }
    return tally.report();
}

/// Convenience: stream into a vector.
template <class Record>
std::vector<Record> read_all(const std::string& path, Mode mode, StreamReport* report = nullptr) {
    std::vector<Record> out;
    StreamReport rep = stream<Record>(path, mode, [&](Record&& r) { out.push_back(std::move(r)); });
    if (report) *report = std::move(rep);
    return out;
}

}  // namespace citerank
