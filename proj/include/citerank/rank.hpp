#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citerank/aggregate.hpp"
#include "citerank/linking.hpp"
#include "citerank/metrics.hpp"

namespace citerank {

enum class Metric { si, usi };

std::string_view to_string(Metric m);
std::optional<Metric> metric_from_string(std::string_view s);

struct RankSpec {
    Metric metric = Metric::si;
    EntityKind kind = EntityKind::journal;
    Count min_valenced = 0;    // supporting + contrasting floor
    Count min_references = 0;
    std::optional<std::size_t> top_k;
    SiConfig si_config;

    void validate() const;
};

struct RankedRow {
    std::size_t rank = 0;  // 1-based
    EntityKey entity;
    EntityTally tally;
    std::optional<double> usi_exact;
    std::optional<double> si_exact;
    std::string usi_display;  // "NA" when undefined
    std::string si_display;
};

enum class ExclusionReason { usi_undefined, si_undefined, below_min_valenced, below_min_references };

std::string_view to_string(ExclusionReason r);

struct Exclusion {
    EntityKey entity;
    ExclusionReason reason;
};

struct RankResult {
    std::vector<RankedRow> rows;
    std::vector<Exclusion> excluded;
    std::size_t truncated = 0;  // eligible rows dropped by top_k

    /// One-line JSON exclusion report.
    std::string report_line() const;
};

/// Sorted by the exact metric, descending; ties broken by supporting desc,
/// references desc, then entity key ascending. Throws UsageError when the
/// spec kind differs from the store kind.
RankResult rank_entities(const AggregateStore& store, const RankSpec& spec);

/// Round half away from zero to 2 decimals, formatted "%.2f"; never "-0.00".
std::string display2(double value);

struct FieldBreakdownRow {
    EntityKey institution;  // kind institution
    std::string field;
    EntityTally tally;
    std::optional<double> usi_exact;
    double si_exact = 0.0;
};

/// Requires a store built with EntityKind::institution_field. Rows with
/// undefined SI are dropped; output is sorted by field, then si desc, then institution id.
std::vector<FieldBreakdownRow> field_breakdown(const AggregateStore& store, const SiConfig& cfg = {});

struct CorrelationResult {
    double r = 0.0;
    std::size_t matched = 0;
    std::vector<std::string> unmatched;  // ranked entity ids missing from the external map
};

/// Pearson r between each row's exact metric and external[id]. Throws DomainError
/// on fewer than two matches or zero variance.
CorrelationResult correlate(std::span<const RankedRow> rows, const std::map<std::string, double>& external,
                            Metric metric);

enum class Format { csv, json, markdown };

std::string_view to_string(Format f);
std::optional<Format> format_from_string(std::string_view s);

/// CSV header: kind,id,supporting,mentioning,contrasting,references,usi_exact,si_exact,usi_display,si_display,rank
std::string export_rows(std::span<const RankedRow> rows, Format format);

/// CSV header: institution,field,supporting,mentioning,contrasting,references,usi_exact,si_exact
std::string export_breakdown(std::span<const FieldBreakdownRow> rows, Format format);

/// Shortest decimal text that round-trips to the same double.
std::string exact_number(double v);

}  // namespace citerank
