#include "citerank/rank.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "citerank/error.hpp"

namespace citerank {

using nlohmann::ordered_json;

namespace {

std::string entity_label(const EntityKey& k) {
    if (k.kind == EntityKind::institution_field) return k.id + " [" + k.field + "]";
    return k.id;
}

std::string with_thousands(Count n) {
    std::string digits = std::to_string(n);
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i != 0 && (digits.size() - i) % 3 == 0) out += ',';
        out += digits[i];
    }
    return out;
}

std::string csv_cell(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string md_cell(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        if (c == '\n' || c == '\r') {
            out += ' ';
            continue;
        }
        out += c;
    }
    return out;
}

std::string optional_number(const std::optional<double>& v) { return v ? exact_number(*v) : std::string(); }

ordered_json optional_json(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> metric_value(const RankedRow& row, Metric m) {
    return m == Metric::si ? row.si_exact : row.usi_exact;
}

}  // namespace

std::string_view to_string(Metric m) { return m == Metric::si ? "si" : "usi"; }

std::optional<Metric> metric_from_string(std::string_view s) {
    if (s == "si") return Metric::si;
    if (s == "usi") return Metric::usi;
    return std::nullopt;
}

std::string_view to_string(ExclusionReason r) {
    switch (r) {
        case ExclusionReason::usi_undefined: return "usi_undefined";
        case ExclusionReason::si_undefined: return "si_undefined";
        case ExclusionReason::below_min_valenced: return "below_min_valenced";
        case ExclusionReason::below_min_references: return "below_min_references";
    }
    return "usi_undefined";
}

std::string_view to_string(Format f) {
    switch (f) {
        case Format::csv: return "csv";
        case Format::json: return "json";
        case Format::markdown: return "md";
    }
    return "csv";
}

std::optional<Format> format_from_string(std::string_view s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    if (s == "md" || s == "markdown") return Format::markdown;
    return std::nullopt;
}

void RankSpec::validate() const {
    si_config.validate();
    if (top_k && *top_k < 1) throw UsageError("top must be >= 1");
}

std::string display2(double value) {
    if (!std::isfinite(value)) return "NA";
    double rounded = std::round(value * 100.0) / 100.0;
    if (rounded == 0.0) rounded = 0.0;  // drop the sign of -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", rounded);
    return buf;
}

std::string exact_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, end);
}

std::string RankResult::report_line() const {
    ordered_json j;
    j["ranked"] = rows.size();
    j["excluded"] = excluded.size();
    j["truncated"] = truncated;
    std::map<std::string, std::size_t> by_reason;
    for (const auto& e : excluded) ++by_reason[std::string(to_string(e.reason))];
    ordered_json reasons = ordered_json::object();
    for (const auto& [reason, n] : by_reason) reasons[reason] = n;
    j["reasons"] = std::move(reasons);
    return j.dump();
}

RankResult rank_entities(const AggregateStore& store, const RankSpec& spec) {
    spec.validate();
    if (store.kind() != spec.kind)
        throw UsageError("store holds " + std::string(to_string(store.kind())) + " tallies but ranking requested " +
                         std::string(to_string(spec.kind)));

    RankResult result;
    for (const auto& [key, tally] : store.tallies()) {
        const auto u = usi(tally.supporting, tally.contrasting);
        std::optional<double> si_value;
        if (u)
            if (auto s = si(tally.references, *u, spec.si_config)) si_value = s->value;

        std::optional<ExclusionReason> reason;
        if (!u)
            reason = ExclusionReason::usi_undefined;
        else if (spec.metric == Metric::si && !si_value)
            reason = ExclusionReason::si_undefined;
        else if (tally.valenced() < spec.min_valenced)
            reason = ExclusionReason::below_min_valenced;
        else if (tally.references < spec.min_references)
            reason = ExclusionReason::below_min_references;
        if (reason) {
            result.excluded.push_back({key, *reason});
            continue;
        }

        RankedRow row;
        row.entity = key;
        row.tally = tally;
        row.usi_exact = u->value;
        row.si_exact = si_value;
        row.usi_display = display2(u->value);
        row.si_display = si_value ? display2(*si_value) : "NA";
        result.rows.push_back(std::move(row));
    }

    const Metric metric = spec.metric;
    std::sort(result.rows.begin(), result.rows.end(), [metric](const RankedRow& a, const RankedRow& b) {
        const double ma = *metric_value(a, metric);
        const double mb = *metric_value(b, metric);
        if (ma != mb) return ma > mb;
        if (a.tally.supporting != b.tally.supporting) return a.tally.supporting > b.tally.supporting;
        if (a.tally.references != b.tally.references) return a.tally.references > b.tally.references;
        return a.entity < b.entity;
    });

    if (spec.top_k && result.rows.size() > *spec.top_k) {
        result.truncated = result.rows.size() - *spec.top_k;
        result.rows.resize(*spec.top_k);
    }
    for (std::size_t i = 0; i < result.rows.size(); ++i) result.rows[i].rank = i + 1;
    return result;
}

std::vector<FieldBreakdownRow> field_breakdown(const AggregateStore& store, const SiConfig& cfg) {
    cfg.validate();
    if (store.kind() != EntityKind::institution_field)
        throw UsageError("field breakdown needs a store aggregated with --entity institution-field, got " +
                         std::string(to_string(store.kind())));
    std::vector<FieldBreakdownRow> rows;
    for (const auto& [key, tally] : store.tallies()) {
        const auto u = usi(tally.supporting, tally.contrasting);
        if (!u) continue;
        const auto s = si(tally.references, *u, cfg);
        if (!s) continue;
        rows.push_back({EntityKey{EntityKind::institution, key.id, {}}, key.field, tally, u->value, s->value});
    }
    std::sort(rows.begin(), rows.end(), [](const FieldBreakdownRow& a, const FieldBreakdownRow& b) {
        if (a.field != b.field) return a.field < b.field;
        if (a.si_exact != b.si_exact) return a.si_exact > b.si_exact;
        return a.institution.id < b.institution.id;
    });
    return rows;
}

CorrelationResult correlate(std::span<const RankedRow> rows, const std::map<std::string, double>& external,
                            Metric metric) {
    CorrelationResult result;
    std::vector<std::pair<double, double>> pairs;
    for (const auto& row : rows) {
        auto it = external.find(row.entity.id);
        auto value = metric_value(row, metric);
        if (it == external.end() || !value) {
            result.unmatched.push_back(row.entity.id);
            continue;
        }
        pairs.emplace_back(*value, it->second);
    }
    result.matched = pairs.size();
    if (pairs.size() < 2)
        throw DomainError("correlate: need at least 2 matched entities, got " + std::to_string(pairs.size()));
    result.r = pearson(pairs);
    return result;
}

std::string export_rows(std::span<const RankedRow> rows, Format format) {
    std::string out;
    switch (format) {
        case Format::csv:
            out = "kind,id,supporting,mentioning,contrasting,references,usi_exact,si_exact,usi_display,si_display,rank\n";
            for (const auto& r : rows) {
                out += std::string(to_string(r.entity.kind)) + ',' + csv_cell(entity_label(r.entity)) + ',' +
                       std::to_string(r.tally.supporting) + ',' + std::to_string(r.tally.mentioning) + ',' +
                       std::to_string(r.tally.contrasting) + ',' + std::to_string(r.tally.references) + ',' +
                       optional_number(r.usi_exact) + ',' + optional_number(r.si_exact) + ',' + r.usi_display +
                       ',' + r.si_display + ',' + std::to_string(r.rank) + '\n';
            }
            break;
        case Format::json: {
            ordered_json arr = ordered_json::array();
            for (const auto& r : rows) {
                ordered_json j;
                j["kind"] = std::string(to_string(r.entity.kind));
                j["id"] = entity_label(r.entity);
                j["supporting"] = r.tally.supporting;
                j["mentioning"] = r.tally.mentioning;
                j["contrasting"] = r.tally.contrasting;
                j["references"] = r.tally.references;
                j["usi_exact"] = optional_json(r.usi_exact);
                j["si_exact"] = optional_json(r.si_exact);
                j["usi_display"] = r.usi_display;
                j["si_display"] = r.si_display;
                j["rank"] = r.rank;
                arr.push_back(std::move(j));
            }
            out = arr.dump(2) + '\n';
            break;
        }
        case Format::markdown:
            out = "| Entity | Supporting | Mentioning | Contrasting | USI | SI |\n"
                  "|---|---:|---:|---:|---:|---:|\n";
            for (const auto& r : rows) {
                out += "| " + md_cell(entity_label(r.entity)) + " | " + with_thousands(r.tally.supporting) + " | " +
                       with_thousands(r.tally.mentioning) + " | " + with_thousands(r.tally.contrasting) + " | " +
                       r.usi_display + " | " + r.si_display + " |\n";
            }
            break;
    }
    return out;
}

std::string export_breakdown(std::span<const FieldBreakdownRow> rows, Format format) {
    std::string out;
    switch (format) {
        case Format::csv:
            out = "institution,field,supporting,mentioning,contrasting,references,usi_exact,si_exact\n";
            for (const auto& r : rows) {
                out += csv_cell(r.institution.id) + ',' + csv_cell(r.field) + ',' + std::to_string(r.tally.supporting) +
                       ',' + std::to_string(r.tally.mentioning) + ',' + std::to_string(r.tally.contrasting) + ',' +
                       std::to_string(r.tally.references) + ',' + optional_number(r.usi_exact) + ',' +
                       exact_number(r.si_exact) + '\n';
            }
            break;
        case Format::json: {
            ordered_json arr = ordered_json::array();
            for (const auto& r : rows) {
                ordered_json j;
                j["institution"] = r.institution.id;
                j["field"] = r.field;
                j["supporting"] = r.tally.supporting;
                j["mentioning"] = r.tally.mentioning;
                j["contrasting"] = r.tally.contrasting;
                j["references"] = r.tally.references;
                j["usi_exact"] = optional_json(r.usi_exact);
                j["si_exact"] = r.si_exact;
                arr.push_back(std::move(j));
            }
            out = arr.dump(2) + '\n';
            break;
        }
        case Format::markdown:
            out = "| Institution | Field | Supporting | Mentioning | Contrasting | USI | SI |\n"
                  "|---|---|---:|---:|---:|---:|---:|\n";
            for (const auto& r : rows) {
                out += "| " + md_cell(r.institution.id) + " | " + md_cell(r.field) + " | " +
                       with_thousands(r.tally.supporting) + " | " + with_thousands(r.tally.mentioning) + " | " +
                       with_thousands(r.tally.contrasting) + " | " + (r.usi_exact ? display2(*r.usi_exact) : "NA") +
                       " | " + display2(r.si_exact) + " |\n";
            }
            break;
    }
    return out;
}

}  // namespace citerank
