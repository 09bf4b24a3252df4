#include "citerank/driver.hpp"

#include <json.hpp>

#include "citerank/error.hpp"

namespace citerank {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void emit(const DiagnosticSink& diag, const std::string& line) {
    if (diag) diag(line);
}

void require_path(const std::string& path, std::string_view flag) {
    if (path.empty()) throw UsageError("missing required option --" + std::string(flag));
}

std::string summary_line(const AggregateStore& store) {
    const auto& d = store.diagnostics();
    ordered_json j;
    j["summary"] = "aggregate";
    j["entity"] = std::string(to_string(store.kind()));
    j["from_year"] = store.window().from_year;
    j["to_year"] = store.window().to_year;
    j["entities"] = store.tallies().size();
    j["statements_seen"] = d.statements_seen;
    j["statements_counted"] = d.statements_counted;
    j["statements_out_of_window"] = d.statements_out_of_window;
    j["statements_unresolved"] = d.statements_unresolved;
    j["references_seen"] = d.references_seen;
    j["references_counted"] = d.references_counted;
    j["references_duplicate"] = d.references_duplicate;
    j["references_out_of_window"] = d.references_out_of_window;
    j["references_unresolved"] = d.references_unresolved;
    return j.dump();
}

// Inverts each reported SI under the configured base and checks that the implied
// references are at least the entity's statement total.
void implied_references_check(const AggregateStore& store, const RunConfig& cfg, const DiagnosticSink& diag) {
    const auto reported = load_metric_file(cfg.reported_si);
    std::size_t checked = 0;
    std::size_t violations = 0;
    json examples = json::array();
    for (const auto& [key, tally] : store.tallies()) {
        auto it = reported.find(key.id);
        if (it == reported.end()) continue;
        const auto u = usi(tally.supporting, tally.contrasting);
        if (!u || u->value <= 0.0) continue;
        ++checked;
        const double implied = implied_references(Si{it->second}, *u, cfg.si_config);
        if (implied < static_cast<double>(tally.statements())) {
            ++violations;
            if (examples.size() < 5) examples.push_back(key.id);
        }
    }
    ordered_json j;
    j["check"] = "implied_references";
    j["log_base"] = cfg.si_config.log_base;
    j["checked"] = checked;
    j["violations"] = violations;
    j["examples"] = std::move(examples);
    j["status"] = (checked > 0 && violations == 0) ? "PASSED" : "FAILED";
    emit(diag, j.dump());
}

}  // namespace

std::map<std::string, double> load_metric_file(const std::string& path) {
    std::map<std::string, double> out;
    LineReader reader(path);
    std::string line;
    while (reader.next(line)) {
        const auto where = path + ":" + std::to_string(reader.line_number()) + ": ";
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw DataError(where + "malformed record");
        auto id = j.find("id");
        auto value = j.find("value");
        if (id == j.end() || !id->is_string() || id->get_ref<const std::string&>().empty())
            throw DataError(where + "\"id\" must be a nonempty string");
        if (value == j.end() || !value->is_number()) throw DataError(where + "\"value\" must be a number");
        if (!out.emplace(id->get<std::string>(), value->get<double>()).second)
            throw DataError(where + "duplicate id " + id->get<std::string>());
    }
    return out;
}

AggregateStore cmd_aggregate(const RunConfig& cfg, const DiagnosticSink& diag) {
    require_path(cfg.inputs.statements, "statements");
    require_path(cfg.inputs.references, "references");
    require_path(cfg.inputs.publications, "pubs");
    require_path(cfg.inputs.affiliations, "affiliations");
    cfg.si_config.validate();

    BuildOptions opts;
    opts.window = cfg.window;
    opts.kind = cfg.kind.value_or(EntityKind::journal);
    opts.shards = cfg.shards;
    opts.mode = cfg.mode;
    opts.diagnostics = diag;
    AggregateStore store = build(cfg.inputs, opts);
    emit(diag, summary_line(store));
    return store;
}

std::string cmd_rank(const AggregateStore& store, const RunConfig& cfg, const DiagnosticSink& diag) {
    const RankSpec spec = cfg.rank_spec(store.kind());
    const RankResult result = rank_entities(store, spec);
    emit(diag, result.report_line());
    if (!cfg.reported_si.empty()) implied_references_check(store, cfg, diag);
    return export_rows(result.rows, cfg.format);
}

std::string cmd_fields(const AggregateStore& store, const RunConfig& cfg, const DiagnosticSink& diag) {
    const auto rows = field_breakdown(store, cfg.si_config);
    ordered_json j;
    j["rows"] = rows.size();
    j["dropped_undefined_si"] = store.tallies().size() - rows.size();
    emit(diag, j.dump());
    return export_breakdown(rows, cfg.format);
}

std::string cmd_correlate(const AggregateStore& store, const RunConfig& cfg, const DiagnosticSink& diag) {
    require_path(cfg.external, "external");
    const auto external = load_metric_file(cfg.external);
    RankSpec spec = cfg.rank_spec(store.kind(), Metric::usi);
    spec.top_k.reset();
    const RankResult ranked = rank_entities(store, spec);
    const CorrelationResult c = correlate(ranked.rows, external, spec.metric);

    if (!c.unmatched.empty()) {
        ordered_json u;
        u["unmatched"] = c.unmatched.size();
        json ids = json::array();
        for (std::size_t i = 0; i < c.unmatched.size() && i < 10; ++i) ids.push_back(c.unmatched[i]);
        u["examples"] = std::move(ids);
        emit(diag, u.dump());
    }
    ordered_json j;
    j["metric"] = std::string(to_string(spec.metric));
    j["r"] = c.r;
    j["matched"] = c.matched;
    j["unmatched"] = c.unmatched.size();
    return j.dump() + '\n';
}

ValidateResult cmd_validate(const RunConfig& cfg) {
    ValidateResult result;
    bool any = false;
    auto check = [&](const std::string& path, std::string_view stream_name, auto tag) {
        if (path.empty()) return;
        any = true;
        using Record = typename decltype(tag)::type;
        const StreamReport r = stream<Record>(path, Mode::lenient, [](Record&&) {});
        ordered_json j;
        j["stream"] = std::string(stream_name);
        j["file"] = path;
        j["lines"] = r.lines;
        j["records"] = r.records;
        j["defects"] = r.skipped;
        j["first_bad_line"] = r.first_bad_line ? json(*r.first_bad_line) : json(nullptr);
        if (r.first_bad_line) j["first_error"] = r.first_error;
        result.report += j.dump() + '\n';
        result.defects += r.skipped;
    };
    check(cfg.inputs.statements, "statements", std::type_identity<StatementRecord>{});
    check(cfg.inputs.references, "references", std::type_identity<ReferenceEvent>{});
    check(cfg.inputs.publications, "pubs", std::type_identity<PublicationRecord>{});
    check(cfg.inputs.affiliations, "affiliations", std::type_identity<AffiliationRecord>{});
    if (!any) throw UsageError("validate needs at least one of --statements, --references, --pubs, --affiliations");
    return result;
}

}  // namespace citerank
