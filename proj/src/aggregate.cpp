#include "citerank/aggregate.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "citerank/error.hpp"

namespace citerank {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string pair_key(std::string_view citing, std::string_view cited) {
    std::string key = std::to_string(citing.size());
    key.reserve(key.size() + 1 + citing.size() + cited.size());
    key += ':';
    key += citing;
    key += cited;
    return key;
}

// Runs fn(i) for i in [0, n) on n threads; rethrows the first captured exception.
template <class Fn>
void run_parallel(std::size_t n, Fn&& fn) {
    if (n <= 1) {
        if (n == 1) fn(std::size_t{0});
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    {
        std::vector<std::jthread> workers;
        workers.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            workers.emplace_back([&, i] {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

constexpr std::size_t kBatchLines = 1 << 16;

template <class Record, class Accumulate>
StreamReport process_stream(const std::string& path, Mode mode, std::vector<AggregateStore>& shards,
                            const LinkTables& tables, Accumulate accumulate) {
    LineReader reader(path);
    LineTally tally(mode, path);
    const std::size_t workers = shards.size();

    std::vector<std::string> lines;
    std::vector<std::optional<Record>> parsed;
    std::vector<std::optional<RecordError>> errors;
    lines.reserve(kBatchLines);

    for (;;) {
        lines.clear();
        const std::size_t first_line = reader.line_number() + 1;
        const std::size_t n = reader.read_batch(lines, kBatchLines);
        if (n == 0) break;
        parsed.assign(n, std::nullopt);
        errors.assign(n, std::nullopt);

        const std::size_t chunk = (n + workers - 1) / workers;
        run_parallel(workers, [&](std::size_t w) {
            const std::size_t lo = std::min(n, w * chunk);
            const std::size_t hi = std::min(n, lo + chunk);
            for (std::size_t i = lo; i < hi; ++i) {
                try {
                    parsed[i] = parse_record<Record>(lines[i]);
                } catch (const RecordError& e) {
                    errors[i] = e;
                }
            }
        });

        // Rejections are folded in line order so strict mode reports the first bad line.
        for (std::size_t i = 0; i < n; ++i) {
            if (errors[i])
                tally.reject(*errors[i], first_line + i);
            else
                tally.accept();
        }

        run_parallel(workers, [&](std::size_t w) {
            for (std::size_t i = 0; i < n; ++i) {
                if (!parsed[i]) continue;
                const Record& r = *parsed[i];
                if (shard_of(r.citing_id, r.cited_id, workers) == w) accumulate(shards[w], r, tables);
            }
        });
    }
    return tally.report();
}

AggregateStore merge_all(std::vector<AggregateStore>& shards, const Window& window, EntityKind kind) {
    AggregateStore out(window, kind);
    for (auto& s : shards) out.merge(s);
    return out;
}

}  // namespace

void Window::validate() const {
    if (from_year > to_year)
        throw UsageError("window: from-year " + std::to_string(from_year) + " is after to-year " +
                         std::to_string(to_year));
}

AggregateDiagnostics& AggregateDiagnostics::operator+=(const AggregateDiagnostics& o) {
    statements_seen += o.statements_seen;
    statements_counted += o.statements_counted;
    statements_out_of_window += o.statements_out_of_window;
    statements_unresolved += o.statements_unresolved;
    references_seen += o.references_seen;
    references_counted += o.references_counted;
    references_duplicate += o.references_duplicate;
    references_out_of_window += o.references_out_of_window;
    references_unresolved += o.references_unresolved;
    publication_overwrites += o.publication_overwrites;
    affiliation_overwrites += o.affiliation_overwrites;
    return *this;
}

AggregateStore::AggregateStore(Window window, EntityKind kind) : window_(window), kind_(kind) {}

void AggregateStore::accumulate_statement(const StatementRecord& rec, const LinkTables& tables) {
    ++diagnostics_.statements_seen;
    if (!window_.contains(rec.citing_year)) {
        ++diagnostics_.statements_out_of_window;
        return;
    }
    const auto keys = tables.resolve(rec.cited_id, kind_);
    if (keys.empty()) {
        ++diagnostics_.statements_unresolved;
        return;
    }
    ++diagnostics_.statements_counted;
    for (const auto& key : keys) {
        auto& t = tallies_[key];
        switch (rec.cls) {
            case CitationClass::supporting: ++t.supporting; break;
            case CitationClass::mentioning: ++t.mentioning; break;
            case CitationClass::contrasting: ++t.contrasting; break;
        }
    }
}

void AggregateStore::accumulate_reference(const ReferenceEvent& ev, const LinkTables& tables) {
    ++diagnostics_.references_seen;
    if (!window_.contains(ev.citing_year)) {
        ++diagnostics_.references_out_of_window;
        return;
    }
    if (!seen_pairs_.insert(pair_key(ev.citing_id, ev.cited_id)).second) {
        ++diagnostics_.references_duplicate;
        return;
    }
    const auto keys = tables.resolve(ev.cited_id, kind_);
    if (keys.empty()) {
        ++diagnostics_.references_unresolved;
        return;
    }
    ++diagnostics_.references_counted;
    for (const auto& key : keys) ++tallies_[key].references;
}

void AggregateStore::merge(const AggregateStore& other) {
    if (window_ != other.window_ || kind_ != other.kind_)
        throw UsageError("cannot merge stores with different window or entity kind");
    for (const auto& key : other.seen_pairs_)
        if (seen_pairs_.contains(key))
            throw UsageError("cannot merge stores whose reference-pair shards overlap");
    seen_pairs_.insert(other.seen_pairs_.begin(), other.seen_pairs_.end());
    for (const auto& [key, tally] : other.tallies_) tallies_[key] += tally;
    diagnostics_ += other.diagnostics_;
}

void AggregateStore::add_tally(const EntityKey& key, const EntityTally& tally) {
    if (key.kind != kind_) throw UsageError("entity kind does not match store kind");
    if (key.id.empty()) throw DataError("entity id must be nonempty");
    tallies_[key] += tally;
}

std::vector<EntityKey> AggregateStore::statements_exceed_references() const {
    std::vector<EntityKey> out;
    for (const auto& [key, t] : tallies_)
        if (t.statements() > t.references) out.push_back(key);
    return out;
}

std::string AggregateStore::serialize() const {
    std::string out;
    for (const auto& [key, t] : tallies_) {
        ordered_json j;
        j["kind"] = std::string(to_string(key.kind));
        j["id"] = key.id;
        if (key.kind == EntityKind::institution_field) j["field"] = key.field;
        j["supporting"] = t.supporting;
        j["mentioning"] = t.mentioning;
        j["contrasting"] = t.contrasting;
        j["references"] = t.references;
        out += j.dump();
        out += '\n';
    }
    const auto& d = diagnostics_;
    ordered_json diag;
    diag["kind"] = std::string(to_string(kind_));
    diag["from_year"] = window_.from_year;
    diag["to_year"] = window_.to_year;
    diag["entities"] = tallies_.size();
    diag["statements_seen"] = d.statements_seen;
    diag["statements_counted"] = d.statements_counted;
    diag["statements_out_of_window"] = d.statements_out_of_window;
    diag["statements_unresolved"] = d.statements_unresolved;
    diag["references_seen"] = d.references_seen;
    diag["references_counted"] = d.references_counted;
    diag["references_duplicate"] = d.references_duplicate;
    diag["references_out_of_window"] = d.references_out_of_window;
    diag["references_unresolved"] = d.references_unresolved;
    diag["publication_overwrites"] = d.publication_overwrites;
    diag["affiliation_overwrites"] = d.affiliation_overwrites;
    ordered_json trailer;
    trailer["diagnostics"] = std::move(diag);
    out += trailer.dump();
    out += '\n';
    return out;
}

namespace {

Count count_field(const json& j, const char* key, std::size_t line) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number_unsigned())
        throw DataError("store line " + std::to_string(line) + ": \"" + key + "\" must be a non-negative integer");
    return it->get<Count>();
}

std::string string_field(const json& j, const char* key, std::size_t line) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string() || it->get_ref<const std::string&>().empty())
        throw DataError("store line " + std::to_string(line) + ": \"" + key + "\" must be a nonempty string");
    return it->get<std::string>();
}

int int_field(const json& j, const char* key, std::size_t line) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number_integer())
        throw DataError("store line " + std::to_string(line) + ": \"" + key + "\" must be an integer");
    return it->get<int>();
}

}  // namespace

AggregateStore AggregateStore::parse(std::string_view text) {
    struct Entry {
        EntityKey key;
        EntityTally tally;
    };
    std::vector<Entry> entries;
    std::optional<AggregateStore> store;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (store) throw DataError("store line " + std::to_string(line_no) + ": record after diagnostics trailer");

        json j = json::parse(line.begin(), line.end(), nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw DataError("store line " + std::to_string(line_no) + ": malformed record");

        if (auto d = j.find("diagnostics"); d != j.end()) {
            if (!d->is_object()) throw DataError("store line " + std::to_string(line_no) + ": bad diagnostics");
            auto kind = entity_kind_from_string(string_field(*d, "kind", line_no));
            if (!kind) throw DataError("store line " + std::to_string(line_no) + ": unknown entity kind");
            Window w{int_field(*d, "from_year", line_no), int_field(*d, "to_year", line_no)};
            store.emplace(w, *kind);
            auto& diag = store->diagnostics_;
            diag.statements_seen = count_field(*d, "statements_seen", line_no);
            diag.statements_counted = count_field(*d, "statements_counted", line_no);
            diag.statements_out_of_window = count_field(*d, "statements_out_of_window", line_no);
            diag.statements_unresolved = count_field(*d, "statements_unresolved", line_no);
            diag.references_seen = count_field(*d, "references_seen", line_no);
            diag.references_counted = count_field(*d, "references_counted", line_no);
            diag.references_duplicate = count_field(*d, "references_duplicate", line_no);
            diag.references_out_of_window = count_field(*d, "references_out_of_window", line_no);
            diag.references_unresolved = count_field(*d, "references_unresolved", line_no);
            diag.publication_overwrites = count_field(*d, "publication_overwrites", line_no);
            diag.affiliation_overwrites = count_field(*d, "affiliation_overwrites", line_no);
            if (count_field(*d, "entities", line_no) != entries.size())
                throw DataError("store line " + std::to_string(line_no) + ": entity count mismatch");
            continue;
        }

        Entry e;
        auto kind = entity_kind_from_string(string_field(j, "kind", line_no));
        if (!kind) throw DataError("store line " + std::to_string(line_no) + ": unknown entity kind");
        e.key.kind = *kind;
        e.key.id = string_field(j, "id", line_no);
        if (*kind == EntityKind::institution_field) e.key.field = string_field(j, "field", line_no);
        e.tally.supporting = count_field(j, "supporting", line_no);
        e.tally.mentioning = count_field(j, "mentioning", line_no);
        e.tally.contrasting = count_field(j, "contrasting", line_no);
        e.tally.references = count_field(j, "references", line_no);
        entries.push_back(std::move(e));
    }
    if (!store) throw DataError("store is missing its diagnostics trailer");
    for (auto& e : entries) {
        if (e.key.kind != store->kind_)
            throw DataError("store entity " + e.key.id + " has kind " + std::string(to_string(e.key.kind)) +
                            ", expected " + std::string(to_string(store->kind_)));
        if (store->tallies_.contains(e.key)) throw DataError("store has duplicate entity " + e.key.id);
        store->tallies_.emplace(std::move(e.key), e.tally);
    }
    return std::move(*store);
}

AggregateStore AggregateStore::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open store file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path);
    return parse(ss.str());
}

void AggregateStore::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write store file " + path);
    out << serialize();
    if (!out) throw IoError("write failure on " + path);
}

AggregateStore merge_stores(AggregateStore a, const AggregateStore& b) {
    a.merge(b);
    return a;
}

std::size_t shard_of(std::string_view citing_id, std::string_view cited_id, std::size_t shards) {
    if (shards <= 1) return 0;
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    };
    mix(citing_id);
    h ^= 0xff;  // separator outside the UTF-8 byte range
    h *= 0x100000001b3ULL;
    mix(cited_id);
    return static_cast<std::size_t>(h % shards);
}

std::size_t default_shards() {
    const unsigned hw = std::thread::hardware_concurrency();
    return std::clamp<std::size_t>(hw == 0 ? 1 : hw, 1, 64);
}

AggregateStore build(std::span<const StatementRecord> statements, std::span<const ReferenceEvent> references,
                     const LinkTables& tables, const Window& window, EntityKind kind, std::size_t shards) {
    window.validate();
    if (shards == 0) shards = default_shards();
    std::vector<AggregateStore> parts(shards, AggregateStore(window, kind));
    run_parallel(shards, [&](std::size_t w) {
        for (const auto& s : statements)
            if (shard_of(s.citing_id, s.cited_id, shards) == w) parts[w].accumulate_statement(s, tables);
        for (const auto& r : references)
            if (shard_of(r.citing_id, r.cited_id, shards) == w) parts[w].accumulate_reference(r, tables);
    });
    AggregateStore out = merge_all(parts, window, kind);
    out.diagnostics().publication_overwrites = tables.stats().publication_overwrites;
    out.diagnostics().affiliation_overwrites = tables.stats().affiliation_overwrites;
    return out;
}

AggregateStore build(const InputPaths& paths, const BuildOptions& options) {
    options.window.validate();
    const std::size_t shards = options.shards == 0 ? default_shards() : options.shards;
    auto emit = [&](const std::string& line) {
        if (options.diagnostics) options.diagnostics(line);
    };
    auto report = [&](const StreamReport& r) {
        if (options.mode == Mode::lenient) emit(r.summary_line());
    };

    LinkTables tables;
    report(stream<PublicationRecord>(paths.publications, options.mode,
                                     [&](PublicationRecord&& p) { tables.add(std::move(p)); }));
    report(stream<AffiliationRecord>(paths.affiliations, options.mode,
                                     [&](AffiliationRecord&& a) { tables.add(std::move(a)); }));

    std::vector<AggregateStore> parts(shards, AggregateStore(options.window, options.kind));
    report(process_stream<StatementRecord>(
        paths.statements, options.mode, parts, tables,
        [](AggregateStore& s, const StatementRecord& r, const LinkTables& t) { s.accumulate_statement(r, t); }));
    report(process_stream<ReferenceEvent>(
        paths.references, options.mode, parts, tables,
        [](AggregateStore& s, const ReferenceEvent& r, const LinkTables& t) { s.accumulate_reference(r, t); }));

    AggregateStore out = merge_all(parts, options.window, options.kind);
    out.diagnostics().publication_overwrites = tables.stats().publication_overwrites;
    out.diagnostics().affiliation_overwrites = tables.stats().affiliation_overwrites;

    if (auto over = out.statements_exceed_references(); !over.empty()) {
        ordered_json j;
        j["warning"] = "statements_exceed_references";
        j["entities"] = over.size();
        json examples = json::array();
        for (std::size_t i = 0; i < over.size() && i < 5; ++i) examples.push_back(over[i].id);
        j["examples"] = std::move(examples);
        emit(j.dump());
    }
    return out;
}

}  // namespace citerank
