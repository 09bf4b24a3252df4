#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "citerank/ingest.hpp"
#include "citerank/linking.hpp"
#include "citerank/metrics.hpp"

namespace citerank {

/// Inclusive citing-year range. Cited works may be of any age.
struct Window {
    int from_year = 2024;
    int to_year = 2024;

    bool contains(int citing_year) const { return citing_year >= from_year && citing_year <= to_year; }
    void validate() const;

    friend bool operator==(const Window&, const Window&) = default;
};

/// Per-stream input accounting. For each stream,
///   seen == counted + out_of_window + unresolved (+ duplicate for references).
struct AggregateDiagnostics {
    Count statements_seen = 0;
    Count statements_counted = 0;
    Count statements_out_of_window = 0;
    Count statements_unresolved = 0;
    Count references_seen = 0;
    Count references_counted = 0;
    Count references_duplicate = 0;
    Count references_out_of_window = 0;
    Count references_unresolved = 0;
    Count publication_overwrites = 0;
    Count affiliation_overwrites = 0;

    AggregateDiagnostics& operator+=(const AggregateDiagnostics& o);
    friend bool operator==(const AggregateDiagnostics&, const AggregateDiagnostics&) = default;
};

/// Per-entity tallies for one (window, kind) configuration.
///
/// Reference events are deduplicated on (citing_id, cited_id) within a store.
/// Stores that will be merged must therefore hold disjoint reference-pair
/// shards; use shard_of() to partition.
class AggregateStore {
public:
    AggregateStore() = default;
    AggregateStore(Window window, EntityKind kind);

    const Window& window() const noexcept { return window_; }
    EntityKind kind() const noexcept { return kind_; }

    void accumulate_statement(const StatementRecord& rec, const LinkTables& tables);
    void accumulate_reference(const ReferenceEvent& ev, const LinkTables& tables);

    /// Field-wise sum. Throws UsageError when window or kind differ, or when both
    /// stores have credited the same reference pair.
    void merge(const AggregateStore& other);

    /// Adds a tally directly, bypassing the record streams (fixtures, tooling).
    void add_tally(const EntityKey& key, const EntityTally& tally);

    const std::map<EntityKey, EntityTally>& tallies() const noexcept { return tallies_; }
    const AggregateDiagnostics& diagnostics() const noexcept { return diagnostics_; }
    AggregateDiagnostics& diagnostics() noexcept { return diagnostics_; }

    /// Entities whose statement total exceeds their references counter.
    std::vector<EntityKey> statements_exceed_references() const;

    /// Newline-delimited: one record per entity in key order, then one
    /// {"diagnostics":{...}} record. Bit-exact under parse/serialize.
    std::string serialize() const;
    static AggregateStore parse(std::string_view text);
    static AggregateStore load(const std::string& path);
    void save(const std::string& path) const;

    /// Compares configuration, tallies and diagnostics (not the dedup state).
    friend bool operator==(const AggregateStore& a, const AggregateStore& b) {
        return a.window_ == b.window_ && a.kind_ == b.kind_ && a.tallies_ == b.tallies_ &&
               a.diagnostics_ == b.diagnostics_;
    }

private:
    Window window_;
    EntityKind kind_ = EntityKind::journal;
    std::map<EntityKey, EntityTally> tallies_;
    AggregateDiagnostics diagnostics_;
    std::unordered_set<std::string> seen_pairs_;
};

AggregateStore merge_stores(AggregateStore a, const AggregateStore& b);

/// Stable 64-bit FNV-1a over (citing_id, cited_id); shard = hash % shards.
std::size_t shard_of(std::string_view citing_id, std::string_view cited_id, std::size_t shards);

/// Worker count used when a shard count of 0 is requested.
std::size_t default_shards();

using DiagnosticSink = std::function<void(std::string_view record)>;

struct InputPaths {
    std::string statements;
    std::string references;
    std::string publications;
    std::string affiliations;
};

struct BuildOptions {
    Window window;
    EntityKind kind = EntityKind::journal;
    std::size_t shards = 0;  // 0 = default_shards()
    Mode mode = Mode::strict;
    DiagnosticSink diagnostics;  // optional; receives one-line JSON records
};

/// In-memory build. Output is independent of input order and shard count.
AggregateStore build(std::span<const StatementRecord> statements, std::span<const ReferenceEvent> references,
                     const LinkTables& tables, const Window& window, EntityKind kind, std::size_t shards = 1);

/// Streaming build from the four newline-delimited input files.
AggregateStore build(const InputPaths& paths, const BuildOptions& options);

}  // namespace citerank
