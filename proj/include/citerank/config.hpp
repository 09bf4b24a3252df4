#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "citerank/aggregate.hpp"
#include "citerank/ingest.hpp"
#include "citerank/rank.hpp"

namespace citerank {

/// Everything a CLI invocation can set. Keys accepted by set() are the long
/// flag names without the leading dashes, e.g. "from-year", "log-base".
struct RunConfig {
    InputPaths inputs;
    Window window;
    std::optional<EntityKind> kind;  // unset: journal for aggregate, the store's kind elsewhere
    std::optional<Metric> metric;  // unset: si, except correlate which defaults to usi
    SiConfig si_config;
    Count min_valenced = 0;
    Count min_references = 0;
    std::optional<std::size_t> top_k;
    Format format = Format::csv;
    std::string out;
    Mode mode = Mode::strict;
    std::size_t shards = 0;
    std::string external;     // id/value file for correlate
    std::string reported_si;  // id/value file for the implied-references check

    /// Throws UsageError for unknown keys or out-of-range values.
    void set(std::string_view key, std::string_view value);

    /// Flat "key = value" lines; '#' starts a comment. Throws IoError if unreadable.
    void load_file(const std::string& path);

    RankSpec rank_spec(EntityKind store_kind, Metric fallback = Metric::si) const;

    static const std::vector<std::string_view>& keys();
};

/// Parses "10", "e", or any number > 1.
double parse_log_base(std::string_view text);

}  // namespace citerank
