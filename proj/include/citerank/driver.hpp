#pragma once

#include <map>
#include <string>

#include "citerank/aggregate.hpp"
#include "citerank/config.hpp"

namespace citerank {

// Subcommand bodies shared by the C API and the CLI. Documents are returned;
// one-line JSON diagnostics go to `diag`.

AggregateStore cmd_aggregate(const RunConfig& cfg, const DiagnosticSink& diag);
std::string cmd_rank(const AggregateStore& store, const RunConfig& cfg, const DiagnosticSink& diag);
std::string cmd_fields(const AggregateStore& store, const RunConfig& cfg, const DiagnosticSink& diag);
std::string cmd_correlate(const AggregateStore& store, const RunConfig& cfg, const DiagnosticSink& diag);

struct ValidateResult {
    std::string report;  // one JSON line per input file
    std::size_t defects = 0;
};
ValidateResult cmd_validate(const RunConfig& cfg);

/// Reads {"id": "...", "value": <number>} lines.
std::map<std::string, double> load_metric_file(const std::string& path);

}  // namespace citerank
