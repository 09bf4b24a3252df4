// citerank: command-line driver over the citerank C API.
//
//   citerank aggregate --statements S --references R --pubs P --affiliations A [--entity K] [--out store]
//   citerank rank STORE [--by si|usi] [--top N] [--format csv|json|md]
//   citerank fields STORE
//   citerank correlate STORE --external metric.ndjson
//   citerank validate [--statements S] [--references R] [--pubs P] [--affiliations A]
//
// Exit codes: 0 ok, 1 usage/config, 2 data, 3 I/O.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "citerank/citerank.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 3;

struct ConfigDeleter {
    void operator()(citerank_config* c) const { citerank_config_free(c); }
};
struct StoreDeleter {
    void operator()(citerank_store* s) const { citerank_store_free(s); }
};
struct StringDeleter {
    void operator()(char* s) const { citerank_string_free(s); }
};
using ConfigPtr = std::unique_ptr<citerank_config, ConfigDeleter>;
using StorePtr = std::unique_ptr<citerank_store, StoreDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int fail(citerank_status status) {
    std::cerr << "citerank: " << citerank_last_error() << '\n';
    return static_cast<int>(status == CITERANK_ERR_DOMAIN ? CITERANK_ERR_DATA
                            : status == CITERANK_ERR_INTERNAL ? CITERANK_ERR_DATA
                                                               : status);
}

void print_diagnostic(const char* record, void*) { std::cerr << record << '\n'; }

// Flag values are captured as strings and handed to the library verbatim, so
// the config file and the command line share one parser.
struct FlagSet {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;

    void add(CLI::App* app, const std::string& name, const std::string& help) {
        options[name] = app->add_option("--" + name, values[name], help);
    }
};

int write_document(const std::string& out_path, const char* doc) {
    if (out_path.empty()) {
        std::fputs(doc, stdout);
        if (std::fflush(stdout) != 0) {
            std::cerr << "citerank: failed writing to standard output\n";
            return kExitIo;
        }
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        std::cerr << "citerank: cannot write " << out_path << '\n';
        return kExitIo;
    }
    out << doc;
    if (!out) {
        std::cerr << "citerank: failed writing " << out_path << '\n';
        return kExitIo;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Content-aware citation rankings: USI / SI tallies, ranked tables, field breakdowns."};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "Flat key = value config file (fallback: $CITERANK_CONFIG)");

    const std::vector<std::pair<std::string, std::string>> input_flags = {
        {"statements", "Classified citation statements (NDJSON)"},
        {"references", "Reference events (NDJSON)"},
        {"pubs", "Publication metadata (NDJSON)"},
        {"affiliations", "Publication -> institution affiliations (NDJSON)"},
    };
    const std::vector<std::pair<std::string, std::string>> rank_flags = {
        {"entity", "journal | institution | field | institution-field"},
        {"by", "Ranking metric: si | usi"},
        {"exponent", "USI exponent in SI (default 2)"},
        {"log-base", "SI logarithm base: 10 | e | <number> (default 10)"},
        {"min-valenced", "Exclude entities with supporting + contrasting below this"},
        {"min-references", "Exclude entities with fewer references"},
        {"top", "Keep the first N rows"},
        {"format", "csv | json | md"},
        {"out", "Write the document here instead of standard output"},
    };

    struct Sub {
        CLI::App* app;
        FlagSet flags;
        std::string store_path;
    };
    std::map<std::string, Sub> subs;

    auto make = [&](const std::string& name, const std::string& help) -> Sub& {
        Sub& s = subs[name];
        s.app = app.add_subcommand(name, help);
        return s;
    };

    {
        Sub& s = make("aggregate", "Tally statements and reference events per entity; writes a store file");
        for (const auto& [f, h] : input_flags) s.flags.add(s.app, f, h);
        s.flags.add(s.app, "from-year", "First citing year in the window (default 2024)");
        s.flags.add(s.app, "to-year", "Last citing year in the window (default 2024)");
        s.flags.add(s.app, "entity", "journal | institution | field | institution-field");
        s.flags.add(s.app, "mode", "strict | lenient");
        s.flags.add(s.app, "shards", "Worker shards (default: hardware threads)");
        s.flags.add(s.app, "exponent", "USI exponent in SI (default 2)");
        s.flags.add(s.app, "log-base", "SI logarithm base");
        s.flags.add(s.app, "out", "Store file path (default: standard output)");
    }
    {
        Sub& s = make("rank", "Rank a store by SI or USI");
        s.app->add_option("store", s.store_path, "Store file from `aggregate`")->required();
        for (const auto& [f, h] : rank_flags) s.flags.add(s.app, f, h);
        s.flags.add(s.app, "reported-si", "id/value file of reported SI values to check by inversion");
    }
    {
        Sub& s = make("fields", "Per-(institution, field) SI breakdown");
        s.app->add_option("store", s.store_path, "Store aggregated with --entity institution-field")->required();
        s.flags.add(s.app, "exponent", "USI exponent in SI (default 2)");
        s.flags.add(s.app, "log-base", "SI logarithm base");
        s.flags.add(s.app, "format", "csv | json | md");
        s.flags.add(s.app, "out", "Write the document here instead of standard output");
    }
    {
        Sub& s = make("correlate", "Pearson r between a ranking metric and an external metric");
        s.app->add_option("store", s.store_path, "Store file from `aggregate`")->required();
        for (const auto& [f, h] : rank_flags) s.flags.add(s.app, f, h);
        s.flags.add(s.app, "external", "id/value NDJSON file of the external metric");
    }
    {
        Sub& s = make("validate", "Check input files against their schemas");
        for (const auto& [f, h] : input_flags) s.flags.add(s.app, f, h);
        s.flags.add(s.app, "out", "Write the report here instead of standard output");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    std::string name;
    Sub* sub = nullptr;
    for (auto& [n, s] : subs)
        if (s.app->parsed()) {
            name = n;
            sub = &s;
        }
    if (!sub) return kExitUsage;

    citerank_config* raw_cfg = nullptr;
    if (auto st = citerank_config_new(&raw_cfg); st != CITERANK_OK) return fail(st);
    ConfigPtr cfg(raw_cfg);
    citerank_config_set_diagnostics(cfg.get(), print_diagnostic, nullptr);

    // Precedence: flags > config file > defaults.
    if (config_path.empty())
        if (const char* env = std::getenv("CITERANK_CONFIG"); env && *env) config_path = env;
    if (!config_path.empty())
        if (auto st = citerank_config_load_file(cfg.get(), config_path.c_str()); st != CITERANK_OK) return fail(st);
    for (const auto& [flag, opt] : sub->flags.options) {
        if (opt->count() == 0) continue;
        const std::string& value = sub->flags.values.at(flag);
        if (auto st = citerank_config_set(cfg.get(), flag.c_str(), value.c_str()); st != CITERANK_OK)
            return fail(st);
    }
    const std::string out_path = citerank_config_out_path(cfg.get());

    if (name == "aggregate") {
        citerank_store* raw = nullptr;
        if (auto st = citerank_aggregate(cfg.get(), &raw); st != CITERANK_OK) return fail(st);
        StorePtr store(raw);
        char* text = nullptr;
        if (auto st = citerank_store_serialize(store.get(), &text); st != CITERANK_OK) return fail(st);
        StringPtr doc(text);
        return write_document(out_path, doc.get());
    }

    if (name == "validate") {
        char* text = nullptr;
        const auto st = citerank_validate(cfg.get(), &text);
        StringPtr doc(text);
        if (doc) {
            if (int rc = write_document(out_path, doc.get()); rc != 0) return rc;
        }
        return st == CITERANK_OK ? 0 : fail(st);
    }

    citerank_store* raw = nullptr;
    if (auto st = citerank_store_load(sub->store_path.c_str(), &raw); st != CITERANK_OK) return fail(st);
    StorePtr store(raw);

    char* text = nullptr;
    citerank_status st = CITERANK_OK;
    if (name == "rank")
        st = citerank_rank(store.get(), cfg.get(), &text);
    else if (name == "fields")
        st = citerank_fields(store.get(), cfg.get(), &text);
    else
        st = citerank_correlate(store.get(), cfg.get(), &text);
    StringPtr doc(text);
    if (st != CITERANK_OK) return fail(st);
    return write_document(out_path, doc.get());
}
