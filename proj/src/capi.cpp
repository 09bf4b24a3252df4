#include "citerank/citerank.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "citerank/config.hpp"
#include "citerank/driver.hpp"
#include "citerank/error.hpp"
#include "citerank/metrics.hpp"

struct citerank_config {
    citerank::RunConfig run;
    citerank_diag_fn diag_fn = nullptr;
    void* diag_user = nullptr;

    citerank::DiagnosticSink sink() const {
        if (!diag_fn) return {};
        return [fn = diag_fn, user = diag_user](std::string_view record) {
            const std::string s(record);
            fn(s.c_str(), user);
        };
    }
};

struct citerank_store {
    citerank::AggregateStore store;
};

namespace {

thread_local std::string g_last_error;

citerank_status set_error(citerank_status status, const char* what) {
    g_last_error = what ? what : "";
    return status;
}

// Runs fn, mapping exceptions to status codes.
template <class Fn>
citerank_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const citerank::Error& e) {
        return set_error(static_cast<citerank_status>(static_cast<int>(e.kind())), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(CITERANK_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(CITERANK_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(CITERANK_ERR_INTERNAL, "unknown error");
    }
}

char* to_c_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size());
    out[s.size()] = '\0';
    return out;
}

citerank_status null_arg(const char* name) {
    return set_error(CITERANK_ERR_USAGE, (std::string("null argument: ") + name).c_str());
}

}  // namespace

extern "C" {

const char* citerank_version(void) { return "0.1.0"; }

const char* citerank_last_error(void) { return g_last_error.c_str(); }

void citerank_string_free(char* s) { std::free(s); }

citerank_status citerank_config_new(citerank_config** out) {
    if (!out) return null_arg("out");
    return guarded([&] {
        *out = new citerank_config();
        return CITERANK_OK;
    });
}

void citerank_config_free(citerank_config* cfg) { delete cfg; }

citerank_status citerank_config_set(citerank_config* cfg, const char* key, const char* value) {
    if (!cfg) return null_arg("cfg");
    if (!key) return null_arg("key");
    if (!value) return null_arg("value");
    return guarded([&] {
        cfg->run.set(key, value);
        return CITERANK_OK;
    });
}

citerank_status citerank_config_load_file(citerank_config* cfg, const char* path) {
    if (!cfg) return null_arg("cfg");
    if (!path) return null_arg("path");
    return guarded([&] {
        cfg->run.load_file(path);
        return CITERANK_OK;
    });
}

void citerank_config_set_diagnostics(citerank_config* cfg, citerank_diag_fn fn, void* user) {
    if (!cfg) return;
    cfg->diag_fn = fn;
    cfg->diag_user = user;
}

const char* citerank_config_out_path(const citerank_config* cfg) { return cfg ? cfg->run.out.c_str() : ""; }

citerank_status citerank_aggregate(const citerank_config* cfg, citerank_store** out) {
    if (!cfg) return null_arg("cfg");
    if (!out) return null_arg("out");
    return guarded([&] {
        auto store = citerank::cmd_aggregate(cfg->run, cfg->sink());
        *out = new citerank_store{std::move(store)};
        return CITERANK_OK;
    });
}

citerank_status citerank_store_load(const char* path, citerank_store** out) {
    if (!path) return null_arg("path");
    if (!out) return null_arg("out");
    return guarded([&] {
        *out = new citerank_store{citerank::AggregateStore::load(path)};
        return CITERANK_OK;
    });
}

citerank_status citerank_store_parse(const char* text, size_t len, citerank_store** out) {
    if (!text && len) return null_arg("text");
    if (!out) return null_arg("out");
    return guarded([&] {
        *out = new citerank_store{citerank::AggregateStore::parse(std::string_view(text ? text : "", len))};
        return CITERANK_OK;
    });
}

citerank_status citerank_store_serialize(const citerank_store* store, char** out) {
    if (!store) return null_arg("store");
    if (!out) return null_arg("out");
    return guarded([&] {
        *out = to_c_string(store->store.serialize());
        return CITERANK_OK;
    });
}

citerank_status citerank_store_merge(citerank_store* into, const citerank_store* other) {
    if (!into) return null_arg("into");
    if (!other) return null_arg("other");
    return guarded([&] {
        into->store.merge(other->store);
        return CITERANK_OK;
    });
}

size_t citerank_store_entity_count(const citerank_store* store) { return store ? store->store.tallies().size() : 0; }

void citerank_store_free(citerank_store* store) { delete store; }

citerank_status citerank_rank(const citerank_store* store, const citerank_config* cfg, char** document) {
    if (!store) return null_arg("store");
    if (!cfg) return null_arg("cfg");
    if (!document) return null_arg("document");
    return guarded([&] {
        *document = to_c_string(citerank::cmd_rank(store->store, cfg->run, cfg->sink()));
        return CITERANK_OK;
    });
}

citerank_status citerank_fields(const citerank_store* store, const citerank_config* cfg, char** document) {
    if (!store) return null_arg("store");
    if (!cfg) return null_arg("cfg");
    if (!document) return null_arg("document");
    return guarded([&] {
        *document = to_c_string(citerank::cmd_fields(store->store, cfg->run, cfg->sink()));
        return CITERANK_OK;
    });
}

citerank_status citerank_correlate(const citerank_store* store, const citerank_config* cfg, char** report) {
    if (!store) return null_arg("store");
    if (!cfg) return null_arg("cfg");
    if (!report) return null_arg("report");
    return guarded([&] {
        *report = to_c_string(citerank::cmd_correlate(store->store, cfg->run, cfg->sink()));
        return CITERANK_OK;
    });
}

citerank_status citerank_validate(const citerank_config* cfg, char** report) {
    if (!cfg) return null_arg("cfg");
    if (!report) return null_arg("report");
    return guarded([&] {
        const auto result = citerank::cmd_validate(cfg->run);
        *report = to_c_string(result.report);
        if (result.defects > 0)
            return set_error(CITERANK_ERR_DATA,
                             (std::to_string(result.defects) + " defective line(s) found").c_str());
        return CITERANK_OK;
    });
}

citerank_status citerank_usi(uint64_t supporting, uint64_t contrasting, double* out, int* defined) {
    if (!out) return null_arg("out");
    if (!defined) return null_arg("defined");
    const auto u = citerank::usi(supporting, contrasting);
    *defined = u.has_value();
    *out = u ? u->value : 0.0;
    return CITERANK_OK;
}

citerank_status citerank_si(uint64_t references, double usi, double exponent, double log_base, double* out,
                            int* defined) {
    if (!out) return null_arg("out");
    if (!defined) return null_arg("defined");
    return guarded([&] {
        if (!(usi >= 0.0 && usi <= 1.0)) throw citerank::UsageError("usi must lie in [0, 1]");
        const citerank::SiConfig cfg{exponent, log_base};
        cfg.validate();
        const auto s = citerank::si(references, citerank::Usi{usi}, cfg);
        *defined = s.has_value();
        *out = s ? s->value : 0.0;
        return CITERANK_OK;
    });
}

citerank_status citerank_implied_references(double si, double usi, double exponent, double log_base, double* out) {
    if (!out) return null_arg("out");
    return guarded([&] {
        const citerank::SiConfig cfg{exponent, log_base};
        cfg.validate();
        *out = citerank::implied_references(citerank::Si{si}, citerank::Usi{usi}, cfg);
        return CITERANK_OK;
    });
}

citerank_status citerank_hs_index(const uint64_t* counts, size_t n, uint64_t* out) {
    if (!counts && n) return null_arg("counts");
    if (!out) return null_arg("out");
    return guarded([&] {
        *out = citerank::hs_index(std::span<const citerank::Count>(counts, n));
        return CITERANK_OK;
    });
}

citerank_status citerank_pearson(const double* xs, const double* ys, size_t n, double* out) {
    if ((!xs || !ys) && n) return null_arg("xs/ys");
    if (!out) return null_arg("out");
    return guarded([&] {
        std::vector<std::pair<double, double>> pairs;
        pairs.reserve(n);
        for (size_t i = 0; i < n; ++i) pairs.emplace_back(xs[i], ys[i]);
        *out = citerank::pearson(pairs);
        return CITERANK_OK;
    });
}

}  // extern "C"
