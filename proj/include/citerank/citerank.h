/*
 * citerank C API.
 *
 * Opaque handles own their memory; free them with the matching *_free call.
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with citerank_string_free(). Status codes double as the CLI
 * exit codes (0 ok, 1 usage/config, 2 data, 3 I/O). On any non-OK status,
 * citerank_last_error() describes the failure for the calling thread.
 */
#ifndef CITERANK_H
#define CITERANK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef CITERANK_BUILDING_LIBRARY
#    define CITERANK_API __declspec(dllexport)
#  else
#    define CITERANK_API __declspec(dllimport)
#  endif
#else
#  define CITERANK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum citerank_status {
    CITERANK_OK = 0,
    CITERANK_ERR_USAGE = 1,
    CITERANK_ERR_DATA = 2,
    CITERANK_ERR_IO = 3,
    CITERANK_ERR_DOMAIN = 4,  /* undefined math: zero USI inversion, degenerate correlation */
    CITERANK_ERR_INTERNAL = 5
} citerank_status;

typedef struct citerank_config citerank_config;
typedef struct citerank_store citerank_store;

/* Receives one-line JSON diagnostic records (no trailing newline). */
typedef void (*citerank_diag_fn)(const char* record, void* user);

CITERANK_API const char* citerank_version(void);
CITERANK_API const char* citerank_last_error(void);
CITERANK_API void citerank_string_free(char* s);

/* ---- run configuration ------------------------------------------------ */

CITERANK_API citerank_status citerank_config_new(citerank_config** out);
CITERANK_API void citerank_config_free(citerank_config* cfg);
/* key is a long flag name without dashes, e.g. "from-year". */
CITERANK_API citerank_status citerank_config_set(citerank_config* cfg, const char* key, const char* value);
/* Flat "key = value" file. Later citerank_config_set calls override it. */
CITERANK_API citerank_status citerank_config_load_file(citerank_config* cfg, const char* path);
CITERANK_API void citerank_config_set_diagnostics(citerank_config* cfg, citerank_diag_fn fn, void* user);
/* Current output path ("" when unset); the returned pointer lives as long as cfg. */
CITERANK_API const char* citerank_config_out_path(const citerank_config* cfg);

/* ---- aggregate store ---------------------------------------------------- */

CITERANK_API citerank_status citerank_aggregate(const citerank_config* cfg, citerank_store** out);
CITERANK_API citerank_status citerank_store_load(const char* path, citerank_store** out);
CITERANK_API citerank_status citerank_store_parse(const char* text, size_t len, citerank_store** out);
CITERANK_API citerank_status citerank_store_serialize(const citerank_store* store, char** out);
/* into += other; both must share window and entity kind. */
CITERANK_API citerank_status citerank_store_merge(citerank_store* into, const citerank_store* other);
CITERANK_API size_t citerank_store_entity_count(const citerank_store* store);
CITERANK_API void citerank_store_free(citerank_store* store);

/* ---- subcommands -------------------------------------------------------- */

CITERANK_API citerank_status citerank_rank(const citerank_store* store, const citerank_config* cfg, char** document);
CITERANK_API citerank_status citerank_fields(const citerank_store* store, const citerank_config* cfg, char** document);
CITERANK_API citerank_status citerank_correlate(const citerank_store* store, const citerank_config* cfg,
                                                char** report);
/* Sets *report even when returning CITERANK_ERR_DATA for files with defects. */
CITERANK_API citerank_status citerank_validate(const citerank_config* cfg, char** report);

/* ---- metrics ------------------------------------------------------------ */

/* *defined is 0 when supporting + contrasting == 0. */
CITERANK_API citerank_status citerank_usi(uint64_t supporting, uint64_t contrasting, double* out, int* defined);
/* *defined is 0 when references == 0 or usi == 0. */
CITERANK_API citerank_status citerank_si(uint64_t references, double usi, double exponent, double log_base,
                                         double* out, int* defined);
CITERANK_API citerank_status citerank_implied_references(double si, double usi, double exponent, double log_base,
                                                         double* out);
CITERANK_API citerank_status citerank_hs_index(const uint64_t* counts, size_t n, uint64_t* out);
CITERANK_API citerank_status citerank_pearson(const double* xs, const double* ys, size_t n, double* out);

#ifdef __cplusplus
}
#endif

#endif /* CITERANK_H */
