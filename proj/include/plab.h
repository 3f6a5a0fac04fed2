/* prolongation-lab C API: exact-arithmetic verification of the prolongation
 * tower over Grassmannians of integral elements in jet spaces.
 *
 * All engine functionality is reached through this interface: configure a
 * run from a JSON document, execute it, and read the report back as JSON or
 * text. Handles are opaque; every string returned as `const char*` is owned
 * by the library (or the handle it came from) and stays valid until the
 * handle is freed. Strings returned through `char**` out-parameters must be
 * released with plab_string_free().
 */

#ifndef PLAB_H
#define PLAB_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum plab_status {
    PLAB_OK = 0,
    PLAB_ERR_INVALID_ARGUMENT = 1, /* null pointer or misused handle */
    PLAB_ERR_BAD_CONFIG = 2,       /* config JSON rejected; see plab_last_error */
    PLAB_ERR_INTERNAL = 3
} plab_status;

/* A configured (and possibly executed) verification run. */
typedef struct plab_run plab_run;

/* Creates a run from a config JSON document, e.g.
 *   {"n":2,"m":1,"k":1,"l":1,"seed":42,"samples":100,"suites":["commutators"]}
 * Accepts "tuples": [[n,m,k,l],...] or "grid": {"nmax","mmax","kmax"} instead
 * of single n/m/k/l fields, and "suites": ["all"]. */
plab_status plab_run_new(const char* config_json, plab_run** out_run);

/* Executes every selected suite on every tuple. Idempotent. */
plab_status plab_run_execute(plab_run* run);

/* Total number of failed checks, or -1 if the run has not executed yet. */
long long plab_run_failure_count(const plab_run* run);

/* Report in the stable JSON form (see plab_report_schema_json) or as text.
 * NULL before execution. Owned by the run handle. */
const char* plab_run_report_json(plab_run* run);
const char* plab_run_report_text(plab_run* run);

/* Canonical form of the configuration the run was created with. */
const char* plab_run_config_json(const plab_run* run);

void plab_run_free(plab_run* run);

/* The stable report schema. */
const char* plab_report_schema_json(void);
const char* plab_report_schema_text(void);

/* Closed-form dimension table of the tower levels for one tuple; the config
 * must name a single tuple. The out string is allocated for the caller. */
plab_status plab_dims_json(const char* config_json, char** out);
plab_status plab_dims_text(const char* config_json, char** out);

void plab_string_free(char* s);

/* Thread-local message describing the most recent failure in this thread. */
const char* plab_last_error(void);

const char* plab_version(void);

#ifdef __cplusplus
}
#endif

#endif /* PLAB_H */
