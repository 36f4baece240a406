/* C API for the fracsys shared library.
 *
 * All functionality is reached through opaque handles and status codes; the
 * bundled CLI is a thin client of this header.  Strings returned by the
 * library stay owned by the handle (or by thread-local storage for
 * fracsys_last_error) and remain valid until the next call on the same
 * handle/thread.
 */
#ifndef FRACSYS_H
#define FRACSYS_H

#include <stdint.h>

#if defined(_WIN32)
#if defined(FRACSYS_BUILD)
#define FRACSYS_API __declspec(dllexport)
#else
#define FRACSYS_API __declspec(dllimport)
#endif
#else
#define FRACSYS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fracsys_status {
    FRACSYS_OK = 0,
    FRACSYS_ERROR_PARSE = 1,           /* config text/file is malformed */
    FRACSYS_ERROR_CONSTRAINT = 2,      /* parameters violate a mathematical window */
    FRACSYS_ERROR_NO_CONVERGENCE = 3,  /* a numeric stage failed to converge */
    FRACSYS_ERROR_INVALID_ARGUMENT = 4,
    FRACSYS_ERROR_IO = 5,
    FRACSYS_ERROR_INTERNAL = 6
} fracsys_status;

typedef struct fracsys_config fracsys_config;
typedef struct fracsys_result fracsys_result;

FRACSYS_API const char* fracsys_version(void);
FRACSYS_API const char* fracsys_status_name(fracsys_status status);

/* CLI exit code convention: 0 ok, 1 parse/io, 2 constraint, 3 non-convergence. */
FRACSYS_API int fracsys_exit_code(fracsys_status status);

/* Thread-local message for the most recent failure on this thread. */
FRACSYS_API const char* fracsys_last_error(void);

/* --- configuration ------------------------------------------------------ */

FRACSYS_API fracsys_status fracsys_config_parse(const char* text, fracsys_config** out);
FRACSYS_API fracsys_status fracsys_config_load(const char* path, fracsys_config** out);

/* Override or add one "section.key" entry (e.g. "run.seed", "grid.n"). */
FRACSYS_API fracsys_status fracsys_config_set(fracsys_config* cfg, const char* dotted_key,
                                              const char* value);
FRACSYS_API void fracsys_config_free(fracsys_config* cfg);

/* --- execution ------------------------------------------------------------
 * Runs the configured mode, writing report.json and the mode's data files
 * into out_dir.  A result handle is produced even when the run ends in a
 * constraint violation or non-convergence (the report records why); it is
 * NULL only for argument/parse/io failures.
 */
FRACSYS_API fracsys_status fracsys_run(const fracsys_config* cfg, const char* out_dir,
                                       fracsys_result** out);

FRACSYS_API const char* fracsys_result_report_json(const fracsys_result* result);
FRACSYS_API int fracsys_result_exit_code(const fracsys_result* result);
FRACSYS_API void fracsys_result_free(fracsys_result* result);

/* --- scalar evaluations ---------------------------------------------------
 * Closed-form pieces exposed for quick queries; all take the raw couplings
 * (mu1 > mu2 > 0) and write through `out` on FRACSYS_OK.
 */
FRACSYS_API fracsys_status fracsys_eval_g(double mu1, double mu2, double beta, double p,
                                          double tau, double* out);
FRACSYS_API fracsys_status fracsys_eval_f(double mu1, double mu2, double beta, double p,
                                          double tau, double* out);

/* First root of g in D and its amplitude k1. */
FRACSYS_API fracsys_status fracsys_solve_tau0(double s, double p, int N, double mu1, double mu2,
                                              double beta, double* tau0, double* k1);

#ifdef __cplusplus
}
#endif

#endif /* FRACSYS_H */
