/* rigidity-lab public C API.
 *
 * JSON-in / JSON-out entry points plus opaque handles for the heavier
 * objects. All returned strings are heap-allocated; release them with
 * rl_string_free. Functions return RL_OK on success; on failure the output
 * report (when requested) carries {"error": <code>, "detail": ...}.
 */
#ifndef RIGIDITY_LAB_H
#define RIGIDITY_LAB_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  RL_OK = 0,
  RL_E_BAD_INPUT = 1, /* malformed input (CLI exit 1) */
  RL_E_DOMAIN = 2,    /* domain error: NotHyperbolic, UNSOLVABLE, ... (CLI exit 2) */
  RL_E_INTERNAL = 3
} rl_status;

const char* rl_version(void);
void rl_string_free(char* s);

/* One-shot dispatch over the v1 config schema:
 * {"command": "hyperbolic"|"splitting"|"regularity"|"rank1"|"nonres"|
 *             "gcd-rows"|"nilpotent"|"semiconj"|"cone-cert"|"lift", ...}
 * Inputs may be inline objects or "<name>_path" file references. */
rl_status rl_run(const char* config_json, char** report_json);

/* ---- opaque handles -------------------------------------------------- */

typedef struct rl_matrix rl_matrix;
typedef struct rl_root_system rl_root_system;

rl_status rl_matrix_parse(const char* matrix_json, rl_matrix** out);
void rl_matrix_free(rl_matrix* m);
int rl_matrix_dim(const rl_matrix* m);
/* hyperbolic: set to 0/1; moduli_json (optional, may be NULL) receives the
 * sorted modulus list. Non-hyperbolic input is RL_OK here: the predicate
 * answered. */
rl_status rl_matrix_is_hyperbolic(const rl_matrix* m, double tol, int* hyperbolic,
                                  char** moduli_json);
rl_status rl_matrix_splitting(const rl_matrix* m, double tol, char** report_json);

rl_status rl_root_system_build(const char* family, int rank, rl_root_system** out);
void rl_root_system_free(rl_root_system* rs);
/* coeffs_json: array of fundamental-weight coefficients, e.g. "[1,0]". */
rl_status rl_root_system_nonres(const rl_root_system* rs, const char* coeffs_json,
                                char** report_json);
rl_status rl_root_system_to_json(const rl_root_system* rs, char** json_out);

/* Lifting-obstruction solver (presentation, rho, defects as JSON). */
rl_status rl_lift_solve(const char* presentation_json, const char* rho_json,
                        const char* defects_json, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* RIGIDITY_LAB_H */
