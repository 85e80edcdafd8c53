#ifndef SENTINET_H
#define SENTINET_H

/*
 * C interface to the sentinet library: structural analysis of system
 * digraphs, redundant sensor-network design, distributed-estimator
 * simulation and chi-squared anomaly detection.
 *
 * All objects are opaque handles created/destroyed through this API.
 * Functions return SN_OK (0) on success or a nonzero error code; the
 * thread-local message from sn_last_error() describes the most recent
 * failure.  Strings returned through char** are heap-allocated and must be
 * released with sn_string_free().
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

enum sn_status {
    SN_OK = 0,
    SN_ERROR = 1,            /* unclassified failure                     */
    SN_PARSE_ERROR = 2,      /* malformed input file / scenario          */
    SN_INFEASIBLE = 3,       /* design infeasible (size / connectivity)  */
    SN_SYNTHESIS_FAILED = 4, /* no stabilizing gain / not observable     */
    SN_INVALID_ARGUMENT = 5, /* null pointer or domain violation         */
};

typedef struct sn_structure sn_structure;
typedef struct sn_design sn_design;
typedef struct sn_scenario sn_scenario;

const char* sn_last_error(void);
void sn_string_free(char* s);

/* ---- structures ------------------------------------------------------- */

/* Built-in fixtures; currently "fig2". */
int sn_structure_builtin(const char* name, sn_structure** out);

/* Edge-list file: one "src dst [weight]" per line, 1-indexed. */
int sn_structure_load(const char* path, sn_structure** out);
void sn_structure_free(sn_structure* s);

/* Decomposition report: SCCs with parent flags, contractions, equivalence
 * classes and structural rank. */
int sn_analyze(const sn_structure* s, char** report);

/* ---- design ----------------------------------------------------------- */

/* Q-redundant placement + network synthesis + gain synthesis.  epsilon <= 0
 * selects the default isolation factor. */
int sn_design_run(const sn_structure* s, int q, unsigned long long seed,
                  double epsilon, sn_design** out);
void sn_design_free(sn_design* d);

int sn_design_report(const sn_design* d, char** report);
int sn_design_sensor_count(const sn_design* d);
double sn_design_rho(const sn_design* d);

/* Writes placement.txt, W.txt, U.txt, alpha.txt and gain.txt. */
int sn_design_write(const sn_design* d, const char* out_dir);

/* ---- scenarios -------------------------------------------------------- */

/* Built-in scenarios; currently "section5". */
int sn_scenario_builtin(const char* name, sn_scenario** out);
int sn_scenario_load(const char* path, sn_scenario** out);
void sn_scenario_free(sn_scenario* s);

/* Runs all seeds and detector configs; writes the report bundle (traces,
 * residuals, thresholds, alarms, manifest) into out_dir. */
int sn_simulate(const sn_scenario* s, const char* out_dir);

/* FAR grid at a fixed sustained normalized squared residual; CSV columns
 * T, mu, far. */
int sn_sweep(double normalized_sq_residual, int t_min, int t_max,
             const double* mus, size_t n_mus, char** csv);

/* Re-checks a bundle directory against its manifest (on-disk bytes and
 * regenerability).  *ok is set to 1 when everything matches. */
int sn_verify(const char* bundle_dir, int* ok, char** report);

#ifdef __cplusplus
}
#endif

#endif /* SENTINET_H */
