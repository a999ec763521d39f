/*
 * slring — spectra, bifurcations, rotating waves and Floquet stability of a
 * unidirectionally coupled Stuart-Landau ring with one shortcut link.
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed by the library; every fallible call returns slr_status and
 * leaves a human-readable message in slr_last_error() on failure.
 */
#ifndef SLRING_H
#define SLRING_H

#include <stddef.h>

#if defined(_WIN32)
#define SLRING_API __declspec(dllexport)
#elif defined(__GNUC__)
#define SLRING_API __attribute__((visibility("default")))
#else
#define SLRING_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum slr_status {
  SLR_OK = 0,
  SLR_ERR_INVALID_ARGUMENT = 1, /* precondition or parameter violation */
  SLR_ERR_NUMERICAL = 2,        /* iteration failure, stale data, blow-up */
  SLR_ERR_OUT_OF_REGIME = 3,    /* asymptotic formula outside its regime */
  SLR_ERR_INTERNAL = 4
} slr_status;

typedef enum slr_root_class {
  SLR_ROOT_UNIT_CIRCLE = 0,
  SLR_ROOT_INNER_CIRCLE = 1,
  SLR_ROOT_OUTER_CIRCLE = 2,
  SLR_ROOT_LEADING_REAL = 3
} slr_root_class;

typedef enum slr_resonance_kind {
  SLR_RESONANT = 0,
  SLR_ANTIPHASE = 1,
  SLR_GENERIC = 2
} slr_resonance_kind;

typedef enum slr_threshold_status {
  SLR_THRESHOLD_STABILIZES = 0,
  SLR_THRESHOLD_STABLE_FROM_ONSET = 1,
  SLR_THRESHOLD_NEVER_STABILIZES = 2,
  SLR_THRESHOLD_FAILED = 3
} slr_threshold_status;

typedef enum slr_floquet_method {
  SLR_FLOQUET_EXACT = 0,
  SLR_FLOQUET_APPROX_SMALL_S = 1
} slr_floquet_method;

typedef struct slr_ring slr_ring;
typedef struct slr_spectrum slr_spectrum;
typedef struct slr_branches slr_branches;
typedef struct slr_eckhaus slr_eckhaus;
typedef struct slr_scan slr_scan;
typedef struct slr_orbit slr_orbit;
typedef struct slr_trace slr_trace;
typedef struct slr_studies slr_studies;

SLRING_API const char* slr_status_name(slr_status status);
/* Thread-local message of the most recent failure. */
SLRING_API const char* slr_last_error(void);

/* ---- problem instance ------------------------------------------------- */

SLRING_API slr_status slr_ring_create(int n_osc, int shortcut_from, double shortcut_strength,
                                      double alpha, double beta, slr_ring** out);
SLRING_API void slr_ring_destroy(slr_ring* ring);
SLRING_API int slr_ring_size(const slr_ring* ring);

/* Stability of the zero state: margin = -alpha - max Re(spectrum). */
SLRING_API slr_status slr_zero_stability(const slr_ring* ring, int* stable, double* margin);
SLRING_API slr_status slr_leading_real_eigenvalue(const slr_ring* ring, double* value);

/* ---- coupling-matrix spectrum ------------------------------------------ */

SLRING_API slr_status slr_spectrum_compute(const slr_ring* ring, double tol, slr_spectrum** out);
SLRING_API int slr_spectrum_count(const slr_spectrum* spectrum);
SLRING_API slr_status slr_spectrum_root(const slr_spectrum* spectrum, int index, int* mode_k, double* re,
                                        double* im, double* residual, slr_root_class* cls);
SLRING_API void slr_spectrum_destroy(slr_spectrum* spectrum);

/* ---- Hopf branch table -------------------------------------------------- */

SLRING_API slr_status slr_branches_compute(const slr_ring* ring, slr_branches** out);
SLRING_API int slr_branches_count(const slr_branches* branches);
SLRING_API slr_status slr_branches_row(const slr_branches* branches, int index, int* k, double* alpha_crit,
                                       double* omega_onset, double* lyapunov_l1, slr_resonance_kind* kind,
                                       double* phase_mismatch);
SLRING_API void slr_branches_destroy(slr_branches* branches);

/* ---- stabilization thresholds (modulated Eckhaus line) ------------------ */

SLRING_API slr_status slr_eckhaus_compute(const slr_ring* ring, slr_floquet_method method, double alpha_max,
                                          slr_eckhaus** out);
SLRING_API int slr_eckhaus_count(const slr_eckhaus* table);
SLRING_API slr_status slr_eckhaus_row(const slr_eckhaus* table, int index, int* k,
                                      slr_threshold_status* status, double* alpha_crit,
                                      double* omega_onset, double* alpha_star, double* omega_star,
                                      double* amplitude_at_star);
SLRING_API void slr_eckhaus_destroy(slr_eckhaus* table);

/* ---- sampled per-branch stability scan (bifurcation-diagram data) ------- */

SLRING_API slr_status slr_scan_compute(const slr_ring* ring, int samples_per_branch, double span_factor,
                                       slr_scan** out);
SLRING_API int slr_scan_count(const slr_scan* scan);
SLRING_API slr_status slr_scan_row(const slr_scan* scan, int index, int* k, slr_root_class* cls,
                                   double* alpha, double* omega, double* amplitude_sq, int* exists,
                                   int* stable);
SLRING_API void slr_scan_destroy(slr_scan* scan);

/* ---- rotating-wave orbits ------------------------------------------------ */

/* Solve the branch-k wave at the ring's alpha by continuation from onset. */
SLRING_API slr_status slr_orbit_solve_branch(const slr_ring* ring, int branch_k, slr_orbit** out);
SLRING_API slr_status slr_orbit_frequency(const slr_orbit* orbit, double* omega);
SLRING_API slr_status slr_orbit_residual(const slr_orbit* orbit, double* residual);
/* Fills n_osc entries each; cap is the capacity of both arrays. */
SLRING_API slr_status slr_orbit_profile(const slr_orbit* orbit, double* re, double* im, size_t cap);
SLRING_API slr_status slr_orbit_stability(const slr_ring* ring, const slr_orbit* orbit, int* stable,
                                          double* max_nontrivial_re);
SLRING_API void slr_orbit_destroy(slr_orbit* orbit);

/* ---- direct numerical integration ---------------------------------------- */

typedef struct slr_sim_options {
  double rtol;   /* default 1e-9  */
  double atol;   /* default 1e-12 */
  int stride;    /* record every stride-th accepted step, default 1 */
  double noise;  /* relative perturbation of branch seeds, default 0 */
  unsigned long long seed; /* PRNG seed for the noise, default 1 */
} slr_sim_options;
SLRING_API void slr_sim_options_default(slr_sim_options* opts);

/* z0 is interleaved re/im of length 2*n_osc. */
SLRING_API slr_status slr_simulate(const slr_ring* ring, const double* z0, double t_final,
                                   const slr_sim_options* opts, slr_trace** out);
/* Start on the branch-k wave at distance eps above its onset (plus optional
 * relative noise); the ring's own alpha is ignored in favor of onset+eps. */
SLRING_API slr_status slr_simulate_branch_seed(const slr_ring* ring, int branch_k, double eps,
                                               double t_final, const slr_sim_options* opts,
                                               slr_trace** out);

SLRING_API int slr_trace_count(const slr_trace* trace);
SLRING_API int slr_trace_width(const slr_trace* trace); /* number of nodes */
SLRING_API slr_status slr_trace_row(const slr_trace* trace, int index, double* t, double* z_interleaved,
                                    size_t cap);
/* Writes the whole trace as CSV (header t,re_z1,im_z1,...) to a file. */
SLRING_API slr_status slr_trace_write_csv(const slr_trace* trace, const char* path);
SLRING_API slr_status slr_trace_measure(const slr_trace* trace, double transient, double* frequency,
                                        double* amplitudes, size_t cap, int* converged);
SLRING_API void slr_trace_destroy(slr_trace* trace);

/* Default transient for measurements: 200/|margin| capped at 1e5. */
SLRING_API slr_status slr_default_transient(const slr_ring* ring, double* transient);

/* ---- asymptotics-versus-oracle studies ----------------------------------- */

SLRING_API slr_status slr_studies_run(const char* name_or_all, slr_studies** out);
SLRING_API int slr_studies_count(const slr_studies* studies);
SLRING_API slr_status slr_studies_row(const slr_studies* studies, int index, const char** name,
                                      double* value, double* threshold, int* pass);
SLRING_API void slr_studies_destroy(slr_studies* studies);

#ifdef __cplusplus
}
#endif

#endif /* SLRING_H */
