/* hexflow -- hyperbolic metrics on ideally triangulated bordered surfaces
 * with prescribed geodesic boundary lengths.
 *
 * C interface of the shared library. Surfaces are opaque handles; every
 * function returns an hf_status, writes results through out-parameters, and
 * leaves a human-readable message for the calling thread in hf_last_error()
 * on failure. All arrays are indexed by boundary component (length n =
 * hf_surface_boundaries) unless noted. The library keeps no global state;
 * one handle may be shared across threads for concurrent reads.
 */
#ifndef HEXFLOW_H
#define HEXFLOW_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hf_status {
    HF_OK = 0,
    HF_ERR_USAGE = 1,           /* bad arguments: sizes, null pointers, b <= 0 */
    HF_ERR_INVALID_SURFACE = 2, /* combinatorial validation failed */
    HF_ERR_INADMISSIBLE = 3,    /* conformal factor outside the admissible set */
    HF_ERR_NO_CONVERGENCE = 4,  /* iteration/step budget exhausted or flow stiff */
    HF_ERR_CHECK_FAILED = 5,
    HF_ERR_PROBE_FAILED = 6,    /* probe ray unusable (left the domain early, ...) */
    HF_ERR_PARSE = 7,           /* document syntax or schema error */
    HF_ERR_RANGE = 8,           /* value left the representable range */
    HF_ERR_NUMERIC = 9,         /* quadrature/Cholesky breakdown */
} hf_status;

typedef struct hf_surface hf_surface;

/* Message describing the last failure on this thread; never NULL. */
const char* hf_last_error(void);

/* ---- surface lifecycle ------------------------------------------------- */

hf_status hf_surface_parse(const char* json_text, hf_surface** out);
hf_status hf_surface_load(const char* path, hf_surface** out);
void hf_surface_free(hf_surface* surface);

/* Serialized document; release with hf_string_free. NULL on failure. */
char* hf_surface_to_json(const hf_surface* surface);
void hf_string_free(char* text);

int hf_surface_boundaries(const hf_surface* surface);
int hf_surface_edges(const hf_surface* surface);
int hf_surface_faces(const hf_surface* surface);

/* HF_OK when the combinatorics validate; HF_ERR_INVALID_SURFACE otherwise.
 * When report_out is non-NULL it receives the full report text (one finding
 * per line, empty on success); release with hf_string_free. */
hf_status hf_validate(const hf_surface* surface, char** report_out);

/* Reads a target document { "b": [b_1..b_n], "w0": [..]? }. b_out must hold
 * n doubles. When the optional starting factor is present and w0_out is
 * non-NULL it is filled and *has_w0 set to 1. Nonpositive targets are a
 * usage error. */
hf_status hf_targets_load(const hf_surface* surface, const char* path, double* b_out,
                          double* w0_out, int* has_w0);

/* ---- metric operations -------------------------------------------------- */

/* Signed distance to the admissibility wall (min over edges); w admissible
 * iff positive. w == NULL means w = 0 here and in every function below. */
hf_status hf_margin(const hf_surface* surface, const double* w, double* out);

/* Edge lengths of the metric w * l0, in document edge order (|E| entries). */
hf_status hf_edge_lengths(const hf_surface* surface, const double* w, double* out);

/* Boundary length per component. */
hf_status hf_boundary_lengths(const hf_surface* surface, const double* w, double* out);

/* Jacobian of the boundary lengths wrt w, row-major n*n. */
hf_status hf_jacobian(const hf_surface* surface, const double* w, double* out);

/* Convex energy with gradient -B, anchored at `base` (phi(base) = 0). */
hf_status hf_energy_phi(const hf_surface* surface, const double* base, const double* w,
                        double* out);

/* psi(w) = phi(w) + <b, w>; strictly convex, minimized where B = b. */
hf_status hf_energy_psi(const hf_surface* surface, const double* base, const double* w,
                        const double* b, double* out);

/* C(w) = sum (B_i - b_i)^2. */
hf_status hf_defect(const hf_surface* surface, const double* w, const double* b, double* out);

/* ---- solvers ------------------------------------------------------------ */

typedef struct hf_flow_config {
    double dt0;
    double tol;
    double max_time;
    long max_steps;
    double guard_slack;
} hf_flow_config;

typedef struct hf_newton_config {
    double tol;
    int max_iters;
    double armijo_slope;
    double backtrack_ratio;
} hf_newton_config;

void hf_flow_config_default(hf_flow_config* config);
void hf_newton_config_default(hf_newton_config* config);

typedef struct hf_solve_report {
    double residual;   /* max |B_i - b_i| at exit */
    long steps;        /* accepted flow steps or Newton iterations */
    int converged;
    double lambda0;    /* fitted exponential decay rate of the defect (flow) */
    double fit_r2;
    int fit_valid;
    double total_time; /* flow time at exit */
} hf_solve_report;

/* Combinatorial Yamabe flow dw/dt = B - b, Runge-Kutta with monotonicity
 * guard. w0 == NULL starts at 0; config == NULL uses defaults. When
 * trace_csv_path is non-NULL the accepted trajectory is written there as
 * t,w_1..w_n,B_1..B_n,C,dLambda. */
hf_status hf_flow_solve(const hf_surface* surface, const double* w0, const double* b,
                        const hf_flow_config* config, const char* trace_csv_path, double* w_out,
                        double* B_out, hf_solve_report* report);

/* Damped Newton on psi with Cholesky solves and Armijo backtracking. */
hf_status hf_newton_solve(const hf_surface* surface, const double* w0, const double* b,
                          const hf_newton_config* config, double* w_out, double* B_out,
                          hf_solve_report* report);

/* ---- verification ------------------------------------------------------- */

typedef struct hf_check_report {
    double symmetry_rel;  /* worst |L_rs - L_sr| / max(1, |L_rs|) */
    double diag_max;      /* largest diagonal entry; healthy matrices < 0 */
    double dominance_min; /* smallest |L_rr| - sum off-row; healthy > 0 */
    int cholesky_ok;
    double fd_max_rel;    /* worst deviation from central finite differences */
    int passed;
} hf_check_report;

/* Runs the Jacobian battery at w with finite-difference step fd_step
 * (pass 0 for the default 1e-6). HF_OK means the battery ran; consult
 * report->passed for the verdict. */
hf_status hf_check(const hf_surface* surface, const double* w, double fd_step,
                   hf_check_report* report);

typedef enum hf_probe_mode {
    HF_PROBE_PLUS_INF = 0,
    HF_PROBE_FINITE_WALL = 1,
    HF_PROBE_MIXED = 2,
} hf_probe_mode;

typedef struct hf_probe_report {
    double extreme_B;
    double final_margin;
    int trend_ok;
    long samples;
    int edge_id; /* finite-wall: the wall approached; otherwise -1 */
    int face_id; /* mixed: the face carrying the ray; otherwise -1 */
} hf_probe_report;

/* Samples boundary lengths along a degeneration ray. boundary is 1-based;
 * edge_id selects the finite-wall target (-1 picks the smallest incident
 * id). When table_out is non-NULL it receives CSV rows t,margin,B_1..B_n;
 * release with hf_string_free. HF_OK means the probe ran; consult
 * report->trend_ok for whether the expected behavior appeared. */
hf_status hf_probe(const hf_surface* surface, hf_probe_mode mode, int boundary, int edge_id,
                   double tmax, char** table_out, hf_probe_report* report);

#ifdef __cplusplus
}
#endif

#endif /* HEXFLOW_H */
