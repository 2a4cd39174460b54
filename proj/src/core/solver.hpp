#pragma once

#include <string>
#include <vector>

#include "core/surface.hpp"

namespace hexflow {

struct FlowConfig {
    double dt0 = 0.1;          // initial step
    double tol = 1e-10;        // stop when max|B_i - b_i| <= tol
    double max_time = 1e6;
    long max_steps = 200000;
    double guard_slack = 1e-9;  // permitted Lyapunov increase per accepted step
};

struct NewtonConfig {
    double tol = 1e-10;
    int max_iters = 50;
    double armijo_slope = 1e-4;
    double backtrack_ratio = 0.5;
};

struct FlowRecord {
    double t;
    ConformalFactor w;
    BoundaryLengths B;
    double defect;    // C(w)
    double dlambda;   // Lyapunov value relative to the start state
    double dt;        // step that produced this record (0 for the start row)
    bool accepted;
};

struct FlowTrace {
    std::vector<FlowRecord> records;
};

struct SolveReport {
    ConformalFactor w;
    BoundaryLengths B;
    double residual = 0.0;  // max|B_i - b_i| at exit
    long steps = 0;         // accepted steps (flow) or iterations (newton)
    bool converged = false;
    // Exponential decay rate fitted to the tail of log C(t): slope = -2*lambda0.
    double lambda0 = 0.0;
    double fit_r2 = 0.0;
    bool fit_valid = false;
    double total_time = 0.0;                // flow time at exit
    std::vector<double> residual_history;   // newton: residual per iteration
};

// Integrates dw/dt = B - b with classical 4-stage Runge-Kutta. A step is
// accepted only when the end state is strictly admissible and the Lyapunov
// value psi(w) + C(w) (up to its constant) does not rise beyond guard_slack;
// rejected steps halve dt, five accepted steps in a row double it up to
// 8*dt0. Throws ConvergenceError when the budget runs out (the trace, if
// requested, holds everything integrated so far) and StiffnessError when dt
// falls below 1e-12.
SolveReport flow_solve(const Surface& surface, const ConformalFactor& w0,
                       const BoundaryLengths& targets, const FlowConfig& config = {},
                       FlowTrace* trace = nullptr);

// Damped Newton on psi: solve (-L) d = B - b, backtrack first into the
// admissible set and then until the Armijo bound on psi holds.
SolveReport newton_solve(const Surface& surface, const ConformalFactor& w0,
                         const BoundaryLengths& targets, const NewtonConfig& config = {});

enum class ProbeMode { PlusInf, FiniteWall, Mixed };

struct ProbeSample {
    double t;
    double margin;
    BoundaryLengths B;
};

struct ProbeReport {
    ProbeMode mode;
    int boundary;      // 1-based component the probe tracks
    int edge_id = -1;  // finite-wall: the wall being approached
    int face_id = -1;  // mixed: the face carrying the ray
    std::vector<ProbeSample> samples;
    double extreme_B = 0.0;   // final tracked value (plus-inf) or max incident value
    double final_margin = 0.0;
    bool trend_ok = false;
    std::string detail;
};

// Samples boundary lengths along degeneration rays.
//   PlusInf:    w = t e_i, t in [0, tmax]; expects B_i to fall below 1e-2.
//   FiniteWall: walks from 0 toward the nearest wall in the -e_a - e_b
//               direction of the target edge (smallest incident edge id
//               unless edge_id names one); expects an incident B above 1e3
//               while the margin is still above 1e-6.
//   Mixed:      on the first face at the boundary, w_i = -t and +t on the
//               other two corners; expects B_i above 1e3.
ProbeReport probe_limits(const Surface& surface, ProbeMode mode, int boundary, double tmax,
                         int num_samples = 33, int edge_id = -1);

// Max relative deviation between the assembled Jacobian and its central
// finite-difference counterpart, over entries of magnitude at least 1e-8.
double fd_jacobian_check(const Surface& surface, const ConformalFactor& w, double h);

struct MatrixCheck {
    double symmetry_rel = 0.0;   // worst |L_rs - L_sr| / max(1, |L_rs|)
    double diag_max = 0.0;       // largest diagonal entry (negative when healthy)
    double dominance_min = 0.0;  // smallest |L_rr| - sum_{s!=r} |L_rs|
    bool cholesky_ok = false;    // -L admits a Cholesky factorization
};

MatrixCheck check_jacobian_matrix(const Eigen::MatrixXd& jac);

struct JacobianCheckReport {
    MatrixCheck matrix;
    double fd_max_rel = 0.0;
    bool passed = false;
};

// The full battery at one point: symmetry, negative diagonal, strict
// dominance, Cholesky of -L, finite differences against the closed form.
JacobianCheckReport run_jacobian_checks(const Surface& surface, const ConformalFactor& w,
                                        double h = 1e-6);

}  // namespace hexflow
