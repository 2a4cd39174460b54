#include <doctest.h>

#include <cmath>
#include <random>

#include "core/energy.hpp"
#include "core/errors.hpp"
#include "core/solver.hpp"
#include "test_support.hpp"

using namespace hexflow;
using namespace hextest;

TEST_CASE("flow terminates immediately at a fixed point") {
    const Surface pants = pair_of_pants();
    const ConformalFactor w0 = ConformalFactor::Zero(3);
    const BoundaryLengths b = pants.boundary_lengths(w0);
    FlowTrace trace;
    const SolveReport report = flow_solve(pants, w0, b, {}, &trace);
    CHECK(report.converged);
    CHECK(report.steps == 0);
    CHECK(report.total_time == 0.0);
    CHECK(report.w == w0);
    CHECK(trace.records.size() == 1);
}

TEST_CASE("flow realizes prescribed boundary lengths on the pants") {
    const Surface pants = pair_of_pants();
    const ConformalFactor w0 = ConformalFactor::Zero(3);
    BoundaryLengths b(3);
    b << 1.0, 1.0, 1.0;
    FlowTrace trace;
    const SolveReport report = flow_solve(pants, w0, b, {}, &trace);
    CHECK(report.converged);
    CHECK(report.residual <= 1e-10);
    // The instance is symmetric, so the limit has equal components.
    CHECK(std::abs(report.w[0] - report.w[1]) <= 1e-9);
    CHECK(std::abs(report.w[1] - report.w[2]) <= 1e-9);
    CHECK((report.B - b).cwiseAbs().maxCoeff() <= 1e-10);

    // Lyapunov value and defect never rise along accepted records, and every
    // accepted state stays strictly admissible.
    double last_dlambda = 0.0;
    double last_defect = std::numeric_limits<double>::infinity();
    double last_t = -1.0;
    bool first = true;
    for (const auto& rec : trace.records) {
        if (!rec.accepted) continue;
        CHECK(rec.t > last_t);
        last_t = rec.t;
        CHECK(pants.admissibility_margin(rec.w) > 0.0);
        if (!first) {
            CHECK(rec.dlambda <= last_dlambda + 1e-9);
            CHECK(rec.defect <= last_defect + 1e-9);
        }
        last_dlambda = rec.dlambda;
        last_defect = rec.defect;
        first = false;
    }

    // The defect decays exponentially: the tail of log C is a good line
    // with negative slope.
    CHECK(report.fit_valid);
    CHECK(report.lambda0 > 0.0);
    CHECK(report.fit_r2 >= 0.99);
}

TEST_CASE("newton finishes without iterating at the solution") {
    const Surface pants = pair_of_pants();
    const ConformalFactor w0 = ConformalFactor::Zero(3);
    const BoundaryLengths b = pants.boundary_lengths(w0);
    const SolveReport report = newton_solve(pants, w0, b);
    CHECK(report.converged);
    CHECK(report.steps == 0);
}

TEST_CASE("newton and flow agree on the realization point") {
    const Surface pants = pair_of_pants();
    const ConformalFactor w0 = ConformalFactor::Zero(3);
    BoundaryLengths b(3);
    b << 1.0, 1.0, 1.0;
    const SolveReport flow = flow_solve(pants, w0, b);
    const SolveReport newton = newton_solve(pants, w0, b);
    CHECK(newton.steps <= 25);
    CHECK((flow.w - newton.w).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(newton.residual <= 1e-10);
}

TEST_CASE("newton residuals contract superlinearly near the solution") {
    const Surface tetra = tetrahedral();
    BoundaryLengths b(4);
    b << 1.0, 1.3, 0.8, 1.1;
    const SolveReport report = newton_solve(tetra, ConformalFactor::Zero(4), b);
    CHECK(report.converged);
    const auto& hist = report.residual_history;
    REQUIRE(hist.size() >= 2);
    for (size_t k = 0; k + 1 < hist.size(); ++k) {
        if (hist[k] < 1e-3) {
            CHECK(hist[k + 1] < std::pow(hist[k], 1.5));
        }
    }
}

TEST_CASE("multistart newton lands on a single realization point") {
    const Surface tetra = tetrahedral();
    BoundaryLengths b(4);
    b << 1.0, 1.3, 0.8, 1.1;
    std::mt19937_64 rng(444);
    std::vector<ConformalFactor> limits;
    for (int start = 0; start < 20; ++start) {
        const ConformalFactor w0 = sample_admissible(tetra, rng, 0.05, -0.05, 0.6);
        const SolveReport report = newton_solve(tetra, w0, b);
        CHECK(report.converged);
        limits.push_back(report.w);
    }
    for (size_t a = 0; a < limits.size(); ++a) {
        for (size_t c = a + 1; c < limits.size(); ++c) {
            CHECK((limits[a] - limits[c]).cwiseAbs().maxCoeff() <= 1e-7);
        }
    }
}

TEST_CASE("solvers reject nonpositive targets and bad starts") {
    const Surface pants = pair_of_pants();
    BoundaryLengths bad(3);
    bad << 1.0, 0.0, 1.0;
    CHECK_THROWS_AS(newton_solve(pants, ConformalFactor::Zero(3), bad), UsageError);
    CHECK_THROWS_AS(flow_solve(pants, ConformalFactor::Zero(3), bad), UsageError);

    BoundaryLengths b(3);
    b << 1.0, 1.0, 1.0;
    ConformalFactor outside(3);
    outside << -5.0, 0.0, 0.0;
    CHECK_THROWS_AS(newton_solve(pants, outside, b), AdmissibilityError);
    CHECK_THROWS_AS(flow_solve(pants, outside, b), AdmissibilityError);
}

TEST_CASE("flow reports non-convergence with the budget exhausted") {
    const Surface pants = pair_of_pants();
    BoundaryLengths b(3);
    b << 1.0, 1.0, 1.0;
    FlowConfig cfg;
    cfg.max_steps = 3;
    FlowTrace trace;
    CHECK_THROWS_AS(flow_solve(pants, ConformalFactor::Zero(3), b, cfg, &trace), ConvergenceError);
    CHECK(trace.records.size() >= 3);
}

TEST_CASE("plus-inf probe drives the tracked boundary to zero") {
    const Surface pants = pair_of_pants();
    const ProbeReport report = probe_limits(pants, ProbeMode::PlusInf, 1, 8.0);
    CHECK(report.trend_ok);
    CHECK(report.extreme_B < 1e-2);
    // Strictly decreasing all the way.
    for (size_t k = 1; k < report.samples.size(); ++k) {
        CHECK(report.samples[k].B[0] < report.samples[k - 1].B[0]);
    }
}

TEST_CASE("finite-wall probe on the unit pants grows only logarithmically") {
    // The arcs blow up like -log(margin): big, but nowhere near 1e3 at any
    // representable margin. The report must say so honestly.
    const Surface pants = pair_of_pants();
    const ProbeReport report = probe_limits(pants, ProbeMode::FiniteWall, 1, 0.0);
    CHECK(!report.trend_ok);
    CHECK(report.extreme_B > 10.0);
    CHECK(report.extreme_B < 50.0);
    // Incident lengths grow monotonically toward the wall.
    const int a = 0;
    for (size_t k = 1; k < report.samples.size(); ++k) {
        CHECK(report.samples[k].B[a] > report.samples[k - 1].B[a]);
    }
}

TEST_CASE("finite-wall probe passes the threshold with a long opposite edge") {
    const Surface longe = pants_long_edge();
    const ProbeReport report = probe_limits(longe, ProbeMode::FiniteWall, 1, 0.0, 33, 3);
    CHECK(report.edge_id == 3);
    CHECK(report.trend_ok);
    CHECK(report.extreme_B > 1e3);
    bool crossed_while_wide = false;
    for (const auto& s : report.samples) {
        if (s.margin > 1e-6 && std::max(s.B[0], s.B[1]) > 1e3) crossed_while_wide = true;
    }
    CHECK(crossed_while_wide);
}

TEST_CASE("mixed probe pushes the squeezed boundary past the threshold") {
    const Surface pants = pair_of_pants();
    const ProbeReport report = probe_limits(pants, ProbeMode::Mixed, 1, 150.0);
    CHECK(report.trend_ok);
    CHECK(report.extreme_B > 1e3);
    CHECK(report.final_margin > 0.0);
}

TEST_CASE("mixed probe needs distinct corner labels") {
    const Surface torus = one_holed_torus();
    CHECK_THROWS_AS(probe_limits(torus, ProbeMode::Mixed, 1, 10.0), ProbeError);
}

TEST_CASE("finite-difference check at the symmetric point and near a wall") {
    const Surface pants = pair_of_pants();
    const ConformalFactor zero = ConformalFactor::Zero(3);
    const double tight = fd_jacobian_check(pants, zero, 1e-6);
    CHECK(tight <= 1e-5);
    // A coarse step lands in the truncation-dominated regime.
    const double coarse = fd_jacobian_check(pants, zero, 1e-3);
    CHECK(coarse > tight);

    // Wall distance 1e-3: the closed form still matches.
    ConformalFactor near_wall(3);
    const double m = kLogCoshHalfAcosh2;
    near_wall << -(m - 1e-3) / 2.0, -(m - 1e-3) / 2.0, 1.0;
    CHECK(pants.admissibility_margin(near_wall) == doctest::Approx(1e-3).epsilon(1e-9));
    CHECK(fd_jacobian_check(pants, near_wall, 1e-6) <= 1e-4);
}

TEST_CASE("jacobian battery passes on healthy surfaces and flags corruption") {
    const Surface tetra = tetrahedral();
    std::mt19937_64 rng(555);
    const ConformalFactor w = sample_admissible(tetra, rng);
    const JacobianCheckReport report = run_jacobian_checks(tetra, w);
    CHECK(report.passed);
    CHECK(report.matrix.symmetry_rel <= 1e-12);
    CHECK(report.matrix.diag_max < 0.0);
    CHECK(report.matrix.dominance_min > 0.0);
    CHECK(report.matrix.cholesky_ok);
    CHECK(report.fd_max_rel <= 1e-5);

    // Corrupted matrices fail the battery's individual checks.
    Eigen::MatrixXd broken = tetra.boundary_jacobian(w);
    broken(0, 1) *= 2.0;
    const MatrixCheck check = check_jacobian_matrix(broken);
    CHECK(check.symmetry_rel > 1e-12);

    Eigen::MatrixXd positive = -tetra.boundary_jacobian(w);
    const MatrixCheck sign_check = check_jacobian_matrix(positive);
    CHECK(sign_check.diag_max > 0.0);
    CHECK(!sign_check.cholesky_ok);
}
