#include "core/solver.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "core/energy.hpp"
#include "core/errors.hpp"
#include "core/trig.hpp"

namespace hexflow {

namespace {

constexpr double kSegmentQuadTol = 1e-12;

void require_targets(const Surface& surface, const BoundaryLengths& targets) {
    if (targets.size() != surface.boundary_count()) {
        throw UsageError("target vector must match the boundary count");
    }
    for (Eigen::Index i = 0; i < targets.size(); ++i) {
        if (!(targets[i] > 0.0)) {
            throw UsageError("target boundary lengths must be positive (b_" +
                             std::to_string(i + 1) + " = " + std::to_string(targets[i]) + ")");
        }
    }
}

struct TailFit {
    double lambda0 = 0.0;
    double r2 = 0.0;
    bool valid = false;
};

// Least squares line through log C over the last half of the accepted
// records; the decay rate is -slope/2.
TailFit fit_decay_rate(const FlowTrace& trace) {
    std::vector<std::pair<double, double>> points;
    for (const auto& rec : trace.records) {
        if (rec.accepted && rec.defect > 0.0) {
            points.emplace_back(rec.t, std::log(rec.defect));
        }
    }
    TailFit fit;
    if (points.size() < 6) return fit;
    const size_t start = points.size() / 2;
    const size_t m = points.size() - start;

    double st = 0.0, sy = 0.0;
    for (size_t k = start; k < points.size(); ++k) {
        st += points[k].first;
        sy += points[k].second;
    }
    const double tbar = st / static_cast<double>(m);
    const double ybar = sy / static_cast<double>(m);
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (size_t k = start; k < points.size(); ++k) {
        const double dt = points[k].first - tbar;
        const double dy = points[k].second - ybar;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    if (!(stt > 0.0) || !(syy > 0.0)) return fit;
    const double slope = sty / stt;
    fit.lambda0 = -0.5 * slope;
    fit.r2 = (sty * sty) / (stt * syy);
    fit.valid = fit.lambda0 > 0.0 && std::isfinite(fit.r2);
    return fit;
}

}  // namespace

SolveReport flow_solve(const Surface& surface, const ConformalFactor& w0,
                       const BoundaryLengths& targets, const FlowConfig& config,
                       FlowTrace* trace) {
    require_targets(surface, targets);

    ConformalFactor w = w0;
    BoundaryLengths lengths = surface.boundary_lengths(w);  // throws if w0 inadmissible
    double defect = boundary_defect(lengths, targets);
    double residual = (lengths - targets).cwiseAbs().maxCoeff();
    double t = 0.0;
    double dt = config.dt0;
    double dlambda = 0.0;  // Lyapunov value relative to the start state
    long accepted_steps = 0;
    int accept_streak = 0;

    FlowTrace local_trace;
    FlowTrace& tr = trace ? *trace : local_trace;
    tr.records.clear();
    tr.records.push_back({t, w, lengths, defect, dlambda, 0.0, true});

    auto vector_field = [&](const ConformalFactor& state) -> Eigen::VectorXd {
        return surface.boundary_lengths(state) - targets;
    };

    while (residual > config.tol) {
        if (accepted_steps >= config.max_steps) {
            throw ConvergenceError(residual, "flow exceeded the step budget, residual = " +
                                                 std::to_string(residual));
        }
        if (t >= config.max_time) {
            throw ConvergenceError(residual, "flow exceeded the time budget, residual = " +
                                                 std::to_string(residual));
        }
        if (dt < 1e-12) {
            throw StiffnessError("flow step size collapsed below 1e-12 at t = " +
                                 std::to_string(t));
        }

        bool ok = true;
        ConformalFactor w_next;
        BoundaryLengths lengths_next;
        double defect_next = 0.0;
        double dlambda_step = 0.0;
        try {
            const Eigen::VectorXd k1 = lengths - targets;
            const Eigen::VectorXd k2 = vector_field(w + 0.5 * dt * k1);
            const Eigen::VectorXd k3 = vector_field(w + 0.5 * dt * k2);
            const Eigen::VectorXd k4 = vector_field(w + dt * k3);
            w_next = w + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

            if (!(surface.admissibility_margin(w_next) > 0.0)) {
                ok = false;
            } else {
                lengths_next = surface.boundary_lengths(w_next);
                defect_next = boundary_defect(lengths_next, targets);
                // Lyapunov change across the step: d(psi) + d(C), with the
                // psi change taken along the step segment.
                const double dphi =
                    -boundary_form_integral(surface, w, w_next, kSegmentQuadTol);
                dlambda_step = dphi + targets.dot(w_next - w) + (defect_next - defect);
                ok = dlambda_step <= config.guard_slack;
            }
        } catch (const AdmissibilityError&) {
            ok = false;
        } catch (const RangeError&) {
            ok = false;
        }

        if (!ok) {
            if (w_next.size() == surface.boundary_count() && lengths_next.size() > 0) {
                tr.records.push_back({t + dt, w_next, lengths_next, defect_next,
                                      dlambda + dlambda_step, dt, false});
            }
            dt *= 0.5;
            accept_streak = 0;
            continue;
        }

        t += dt;
        w = w_next;
        lengths = lengths_next;
        defect = defect_next;
        dlambda += dlambda_step;
        residual = (lengths - targets).cwiseAbs().maxCoeff();
        ++accepted_steps;
        tr.records.push_back({t, w, lengths, defect, dlambda, dt, true});

        if (++accept_streak >= 5) {
            dt = std::min(dt * 2.0, config.dt0 * 8.0);
            accept_streak = 0;
        }
    }

    SolveReport report;
    report.w = w;
    report.B = lengths;
    report.residual = residual;
    report.steps = accepted_steps;
    report.converged = true;
    report.total_time = t;
    const TailFit fit = fit_decay_rate(tr);
    report.lambda0 = fit.lambda0;
    report.fit_r2 = fit.r2;
    report.fit_valid = fit.valid;
    return report;
}

SolveReport newton_solve(const Surface& surface, const ConformalFactor& w0,
                         const BoundaryLengths& targets, const NewtonConfig& config) {
    require_targets(surface, targets);

    ConformalFactor w = w0;
    BoundaryLengths lengths = surface.boundary_lengths(w);
    Eigen::VectorXd gradient = lengths - targets;  // = B - b = -grad psi
    double residual = gradient.cwiseAbs().maxCoeff();

    SolveReport report;
    report.residual_history.push_back(residual);

    int iters = 0;
    while (residual > config.tol) {
        if (iters >= config.max_iters) {
            throw ConvergenceError(residual, "Newton exceeded the iteration budget, residual = " +
                                                 std::to_string(residual));
        }

        const Eigen::MatrixXd neg_jac = -surface.boundary_jacobian(w);
        const Eigen::LLT<Eigen::MatrixXd> llt(neg_jac);
        if (llt.info() != Eigen::Success) {
            throw NumericError("Cholesky factorization of -L failed; the iterate is numerically "
                               "at the admissibility wall");
        }
        const Eigen::VectorXd direction = llt.solve(gradient);

        double alpha = 1.0;
        // Stay strictly inside the admissible set first.
        while (!(surface.admissibility_margin(w + alpha * direction) > 0.0)) {
            alpha *= config.backtrack_ratio;
            if (alpha < 1e-18) {
                throw NumericError("Newton line search could not re-enter the admissible set");
            }
        }
        // Armijo decrease on psi; its directional derivative along d is
        // -(B-b).d, which the positive definite solve makes negative.
        const double slope = -gradient.dot(direction);
        while (true) {
            const ConformalFactor cand = w + alpha * direction;
            const double dpsi = -boundary_form_integral(surface, w, cand, kSegmentQuadTol) +
                                targets.dot(cand - w);
            if (dpsi <= config.armijo_slope * alpha * slope) break;
            alpha *= config.backtrack_ratio;
            if (alpha < 1e-18) {
                throw NumericError("Newton line search underflow");
            }
        }

        w += alpha * direction;
        lengths = surface.boundary_lengths(w);
        gradient = lengths - targets;
        residual = gradient.cwiseAbs().maxCoeff();
        report.residual_history.push_back(residual);
        ++iters;
    }

    report.w = w;
    report.B = lengths;
    report.residual = residual;
    report.steps = iters;
    report.converged = true;
    return report;
}

namespace {

ProbeReport probe_plus_inf(const Surface& surface, int boundary, double tmax, int num_samples) {
    ProbeReport report;
    report.mode = ProbeMode::PlusInf;
    report.boundary = boundary;
    const int n = surface.boundary_count();
    const int bi = boundary - 1;
    bool decreasing = true;
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 0; k < num_samples; ++k) {
        const double t = tmax * static_cast<double>(k) / (num_samples - 1);
        ConformalFactor w = ConformalFactor::Zero(n);
        w[bi] = t;
        ProbeSample sample{t, surface.admissibility_margin(w), surface.boundary_lengths(w)};
        if (sample.B[bi] >= previous) decreasing = false;
        previous = sample.B[bi];
        report.samples.push_back(std::move(sample));
    }
    report.extreme_B = report.samples.back().B[bi];
    report.final_margin = report.samples.back().margin;
    report.trend_ok = decreasing && report.extreme_B < 1e-2;
    report.detail = decreasing ? "tracked boundary length strictly decreasing"
                               : "tracked boundary length failed to decrease monotonically";
    return report;
}

ProbeReport probe_finite_wall(const Surface& surface, int boundary, int edge_id, int num_samples) {
    ProbeReport report;
    report.mode = ProbeMode::FiniteWall;
    report.boundary = boundary;
    const auto& tri = surface.triangulation();
    const int n = surface.boundary_count();

    int target_idx = -1;
    if (edge_id >= 0) {
        target_idx = tri.edge_index(edge_id);
        if (target_idx < 0) throw ProbeError("unknown edge id " + std::to_string(edge_id));
    } else {
        for (size_t e = 0; e < tri.edges().size(); ++e) {
            const auto& edge = tri.edges()[e];
            if (edge.a == boundary || edge.b == boundary) {
                if (target_idx < 0 || edge.id < tri.edges()[static_cast<size_t>(target_idx)].id) {
                    target_idx = static_cast<int>(e);
                }
            }
        }
        if (target_idx < 0) {
            throw ProbeError("boundary " + std::to_string(boundary) + " has no incident edge");
        }
    }
    const EdgeSpec& target = tri.edges()[static_cast<size_t>(target_idx)];
    report.edge_id = target.id;

    // Ray w(t) = -t (e_a + e_b). Every edge margin falls affinely with rate
    // d_a + d_b; the first wall met is the one with the smallest m0/rate.
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);
    dir[target.a - 1] += 1.0;
    dir[target.b - 1] += 1.0;

    double t_exit = std::numeric_limits<double>::infinity();
    int binding_idx = -1;
    for (size_t e = 0; e < tri.edges().size(); ++e) {
        const auto& edge = tri.edges()[e];
        const double rate = dir[edge.a - 1] + dir[edge.b - 1];
        if (rate <= 0.0) continue;
        const double m0 = surface.reference_metric().wall_offset(static_cast<int>(e));
        const double tw = m0 / rate;
        if (tw < t_exit) {
            t_exit = tw;
            binding_idx = static_cast<int>(e);
        }
    }
    const EdgeSpec& binding = tri.edges()[static_cast<size_t>(binding_idx)];
    report.edge_id = binding.id;
    const double rate = dir[binding.a - 1] + dir[binding.b - 1];
    const double m0 = surface.reference_metric().wall_offset(binding_idx);

    // Geometric sweep of the binding margin from its start value down to 1e-7.
    constexpr double kMarginFloor = 1e-7;
    double max_incident = 0.0;
    bool hit = false;
    for (int k = 0; k < num_samples; ++k) {
        const double frac = static_cast<double>(k) / (num_samples - 1);
        const double margin = m0 * std::pow(kMarginFloor / m0, frac);
        const double t = (m0 - margin) / rate;
        const ConformalFactor w = -t * dir;
        ProbeSample sample{t, surface.admissibility_margin(w), surface.boundary_lengths(w)};
        const double incident = std::max(sample.B[binding.a - 1], sample.B[binding.b - 1]);
        max_incident = std::max(max_incident, incident);
        if (sample.margin > 1e-6 && incident > 1e3) hit = true;
        report.samples.push_back(std::move(sample));
    }
    report.extreme_B = max_incident;
    report.final_margin = report.samples.back().margin;
    report.trend_ok = hit;
    report.detail = "wall of edge " + std::to_string(binding.id) + " joining (" +
                    std::to_string(binding.a) + "," + std::to_string(binding.b) + ")";
    return report;
}

ProbeReport probe_mixed(const Surface& surface, int boundary, double tmax, int num_samples) {
    ProbeReport report;
    report.mode = ProbeMode::Mixed;
    report.boundary = boundary;
    const auto& tri = surface.triangulation();
    const int n = surface.boundary_count();

    const FaceSpec* face = nullptr;
    int slot = -1;
    for (const auto& f : tri.faces()) {
        for (int t = 0; t < 3; ++t) {
            if (f.corners[t] == boundary) {
                if (!face || f.id < face->id) {
                    face = &f;
                    slot = t;
                }
                break;
            }
        }
    }
    if (!face) throw ProbeError("boundary " + std::to_string(boundary) + " is on no face");
    report.face_id = face->id;

    const int other1 = face->corners[(slot + 1) % 3];
    const int other2 = face->corners[(slot + 2) % 3];
    if (other1 == boundary || other2 == boundary) {
        throw ProbeError("mixed probe needs a face with distinct corner labels at boundary " +
                         std::to_string(boundary));
    }

    const int bi = boundary - 1;
    constexpr int kMinSamples = 8;
    double max_tracked = 0.0;
    for (int k = 0; k < num_samples; ++k) {
        const double t = tmax * static_cast<double>(k) / (num_samples - 1);
        ConformalFactor w = ConformalFactor::Zero(n);
        w[bi] = -t;
        w[other1 - 1] = t;
        w[other2 - 1] = t;
        const double margin = surface.admissibility_margin(w);
        if (!(margin > 0.0)) {
            if (static_cast<int>(report.samples.size()) < kMinSamples) {
                throw ProbeError("mixed ray left the admissible set after " +
                                 std::to_string(report.samples.size()) + " samples");
            }
            break;
        }
        ProbeSample sample{t, margin, surface.boundary_lengths(w)};
        max_tracked = std::max(max_tracked, sample.B[bi]);
        report.samples.push_back(std::move(sample));
    }
    report.extreme_B = max_tracked;
    report.final_margin = report.samples.back().margin;
    report.trend_ok = max_tracked > 1e3;
    report.detail = "face " + std::to_string(face->id) + " corners pushed to -t, +t, +t";
    return report;
}

}  // namespace

ProbeReport probe_limits(const Surface& surface, ProbeMode mode, int boundary, double tmax,
                         int num_samples, int edge_id) {
    if (boundary < 1 || boundary > surface.boundary_count()) {
        throw UsageError("boundary index out of range");
    }
    if (num_samples < 2) throw UsageError("need at least 2 probe samples");
    switch (mode) {
        case ProbeMode::PlusInf:
            return probe_plus_inf(surface, boundary, tmax, num_samples);
        case ProbeMode::FiniteWall:
            return probe_finite_wall(surface, boundary, edge_id, num_samples);
        case ProbeMode::Mixed:
            return probe_mixed(surface, boundary, tmax, num_samples);
    }
    throw UsageError("unknown probe mode");
}

double fd_jacobian_check(const Surface& surface, const ConformalFactor& w, double h) {
    if (!(h > 0.0)) throw UsageError("finite-difference step must be positive");
    const double margin = surface.admissibility_margin(w);
    if (!(margin > 2.0 * h)) {
        throw UsageError("point too close to the admissibility wall for step " +
                         std::to_string(h));
    }
    const int n = surface.boundary_count();
    const Eigen::MatrixXd analytic = surface.boundary_jacobian(w);
    Eigen::MatrixXd fd(n, n);
    for (int j = 0; j < n; ++j) {
        ConformalFactor wp = w;
        ConformalFactor wm = w;
        wp[j] += h;
        wm[j] -= h;
        fd.col(j) = (surface.boundary_lengths(wp) - surface.boundary_lengths(wm)) / (2.0 * h);
    }
    // Central differences carry round-off noise of about eps*|B|/(2h);
    // entries far below the matrix scale cannot be certified relative to
    // themselves, so the denominator is floored at 1e-4 of the largest
    // entry. Structural zeros are covered by the same rule.
    const double floor = 1e-4 * analytic.cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const double denom = std::max(std::abs(analytic(r, c)), floor);
            worst = std::max(worst, std::abs(fd(r, c) - analytic(r, c)) / denom);
        }
    }
    return worst;
}

MatrixCheck check_jacobian_matrix(const Eigen::MatrixXd& jac) {
    MatrixCheck check;
    const int n = static_cast<int>(jac.rows());
    check.diag_max = -std::numeric_limits<double>::infinity();
    check.dominance_min = std::numeric_limits<double>::infinity();
    for (int r = 0; r < n; ++r) {
        check.diag_max = std::max(check.diag_max, jac(r, r));
        double off = 0.0;
        for (int c = 0; c < n; ++c) {
            if (c != r) off += std::abs(jac(r, c));
            const double denom = std::max(1.0, std::abs(jac(r, c)));
            check.symmetry_rel = std::max(check.symmetry_rel,
                                          std::abs(jac(r, c) - jac(c, r)) / denom);
        }
        check.dominance_min = std::min(check.dominance_min, std::abs(jac(r, r)) - off);
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(-jac);
    check.cholesky_ok = llt.info() == Eigen::Success;
    return check;
}

JacobianCheckReport run_jacobian_checks(const Surface& surface, const ConformalFactor& w,
                                        double h) {
    JacobianCheckReport report;
    report.matrix = check_jacobian_matrix(surface.boundary_jacobian(w));
    report.fd_max_rel = fd_jacobian_check(surface, w, h);
    report.passed = report.matrix.symmetry_rel <= 1e-12 && report.matrix.diag_max < 0.0 &&
                    report.matrix.dominance_min > 0.0 && report.matrix.cholesky_ok &&
                    report.fd_max_rel <= 1e-5;
    return report;
}

}  // namespace hexflow
