#include "hexflow/hexflow.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "core/document.hpp"
#include "core/energy.hpp"
#include "core/errors.hpp"
#include "core/solver.hpp"
#include "core/surface.hpp"

using namespace hexflow;

struct hf_surface {
    SurfaceDocument doc;
    Surface surface;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// Runs f, translating exceptions into status codes and the thread-local
// message.
template <typename F>
hf_status wrap(F&& f) noexcept {
    try {
        f();
        return HF_OK;
    } catch (const UsageError& e) {
        set_error(e.what());
        return HF_ERR_USAGE;
    } catch (const ValidationError& e) {
        set_error(e.what());
        return HF_ERR_INVALID_SURFACE;
    } catch (const AdmissibilityError& e) {
        set_error(e.what());
        return HF_ERR_INADMISSIBLE;
    } catch (const ConvergenceError& e) {
        set_error(e.what());
        return HF_ERR_NO_CONVERGENCE;
    } catch (const StiffnessError& e) {
        set_error(e.what());
        return HF_ERR_NO_CONVERGENCE;
    } catch (const ProbeError& e) {
        set_error(e.what());
        return HF_ERR_PROBE_FAILED;
    } catch (const ParseError& e) {
        set_error(e.what());
        return HF_ERR_PARSE;
    } catch (const RangeError& e) {
        set_error(e.what());
        return HF_ERR_RANGE;
    } catch (const DomainError& e) {
        set_error(e.what());
        return HF_ERR_RANGE;
    } catch (const NumericError& e) {
        set_error(e.what());
        return HF_ERR_NUMERIC;
    } catch (const std::exception& e) {
        set_error(e.what());
        return HF_ERR_NUMERIC;
    } catch (...) {
        set_error("unknown failure");
        return HF_ERR_NUMERIC;
    }
}

ConformalFactor factor_or_zero(const hf_surface* surface, const double* w) {
    const int n = surface->surface.boundary_count();
    if (!w) return ConformalFactor::Zero(n);
    return Eigen::Map<const Eigen::VectorXd>(w, n);
}

BoundaryLengths targets_from(const hf_surface* surface, const double* b) {
    if (!b) throw UsageError("target array must not be null");
    return Eigen::Map<const Eigen::VectorXd>(b, surface->surface.boundary_count());
}

void require(bool ok, const char* what) {
    if (!ok) throw UsageError(what);
}

std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trace_csv(const std::string& path, const FlowTrace& trace, int n) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open trace file for writing: " + path);
    out << "t";
    for (int i = 1; i <= n; ++i) out << ",w_" << i;
    for (int i = 1; i <= n; ++i) out << ",B_" << i;
    out << ",C,dLambda\n";
    for (const auto& rec : trace.records) {
        if (!rec.accepted) continue;
        out << format_g17(rec.t);
        for (int i = 0; i < n; ++i) out << "," << format_g17(rec.w[i]);
        for (int i = 0; i < n; ++i) out << "," << format_g17(rec.B[i]);
        out << "," << format_g17(rec.defect) << "," << format_g17(rec.dlambda) << "\n";
    }
}

void fill_report(const SolveReport& in, hf_solve_report* out) {
    if (!out) return;
    out->residual = in.residual;
    out->steps = in.steps;
    out->converged = in.converged ? 1 : 0;
    out->lambda0 = in.lambda0;
    out->fit_r2 = in.fit_r2;
    out->fit_valid = in.fit_valid ? 1 : 0;
    out->total_time = in.total_time;
}

}  // namespace

extern "C" {

const char* hf_last_error(void) { return g_last_error.c_str(); }

hf_status hf_surface_parse(const char* json_text, hf_surface** out) {
    return wrap([&] {
        require(json_text && out, "hf_surface_parse: null argument");
        SurfaceDocument doc = parse_surface_document(json_text);
        *out = new hf_surface{doc, build_surface(doc)};
    });
}

hf_status hf_surface_load(const char* path, hf_surface** out) {
    return wrap([&] {
        require(path && out, "hf_surface_load: null argument");
        SurfaceDocument doc = load_surface_document(path);
        *out = new hf_surface{doc, build_surface(doc)};
    });
}

void hf_surface_free(hf_surface* surface) { delete surface; }

char* hf_surface_to_json(const hf_surface* surface) {
    if (!surface) return nullptr;
    return dup_string(serialize_surface_document(surface->doc));
}

void hf_string_free(char* text) { std::free(text); }

int hf_surface_boundaries(const hf_surface* surface) {
    return surface ? surface->surface.boundary_count() : 0;
}

int hf_surface_edges(const hf_surface* surface) {
    return surface ? surface->surface.edge_count() : 0;
}

int hf_surface_faces(const hf_surface* surface) {
    return surface ? surface->surface.face_count() : 0;
}

hf_status hf_validate(const hf_surface* surface, char** report_out) {
    return wrap([&] {
        require(surface != nullptr, "hf_validate: null surface");
        // The handle held a validated surface already; re-run on the stored
        // combinatorics so the report text is available.
        ValidationReport report = surface->surface.triangulation().validate();
        std::ostringstream os;
        for (const auto& p : report.problems) os << p << "\n";
        if (report_out) *report_out = dup_string(os.str());
        if (!report.ok) {
            throw ValidationError(report.problems, "invalid ideal triangulation");
        }
    });
}

hf_status hf_targets_load(const hf_surface* surface, const char* path, double* b_out,
                          double* w0_out, int* has_w0) {
    return wrap([&] {
        require(surface && path && b_out, "hf_targets_load: null argument");
        const TargetDocument doc =
            load_target_document(path, surface->surface.boundary_count());
        Eigen::Map<Eigen::VectorXd>(b_out, doc.b.size()) = doc.b;
        if (has_w0) *has_w0 = doc.w0.has_value() ? 1 : 0;
        if (doc.w0 && w0_out) {
            Eigen::Map<Eigen::VectorXd>(w0_out, doc.w0->size()) = *doc.w0;
        }
    });
}

hf_status hf_margin(const hf_surface* surface, const double* w, double* out) {
    return wrap([&] {
        require(surface && out, "hf_margin: null argument");
        *out = surface->surface.admissibility_margin(factor_or_zero(surface, w));
    });
}

hf_status hf_edge_lengths(const hf_surface* surface, const double* w, double* out) {
    return wrap([&] {
        require(surface && out, "hf_edge_lengths: null argument");
        const Metric metric = surface->surface.apply_conformal(factor_or_zero(surface, w));
        for (int e = 0; e < metric.edge_count(); ++e) out[e] = metric.length(e);
    });
}

hf_status hf_boundary_lengths(const hf_surface* surface, const double* w, double* out) {
    return wrap([&] {
        require(surface && out, "hf_boundary_lengths: null argument");
        const BoundaryLengths lengths =
            surface->surface.boundary_lengths(factor_or_zero(surface, w));
        Eigen::Map<Eigen::VectorXd>(out, lengths.size()) = lengths;
    });
}

hf_status hf_jacobian(const hf_surface* surface, const double* w, double* out) {
    return wrap([&] {
        require(surface && out, "hf_jacobian: null argument");
        const Eigen::MatrixXd jac = surface->surface.boundary_jacobian(factor_or_zero(surface, w));
        const int n = static_cast<int>(jac.rows());
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) out[r * n + c] = jac(r, c);
        }
    });
}

hf_status hf_energy_phi(const hf_surface* surface, const double* base, const double* w,
                        double* out) {
    return wrap([&] {
        require(surface && out, "hf_energy_phi: null argument");
        *out = energy_phi(surface->surface, factor_or_zero(surface, base),
                          factor_or_zero(surface, w));
    });
}

hf_status hf_energy_psi(const hf_surface* surface, const double* base, const double* w,
                        const double* b, double* out) {
    return wrap([&] {
        require(surface && out, "hf_energy_psi: null argument");
        *out = energy_psi(surface->surface, factor_or_zero(surface, base),
                          factor_or_zero(surface, w), targets_from(surface, b));
    });
}

hf_status hf_defect(const hf_surface* surface, const double* w, const double* b, double* out) {
    return wrap([&] {
        require(surface && out, "hf_defect: null argument");
        *out = boundary_defect(surface->surface.boundary_lengths(factor_or_zero(surface, w)),
                               targets_from(surface, b));
    });
}

void hf_flow_config_default(hf_flow_config* config) {
    if (!config) return;
    const FlowConfig defaults;
    config->dt0 = defaults.dt0;
    config->tol = defaults.tol;
    config->max_time = defaults.max_time;
    config->max_steps = defaults.max_steps;
    config->guard_slack = defaults.guard_slack;
}

void hf_newton_config_default(hf_newton_config* config) {
    if (!config) return;
    const NewtonConfig defaults;
    config->tol = defaults.tol;
    config->max_iters = defaults.max_iters;
    config->armijo_slope = defaults.armijo_slope;
    config->backtrack_ratio = defaults.backtrack_ratio;
}

hf_status hf_flow_solve(const hf_surface* surface, const double* w0, const double* b,
                        const hf_flow_config* config, const char* trace_csv_path, double* w_out,
                        double* B_out, hf_solve_report* report) {
    return wrap([&] {
        require(surface != nullptr, "hf_flow_solve: null surface");
        FlowConfig cfg;
        if (config) {
            cfg.dt0 = config->dt0;
            cfg.tol = config->tol;
            cfg.max_time = config->max_time;
            cfg.max_steps = config->max_steps;
            cfg.guard_slack = config->guard_slack;
        }
        FlowTrace trace;
        try {
            const SolveReport result =
                flow_solve(surface->surface, factor_or_zero(surface, w0),
                           targets_from(surface, b), cfg, &trace);
            if (trace_csv_path) {
                write_trace_csv(trace_csv_path, trace, surface->surface.boundary_count());
            }
            if (w_out) Eigen::Map<Eigen::VectorXd>(w_out, result.w.size()) = result.w;
            if (B_out) Eigen::Map<Eigen::VectorXd>(B_out, result.B.size()) = result.B;
            fill_report(result, report);
        } catch (...) {
            // Keep whatever was integrated available for diagnosis.
            if (trace_csv_path && !trace.records.empty()) {
                write_trace_csv(trace_csv_path, trace, surface->surface.boundary_count());
            }
            throw;
        }
    });
}

hf_status hf_newton_solve(const hf_surface* surface, const double* w0, const double* b,
                          const hf_newton_config* config, double* w_out, double* B_out,
                          hf_solve_report* report) {
    return wrap([&] {
        require(surface != nullptr, "hf_newton_solve: null surface");
        NewtonConfig cfg;
        if (config) {
            cfg.tol = config->tol;
            cfg.max_iters = config->max_iters;
            cfg.armijo_slope = config->armijo_slope;
            cfg.backtrack_ratio = config->backtrack_ratio;
        }
        const SolveReport result = newton_solve(surface->surface, factor_or_zero(surface, w0),
                                                targets_from(surface, b), cfg);
        if (w_out) Eigen::Map<Eigen::VectorXd>(w_out, result.w.size()) = result.w;
        if (B_out) Eigen::Map<Eigen::VectorXd>(B_out, result.B.size()) = result.B;
        fill_report(result, report);
    });
}

hf_status hf_check(const hf_surface* surface, const double* w, double fd_step,
                   hf_check_report* report) {
    return wrap([&] {
        require(surface && report, "hf_check: null argument");
        const double h = fd_step > 0.0 ? fd_step : 1e-6;
        const JacobianCheckReport result =
            run_jacobian_checks(surface->surface, factor_or_zero(surface, w), h);
        report->symmetry_rel = result.matrix.symmetry_rel;
        report->diag_max = result.matrix.diag_max;
        report->dominance_min = result.matrix.dominance_min;
        report->cholesky_ok = result.matrix.cholesky_ok ? 1 : 0;
        report->fd_max_rel = result.fd_max_rel;
        report->passed = result.passed ? 1 : 0;
    });
}

hf_status hf_probe(const hf_surface* surface, hf_probe_mode mode, int boundary, int edge_id,
                   double tmax, char** table_out, hf_probe_report* report) {
    return wrap([&] {
        require(surface && report, "hf_probe: null argument");
        ProbeMode m;
        switch (mode) {
            case HF_PROBE_PLUS_INF: m = ProbeMode::PlusInf; break;
            case HF_PROBE_FINITE_WALL: m = ProbeMode::FiniteWall; break;
            case HF_PROBE_MIXED: m = ProbeMode::Mixed; break;
            default: throw UsageError("hf_probe: unknown mode");
        }
        const ProbeReport result = probe_limits(surface->surface, m, boundary, tmax, 33, edge_id);
        report->extreme_B = result.extreme_B;
        report->final_margin = result.final_margin;
        report->trend_ok = result.trend_ok ? 1 : 0;
        report->samples = static_cast<long>(result.samples.size());
        report->edge_id = result.edge_id;
        report->face_id = result.face_id;
        if (table_out) {
            std::ostringstream os;
            const int n = surface->surface.boundary_count();
            os << "t,margin";
            for (int i = 1; i <= n; ++i) os << ",B_" << i;
            os << "\n";
            for (const auto& s : result.samples) {
                os << format_g17(s.t) << "," << format_g17(s.margin);
                for (int i = 0; i < n; ++i) os << "," << format_g17(s.B[i]);
                os << "\n";
            }
            *table_out = dup_string(os.str());
        }
    });
}

}  // extern "C"
