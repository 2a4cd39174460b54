// Command-line front end. Talks to the solver library exclusively through
// the C interface in hexflow/hexflow.h.
//
// Exit codes: 0 ok, 1 usage, 2 invalid surface, 3 inadmissible factor,
// 4 non-convergence, 5 failed check, 6 failed probe.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hexflow/hexflow.h"

namespace {

int exit_code_for(hf_status status) {
    switch (status) {
        case HF_OK: return 0;
        case HF_ERR_USAGE: return 1;
        case HF_ERR_INVALID_SURFACE: return 2;
        case HF_ERR_PARSE: return 2;
        case HF_ERR_INADMISSIBLE: return 3;
        case HF_ERR_NO_CONVERGENCE: return 4;
        case HF_ERR_RANGE: return 4;
        case HF_ERR_NUMERIC: return 4;
        case HF_ERR_CHECK_FAILED: return 5;
        case HF_ERR_PROBE_FAILED: return 6;
    }
    return 1;
}

int fail(hf_status status) {
    std::fprintf(stderr, "error: %s\n", hf_last_error());
    return exit_code_for(status);
}

struct SurfaceHandle {
    hf_surface* ptr = nullptr;
    ~SurfaceHandle() { hf_surface_free(ptr); }
};

struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { hf_string_free(ptr); }
};

int cmd_validate(const std::string& path) {
    SurfaceHandle surface;
    const hf_status status = hf_surface_load(path.c_str(), &surface.ptr);
    if (status != HF_OK) return fail(status);
    OwnedString report;
    const hf_status vstatus = hf_validate(surface.ptr, &report.ptr);
    if (vstatus != HF_OK) {
        if (report.ptr && report.ptr[0]) std::fputs(report.ptr, stdout);
        return fail(vstatus);
    }
    std::printf("valid surface: %d boundary components, %d edges, %d faces\n",
                hf_surface_boundaries(surface.ptr), hf_surface_edges(surface.ptr),
                hf_surface_faces(surface.ptr));
    return 0;
}

int cmd_lengths(const std::string& path, const std::vector<double>& w_arg) {
    SurfaceHandle surface;
    const hf_status status = hf_surface_load(path.c_str(), &surface.ptr);
    if (status != HF_OK) return fail(status);
    const int n = hf_surface_boundaries(surface.ptr);
    if (!w_arg.empty() && static_cast<int>(w_arg.size()) != n) {
        std::fprintf(stderr, "error: --w needs %d entries, got %zu\n", n, w_arg.size());
        return 1;
    }
    std::vector<double> lengths(static_cast<size_t>(n));
    const double* w = w_arg.empty() ? nullptr : w_arg.data();
    const hf_status bstatus = hf_boundary_lengths(surface.ptr, w, lengths.data());
    if (bstatus != HF_OK) return fail(bstatus);
    for (int i = 0; i < n; ++i) {
        std::printf("%d %.17g\n", i + 1, lengths[static_cast<size_t>(i)]);
    }
    return 0;
}

int cmd_solve(const std::string& surface_path, const std::string& targets_path,
              const std::string& method, double tol, const std::string& trace_path) {
    SurfaceHandle surface;
    hf_status status = hf_surface_load(surface_path.c_str(), &surface.ptr);
    if (status != HF_OK) return fail(status);
    const int n = hf_surface_boundaries(surface.ptr);

    std::vector<double> targets(static_cast<size_t>(n));
    std::vector<double> w0(static_cast<size_t>(n));
    int has_w0 = 0;
    status = hf_targets_load(surface.ptr, targets_path.c_str(), targets.data(), w0.data(),
                             &has_w0);
    if (status != HF_OK) return fail(status);

    std::vector<double> w_out(static_cast<size_t>(n));
    std::vector<double> B_out(static_cast<size_t>(n));
    hf_solve_report report{};
    const double* w0_ptr = has_w0 ? w0.data() : nullptr;
    const char* trace = trace_path.empty() ? nullptr : trace_path.c_str();

    if (method == "newton") {
        hf_newton_config config;
        hf_newton_config_default(&config);
        if (tol > 0.0) config.tol = tol;
        status = hf_newton_solve(surface.ptr, w0_ptr, targets.data(), &config, w_out.data(),
                                 B_out.data(), &report);
    } else if (method == "flow") {
        hf_flow_config config;
        hf_flow_config_default(&config);
        if (tol > 0.0) config.tol = tol;
        status = hf_flow_solve(surface.ptr, w0_ptr, targets.data(), &config, trace, w_out.data(),
                               B_out.data(), &report);
    } else {
        std::fprintf(stderr, "error: --method must be flow or newton\n");
        return 1;
    }
    if (status != HF_OK) return fail(status);

    std::printf("method %s\n", method.c_str());
    std::printf("status converged\n");
    std::printf("%s %ld\n", method == "flow" ? "steps" : "iterations", report.steps);
    std::printf("residual %.17g\n", report.residual);
    for (int i = 0; i < n; ++i) std::printf("w %d %.17g\n", i + 1, w_out[static_cast<size_t>(i)]);
    for (int i = 0; i < n; ++i) std::printf("B %d %.17g\n", i + 1, B_out[static_cast<size_t>(i)]);
    if (method == "flow") {
        std::printf("time %.17g\n", report.total_time);
        if (report.fit_valid) {
            std::printf("lambda0 %.17g\n", report.lambda0);
            std::printf("fit_r2 %.17g\n", report.fit_r2);
        }
    }
    return 0;
}

int cmd_check(const std::string& path, const std::vector<double>& w_arg, double h, int samples,
              uint64_t seed) {
    SurfaceHandle surface;
    const hf_status status = hf_surface_load(path.c_str(), &surface.ptr);
    if (status != HF_OK) return fail(status);
    const int n = hf_surface_boundaries(surface.ptr);
    if (!w_arg.empty() && static_cast<int>(w_arg.size()) != n) {
        std::fprintf(stderr, "error: --w needs %d entries, got %zu\n", n, w_arg.size());
        return 1;
    }

    std::vector<std::vector<double>> points;
    points.push_back(w_arg.empty() ? std::vector<double>(static_cast<size_t>(n), 0.0) : w_arg);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-0.3, 1.0);
    for (int s = 0; s < samples; ++s) {
        for (int tries = 0; tries < 1000; ++tries) {
            std::vector<double> w(static_cast<size_t>(n));
            for (auto& x : w) x = dist(rng);
            double margin = 0.0;
            if (hf_margin(surface.ptr, w.data(), &margin) == HF_OK && margin >= 0.05) {
                points.push_back(std::move(w));
                break;
            }
        }
    }

    hf_check_report worst{};
    worst.cholesky_ok = 1;
    worst.passed = 1;
    worst.diag_max = -1e300;
    worst.dominance_min = 1e300;
    for (const auto& point : points) {
        hf_check_report report{};
        const hf_status cstatus = hf_check(surface.ptr, point.data(), h, &report);
        if (cstatus != HF_OK) return fail(cstatus);
        worst.symmetry_rel = std::max(worst.symmetry_rel, report.symmetry_rel);
        worst.diag_max = std::max(worst.diag_max, report.diag_max);
        worst.dominance_min = std::min(worst.dominance_min, report.dominance_min);
        worst.fd_max_rel = std::max(worst.fd_max_rel, report.fd_max_rel);
        worst.cholesky_ok = worst.cholesky_ok && report.cholesky_ok;
        worst.passed = worst.passed && report.passed;
    }

    std::printf("points checked %zu\n", points.size());
    std::printf("symmetry_rel %.17g %s\n", worst.symmetry_rel,
                worst.symmetry_rel <= 1e-12 ? "pass" : "FAIL");
    std::printf("diag_max %.17g %s\n", worst.diag_max, worst.diag_max < 0.0 ? "pass" : "FAIL");
    std::printf("dominance_min %.17g %s\n", worst.dominance_min,
                worst.dominance_min > 0.0 ? "pass" : "FAIL");
    std::printf("cholesky %s\n", worst.cholesky_ok ? "pass" : "FAIL");
    std::printf("fd_max_rel %.17g %s\n", worst.fd_max_rel,
                worst.fd_max_rel <= 1e-5 ? "pass" : "FAIL");
    if (!worst.passed) {
        std::fprintf(stderr, "error: Jacobian checks failed\n");
        return 5;
    }
    return 0;
}

int cmd_probe(const std::string& path, const std::string& mode_name, int boundary, int edge,
              double tmax) {
    SurfaceHandle surface;
    const hf_status status = hf_surface_load(path.c_str(), &surface.ptr);
    if (status != HF_OK) return fail(status);

    hf_probe_mode mode;
    double default_tmax;
    if (mode_name == "plus-inf") {
        mode = HF_PROBE_PLUS_INF;
        default_tmax = 8.0;
    } else if (mode_name == "finite-wall") {
        mode = HF_PROBE_FINITE_WALL;
        default_tmax = 0.0;  // the wall fixes the range
    } else if (mode_name == "mixed") {
        mode = HF_PROBE_MIXED;
        default_tmax = 150.0;
    } else {
        std::fprintf(stderr, "error: --mode must be plus-inf, finite-wall or mixed\n");
        return 1;
    }
    if (tmax <= 0.0) tmax = default_tmax;

    OwnedString table;
    hf_probe_report report{};
    const hf_status pstatus =
        hf_probe(surface.ptr, mode, boundary, edge, tmax, &table.ptr, &report);
    if (pstatus != HF_OK) return fail(pstatus);

    if (table.ptr) std::fputs(table.ptr, stdout);
    std::printf("samples %ld\n", report.samples);
    if (report.edge_id >= 0) std::printf("edge %d\n", report.edge_id);
    if (report.face_id >= 0) std::printf("face %d\n", report.face_id);
    std::printf("extreme_B %.17g\n", report.extreme_B);
    std::printf("final_margin %.17g\n", report.final_margin);
    std::printf("trend %s\n", report.trend_ok ? "expected" : "NOT OBSERVED");
    if (!report.trend_ok) {
        std::fprintf(stderr, "error: expected qualitative behavior not observed\n");
        return 6;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic metrics on ideally triangulated bordered surfaces with prescribed "
                 "geodesic boundary lengths"};
    app.require_subcommand(1);

    std::string surface_path, targets_path, trace_path;
    std::string method = "flow";
    std::string probe_mode = "plus-inf";
    std::vector<double> w_arg;
    double tol = 0.0;
    double h = 1e-6;
    double tmax = 0.0;
    int boundary = 1;
    int edge = -1;
    int samples = 0;
    uint64_t seed = 20260810;

    auto* validate = app.add_subcommand("validate", "Check a surface document");
    validate->add_option("surface", surface_path, "surface document")->required();

    auto* lengths = app.add_subcommand("lengths", "Boundary lengths of the metric w * l0");
    lengths->add_option("surface", surface_path, "surface document")->required();
    lengths->add_option("--w", w_arg, "conformal factor (defaults to 0)")->delimiter(',');

    auto* solve = app.add_subcommand("solve", "Realize prescribed boundary lengths");
    solve->add_option("surface", surface_path, "surface document")->required();
    solve->add_option("targets", targets_path, "target document")->required();
    solve->add_option("--method", method, "flow | newton")->check(CLI::IsMember({"flow", "newton"}));
    solve->add_option("--tol", tol, "stopping tolerance on max|B_i - b_i|");
    solve->add_option("--trace", trace_path, "write the flow trajectory CSV here");

    auto* check = app.add_subcommand("check", "Jacobian verification battery");
    // --h would collide with the automatic -h help alias; keep --help only.
    check->set_help_flag("--help", "print help and exit");
    check->add_option("surface", surface_path, "surface document")->required();
    check->add_option("--w", w_arg, "evaluation point (defaults to 0)")->delimiter(',');
    check->add_option("--h", h, "finite-difference step");
    check->add_option("--samples", samples, "additional random admissible points");
    check->add_option("--seed", seed, "sampling seed");

    auto* probe = app.add_subcommand("probe", "Degeneration behavior along rays");
    probe->add_option("surface", surface_path, "surface document")->required();
    probe->add_option("--mode", probe_mode, "plus-inf | finite-wall | mixed")->required();
    probe->add_option("--boundary", boundary, "tracked boundary component (1-based)");
    probe->add_option("--edge", edge, "finite-wall target edge id");
    probe->add_option("--tmax", tmax, "ray parameter range");

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) return cmd_validate(surface_path);
    if (lengths->parsed()) return cmd_lengths(surface_path, w_arg);
    if (solve->parsed()) return cmd_solve(surface_path, targets_path, method, tol, trace_path);
    if (check->parsed()) return cmd_check(surface_path, w_arg, h, samples, seed);
    if (probe->parsed()) return cmd_probe(surface_path, probe_mode, boundary, edge, tmax);
    return 1;
}
