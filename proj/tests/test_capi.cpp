// Exercises the shared library surface exactly as an external client would:
// through hexflow/hexflow.h only.

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hexflow/hexflow.h"
#include "test_support.hpp"

namespace {

const char* kPantsDoc = R"({
  "boundaries": 3,
  "edges": [
    {"id": 1, "ends": [2, 3], "l0": 1.3169578969248166},
    {"id": 2, "ends": [3, 1], "l0": 1.3169578969248166},
    {"id": 3, "ends": [1, 2], "l0": 1.3169578969248166}
  ],
  "faces": [
    {"id": 1, "corners": [1, 2, 3], "opposite_edges": [1, 2, 3]},
    {"id": 2, "corners": [1, 2, 3], "opposite_edges": [1, 2, 3]}
  ]
})";

struct Handle {
    hf_surface* ptr = nullptr;
    ~Handle() { hf_surface_free(ptr); }
};

std::string temp_path(const char* name) {
    return std::string("capi_") + name;
}

}  // namespace

TEST_CASE("parse, query and serialize a surface") {
    Handle surface;
    REQUIRE(hf_surface_parse(kPantsDoc, &surface.ptr) == HF_OK);
    CHECK(hf_surface_boundaries(surface.ptr) == 3);
    CHECK(hf_surface_edges(surface.ptr) == 3);
    CHECK(hf_surface_faces(surface.ptr) == 2);
    CHECK(hf_validate(surface.ptr, nullptr) == HF_OK);

    char* text = hf_surface_to_json(surface.ptr);
    REQUIRE(text != nullptr);
    Handle again;
    CHECK(hf_surface_parse(text, &again.ptr) == HF_OK);
    CHECK(hf_surface_edges(again.ptr) == 3);
    hf_string_free(text);
}

TEST_CASE("status codes and error messages") {
    hf_surface* out = nullptr;
    CHECK(hf_surface_parse("{\"bad\":", &out) == HF_ERR_PARSE);
    CHECK(std::string(hf_last_error()).size() > 0);

    // Structurally broken: edge used four times.
    const char* broken = R"({
      "boundaries": 3,
      "edges": [{"id": 1, "ends": [2, 3], "l0": 1.0}],
      "faces": [{"id": 1, "corners": [1, 2, 3], "opposite_edges": [1, 1, 1]},
                {"id": 2, "corners": [1, 2, 3], "opposite_edges": [1, 1, 1]}]})";
    CHECK(hf_surface_parse(broken, &out) == HF_ERR_INVALID_SURFACE);

    Handle surface;
    REQUIRE(hf_surface_parse(kPantsDoc, &surface.ptr) == HF_OK);
    const double w_bad[3] = {-5.0, 0.0, 0.0};
    double B[3];
    CHECK(hf_boundary_lengths(surface.ptr, w_bad, B) == HF_ERR_INADMISSIBLE);
    CHECK(std::string(hf_last_error()).find("edge") != std::string::npos);

    CHECK(hf_boundary_lengths(surface.ptr, nullptr, nullptr) == HF_ERR_USAGE);

    const double b_bad[3] = {1.0, -1.0, 1.0};
    double w_out[3];
    CHECK(hf_newton_solve(surface.ptr, nullptr, b_bad, nullptr, w_out, B, nullptr) ==
          HF_ERR_USAGE);
}

TEST_CASE("metric and energy entry points") {
    Handle surface;
    REQUIRE(hf_surface_parse(kPantsDoc, &surface.ptr) == HF_OK);

    double margin = 0.0;
    REQUIRE(hf_margin(surface.ptr, nullptr, &margin) == HF_OK);
    CHECK(margin == doctest::Approx(hextest::kLogCoshHalfAcosh2).epsilon(1e-12));

    double B[3];
    REQUIRE(hf_boundary_lengths(surface.ptr, nullptr, B) == HF_OK);
    for (double v : B) CHECK(v == doctest::Approx(hextest::kTwoAcosh2).epsilon(1e-12));

    double lengths[3];
    const double w[3] = {0.1, 0.1, 0.1};
    REQUIRE(hf_edge_lengths(surface.ptr, w, lengths) == HF_OK);
    for (double v : lengths) CHECK(v == doctest::Approx(hextest::kPantsEdgeAll01).epsilon(1e-12));

    double jac[9];
    REQUIRE(hf_jacobian(surface.ptr, nullptr, jac) == HF_OK);
    CHECK(jac[0] < 0.0);
    CHECK(jac[1] == doctest::Approx(jac[3]).epsilon(1e-12));

    double phi = -1.0;
    REQUIRE(hf_energy_phi(surface.ptr, nullptr, nullptr, &phi) == HF_OK);
    CHECK(phi == 0.0);
    double psi = 0.0;
    REQUIRE(hf_energy_psi(surface.ptr, nullptr, w, B, &psi) == HF_OK);
    double defect = -1.0;
    REQUIRE(hf_defect(surface.ptr, nullptr, B, &defect) == HF_OK);
    CHECK(defect == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("solvers through the C interface write a trace") {
    Handle surface;
    REQUIRE(hf_surface_parse(kPantsDoc, &surface.ptr) == HF_OK);
    const double b[3] = {1.0, 1.0, 1.0};
    double w_flow[3], B_flow[3], w_newton[3], B_newton[3];
    hf_solve_report flow_report{}, newton_report{};

    const std::string trace = temp_path("trace.csv");
    REQUIRE(hf_flow_solve(surface.ptr, nullptr, b, nullptr, trace.c_str(), w_flow, B_flow,
                          &flow_report) == HF_OK);
    CHECK(flow_report.converged == 1);
    CHECK(flow_report.residual <= 1e-10);
    CHECK(flow_report.fit_valid == 1);
    CHECK(flow_report.lambda0 > 0.0);

    REQUIRE(hf_newton_solve(surface.ptr, nullptr, b, nullptr, w_newton, B_newton,
                            &newton_report) == HF_OK);
    CHECK(newton_report.converged == 1);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(w_flow[i] - w_newton[i]) <= 1e-8);
        CHECK(B_newton[i] == doctest::Approx(1.0).epsilon(1e-9));
    }

    std::ifstream in(trace);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,w_1,w_2,w_3,B_1,B_2,B_3,C,dLambda");
    int rows = 0;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == static_cast<int>(flow_report.steps) + 1);
    std::remove(trace.c_str());
}

TEST_CASE("target documents through the C interface") {
    Handle surface;
    REQUIRE(hf_surface_parse(kPantsDoc, &surface.ptr) == HF_OK);

    const std::string path = temp_path("targets.json");
    {
        std::ofstream out(path);
        out << R"({"b": [1.0, 2.0, 0.5], "w0": [0.1, 0.0, -0.1]})";
    }
    double b[3], w0[3];
    int has_w0 = 0;
    REQUIRE(hf_targets_load(surface.ptr, path.c_str(), b, w0, &has_w0) == HF_OK);
    CHECK(b[1] == 2.0);
    CHECK(has_w0 == 1);
    CHECK(w0[2] == -0.1);

    {
        std::ofstream out(path);
        out << R"({"b": [1.0, 0.0, 0.5]})";
    }
    CHECK(hf_targets_load(surface.ptr, path.c_str(), b, w0, &has_w0) == HF_ERR_USAGE);
    std::remove(path.c_str());
}

TEST_CASE("checks and probes through the C interface") {
    Handle surface;
    REQUIRE(hf_surface_parse(kPantsDoc, &surface.ptr) == HF_OK);

    hf_check_report check{};
    REQUIRE(hf_check(surface.ptr, nullptr, 0.0, &check) == HF_OK);
    CHECK(check.passed == 1);
    CHECK(check.cholesky_ok == 1);
    CHECK(check.fd_max_rel <= 1e-5);

    hf_probe_report probe{};
    char* table = nullptr;
    REQUIRE(hf_probe(surface.ptr, HF_PROBE_PLUS_INF, 1, -1, 8.0, &table, &probe) == HF_OK);
    CHECK(probe.trend_ok == 1);
    CHECK(probe.extreme_B < 1e-2);
    REQUIRE(table != nullptr);
    std::istringstream tbl(table);
    std::string header;
    std::getline(tbl, header);
    CHECK(header == "t,margin,B_1,B_2,B_3");
    hf_string_free(table);

    // Mixed probe on a torus-like instance has no distinct corners: probe error.
    const char* torus = R"({
      "boundaries": 1,
      "edges": [{"id": 1, "ends": [1, 1], "l0": 1.5},
                {"id": 2, "ends": [1, 1], "l0": 1.5},
                {"id": 3, "ends": [1, 1], "l0": 1.5}],
      "faces": [{"id": 1, "corners": [1, 1, 1], "opposite_edges": [1, 2, 3]},
                {"id": 2, "corners": [1, 1, 1], "opposite_edges": [1, 2, 3]}]})";
    Handle torus_handle;
    REQUIRE(hf_surface_parse(torus, &torus_handle.ptr) == HF_OK);
    CHECK(hf_probe(torus_handle.ptr, HF_PROBE_MIXED, 1, -1, 10.0, nullptr, &probe) ==
          HF_ERR_PROBE_FAILED);
}
