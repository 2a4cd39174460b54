#pragma once

#include <optional>
#include <string>

#include "core/surface.hpp"

namespace hexflow {

// On-disk description of (triangulation, reference metric). JSON with
// exactly these fields, unknown keys rejected:
//   { "boundaries": n,
//     "edges":  [ {"id": 1, "ends": [a, b], "l0": 1.25}, ... ],
//     "faces":  [ {"id": 1, "corners": [c0, c1, c2],
//                  "opposite_edges": [e0, e1, e2]}, ... ] }
struct SurfaceDocument {
    int boundaries = 0;
    struct EdgeEntry {
        int id;
        int a;
        int b;
        double l0;
        bool operator==(const EdgeEntry&) const = default;
    };
    struct FaceEntry {
        int id;
        std::array<int, 3> corners;
        std::array<int, 3> opposite_edges;
        bool operator==(const FaceEntry&) const = default;
    };
    std::vector<EdgeEntry> edges;
    std::vector<FaceEntry> faces;
    bool operator==(const SurfaceDocument&) const = default;
};

SurfaceDocument parse_surface_document(const std::string& text);
std::string serialize_surface_document(const SurfaceDocument& doc);
SurfaceDocument load_surface_document(const std::string& path);

// Builds the validated surface; throws ValidationError on structural
// problems and DomainError/RangeError on bad lengths.
Surface build_surface(const SurfaceDocument& doc);

// { "b": [b_1..b_n], "w0": [..] }  with w0 optional and every b_i > 0.
struct TargetDocument {
    BoundaryLengths b;
    std::optional<ConformalFactor> w0;
};

TargetDocument parse_target_document(const std::string& text, int boundary_count);
TargetDocument load_target_document(const std::string& path, int boundary_count);

}  // namespace hexflow
