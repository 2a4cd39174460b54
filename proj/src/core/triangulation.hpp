#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <vector>

namespace hexflow {

// Boundary components are numbered 1..n and play the role of vertices. An
// edge may join a boundary to itself and two boundaries may be joined by
// several edges, so edges are identified by id, not by endpoint pair.
struct EdgeSpec {
    int id;
    int a;
    int b;
};

// corners[t] lists the boundary component at slot t (repeats allowed);
// opposite_edges[t] is the edge joining the other two slots.
struct FaceSpec {
    int id;
    std::array<int, 3> corners;
    std::array<int, 3> opposite_edges;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> problems;
};

class IdealTriangulation {
public:
    IdealTriangulation(int boundary_count, std::vector<EdgeSpec> edges, std::vector<FaceSpec> faces);

    int boundary_count() const { return boundary_count_; }
    const std::vector<EdgeSpec>& edges() const { return edges_; }
    const std::vector<FaceSpec>& faces() const { return faces_; }

    // Position of an edge id in edges(), or -1.
    int edge_index(int edge_id) const;

    // Structural checks: duplicate ids, dangling references, edge-slot
    // counts (each edge in exactly two face slots, 2|E| = 3|F|), opposite
    // edge endpoints matching the facing corner pair, and boundary coverage.
    ValidationReport validate() const;

private:
    int boundary_count_;
    std::vector<EdgeSpec> edges_;
    std::vector<FaceSpec> faces_;
    std::unordered_map<int, int> edge_index_;
};

}  // namespace hexflow
