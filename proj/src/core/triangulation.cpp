#include "core/triangulation.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hexflow {

IdealTriangulation::IdealTriangulation(int boundary_count, std::vector<EdgeSpec> edges,
                                       std::vector<FaceSpec> faces)
    : boundary_count_(boundary_count), edges_(std::move(edges)), faces_(std::move(faces)) {
    for (size_t i = 0; i < edges_.size(); ++i) {
        edge_index_.emplace(edges_[i].id, static_cast<int>(i));
    }
}

int IdealTriangulation::edge_index(int edge_id) const {
    auto it = edge_index_.find(edge_id);
    return it == edge_index_.end() ? -1 : it->second;
}

ValidationReport IdealTriangulation::validate() const {
    ValidationReport report;
    auto fail = [&report](const std::string& msg) {
        report.ok = false;
        report.problems.push_back(msg);
    };

    if (boundary_count_ < 1) {
        fail("boundary count must be at least 1");
    }

    std::set<int> edge_ids;
    for (const auto& e : edges_) {
        if (!edge_ids.insert(e.id).second) {
            fail("duplicate edge id " + std::to_string(e.id));
        }
        if (e.a < 1 || e.a > boundary_count_ || e.b < 1 || e.b > boundary_count_) {
            fail("edge " + std::to_string(e.id) + " has an endpoint outside 1.." +
                 std::to_string(boundary_count_));
        }
    }

    std::set<int> face_ids;
    std::unordered_map<int, int> slot_count;
    bool references_ok = true;
    for (const auto& f : faces_) {
        if (!face_ids.insert(f.id).second) {
            fail("duplicate face id " + std::to_string(f.id));
        }
        for (int t = 0; t < 3; ++t) {
            if (f.corners[t] < 1 || f.corners[t] > boundary_count_) {
                fail("face " + std::to_string(f.id) + " corner slot " + std::to_string(t) +
                     " outside 1.." + std::to_string(boundary_count_));
            }
            const int eid = f.opposite_edges[t];
            if (edge_index(eid) < 0) {
                fail("face " + std::to_string(f.id) + " references unknown edge " +
                     std::to_string(eid));
                references_ok = false;
                continue;
            }
            slot_count[eid] += 1;
        }
    }

    if (2 * edges_.size() != 3 * faces_.size()) {
        std::ostringstream os;
        os << "edge/face count mismatch: 2*|E| = " << 2 * edges_.size() << " but 3*|F| = "
           << 3 * faces_.size();
        fail(os.str());
    }

    for (const auto& e : edges_) {
        const int c = slot_count.count(e.id) ? slot_count.at(e.id) : 0;
        if (c != 2) {
            fail("edge " + std::to_string(e.id) + " appears in " + std::to_string(c) +
                 " face slots, expected 2");
        }
    }

    if (references_ok) {
        for (const auto& f : faces_) {
            for (int t = 0; t < 3; ++t) {
                const EdgeSpec& e = edges_[edge_index(f.opposite_edges[t])];
                std::array<int, 2> got = {std::min(e.a, e.b), std::max(e.a, e.b)};
                const int u = f.corners[(t + 1) % 3];
                const int v = f.corners[(t + 2) % 3];
                std::array<int, 2> want = {std::min(u, v), std::max(u, v)};
                if (got != want) {
                    fail("face " + std::to_string(f.id) + " slot " + std::to_string(t) +
                         ": opposite edge " + std::to_string(e.id) + " joins (" +
                         std::to_string(e.a) + "," + std::to_string(e.b) +
                         ") but should join (" + std::to_string(u) + "," + std::to_string(v) + ")");
                }
            }
        }
    }

    std::vector<bool> seen(static_cast<size_t>(std::max(boundary_count_, 0)) + 1, false);
    for (const auto& f : faces_) {
        for (int t = 0; t < 3; ++t) {
            if (f.corners[t] >= 1 && f.corners[t] <= boundary_count_) {
                seen[static_cast<size_t>(f.corners[t])] = true;
            }
        }
    }
    for (int i = 1; i <= boundary_count_; ++i) {
        if (!seen[static_cast<size_t>(i)]) {
            fail("boundary component " + std::to_string(i) + " appears in no face corner");
        }
    }

    return report;
}

}  // namespace hexflow
