#include "core/document.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"

namespace hexflow {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ParseError("unknown field \"" + it.key() + "\" in " + where);
        }
    }
}

const json& require_field(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError("missing field \"" + key + "\" in " + where);
    }
    return *it;
}

int as_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) {
        throw ParseError(where + " must be an integer");
    }
    return v.get<int>();
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) {
        throw ParseError(where + " must be a number");
    }
    return v.get<double>();
}

std::array<int, 3> as_int_triple(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 3) {
        throw ParseError(where + " must be an array of 3 integers");
    }
    return {as_int(v[0], where), as_int(v[1], where), as_int(v[2], where)};
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("JSON syntax error: ") + e.what());
    }
}

}  // namespace

SurfaceDocument parse_surface_document(const std::string& text) {
    const json root = parse_json(text);
    if (!root.is_object()) throw ParseError("surface document must be a JSON object");
    reject_unknown_keys(root, {"boundaries", "edges", "faces"}, "surface document");

    SurfaceDocument doc;
    doc.boundaries = as_int(require_field(root, "boundaries", "surface document"), "boundaries");

    const json& edges = require_field(root, "edges", "surface document");
    if (!edges.is_array()) throw ParseError("\"edges\" must be an array");
    std::set<int> edge_ids;
    for (size_t i = 0; i < edges.size(); ++i) {
        const std::string where = "edges[" + std::to_string(i) + "]";
        const json& e = edges[i];
        if (!e.is_object()) throw ParseError(where + " must be an object");
        reject_unknown_keys(e, {"id", "ends", "l0"}, where);
        SurfaceDocument::EdgeEntry entry;
        entry.id = as_int(require_field(e, "id", where), where + ".id");
        const json& ends = require_field(e, "ends", where);
        if (!ends.is_array() || ends.size() != 2) {
            throw ParseError(where + ".ends must be an array of 2 boundary indices");
        }
        entry.a = as_int(ends[0], where + ".ends");
        entry.b = as_int(ends[1], where + ".ends");
        entry.l0 = as_number(require_field(e, "l0", where), where + ".l0");
        if (!edge_ids.insert(entry.id).second) {
            throw ParseError(where + ": duplicate edge id " + std::to_string(entry.id));
        }
        doc.edges.push_back(entry);
    }

    const json& faces = require_field(root, "faces", "surface document");
    if (!faces.is_array()) throw ParseError("\"faces\" must be an array");
    std::set<int> face_ids;
    for (size_t i = 0; i < faces.size(); ++i) {
        const std::string where = "faces[" + std::to_string(i) + "]";
        const json& f = faces[i];
        if (!f.is_object()) throw ParseError(where + " must be an object");
        reject_unknown_keys(f, {"id", "corners", "opposite_edges"}, where);
        SurfaceDocument::FaceEntry entry;
        entry.id = as_int(require_field(f, "id", where), where + ".id");
        entry.corners = as_int_triple(require_field(f, "corners", where), where + ".corners");
        entry.opposite_edges =
            as_int_triple(require_field(f, "opposite_edges", where), where + ".opposite_edges");
        if (!face_ids.insert(entry.id).second) {
            throw ParseError(where + ": duplicate face id " + std::to_string(entry.id));
        }
        doc.faces.push_back(entry);
    }

    return doc;
}

std::string serialize_surface_document(const SurfaceDocument& doc) {
    json root;
    root["boundaries"] = doc.boundaries;
    root["edges"] = json::array();
    for (const auto& e : doc.edges) {
        root["edges"].push_back({{"id", e.id}, {"ends", {e.a, e.b}}, {"l0", e.l0}});
    }
    root["faces"] = json::array();
    for (const auto& f : doc.faces) {
        root["faces"].push_back({{"id", f.id},
                                 {"corners", {f.corners[0], f.corners[1], f.corners[2]}},
                                 {"opposite_edges",
                                  {f.opposite_edges[0], f.opposite_edges[1], f.opposite_edges[2]}}});
    }
    return root.dump(2) + "\n";
}

SurfaceDocument load_surface_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open surface document: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_surface_document(buffer.str());
}

Surface build_surface(const SurfaceDocument& doc) {
    std::vector<EdgeSpec> edges;
    std::vector<double> lengths;
    edges.reserve(doc.edges.size());
    lengths.reserve(doc.edges.size());
    for (const auto& e : doc.edges) {
        edges.push_back({e.id, e.a, e.b});
        lengths.push_back(e.l0);
    }
    std::vector<FaceSpec> faces;
    faces.reserve(doc.faces.size());
    for (const auto& f : doc.faces) {
        faces.push_back({f.id, f.corners, f.opposite_edges});
    }
    return Surface(IdealTriangulation(doc.boundaries, std::move(edges), std::move(faces)),
                   Metric::reference(std::move(lengths)));
}

TargetDocument parse_target_document(const std::string& text, int boundary_count) {
    const json root = parse_json(text);
    if (!root.is_object()) throw ParseError("target document must be a JSON object");
    reject_unknown_keys(root, {"b", "w0"}, "target document");

    TargetDocument doc;
    const json& b = require_field(root, "b", "target document");
    if (!b.is_array()) throw ParseError("\"b\" must be an array of positive numbers");
    if (static_cast<int>(b.size()) != boundary_count) {
        throw UsageError("target document has " + std::to_string(b.size()) +
                         " entries for " + std::to_string(boundary_count) +
                         " boundary components");
    }
    doc.b.resize(boundary_count);
    for (int i = 0; i < boundary_count; ++i) {
        doc.b[i] = as_number(b[static_cast<size_t>(i)], "b[" + std::to_string(i) + "]");
        if (!(doc.b[i] > 0.0)) {
            throw UsageError("target boundary lengths must be positive (b_" +
                             std::to_string(i + 1) + " = " + std::to_string(doc.b[i]) + ")");
        }
    }
    if (root.contains("w0")) {
        const json& w0 = root["w0"];
        if (!w0.is_array() || static_cast<int>(w0.size()) != boundary_count) {
            throw UsageError("\"w0\" must be an array of length " +
                             std::to_string(boundary_count));
        }
        ConformalFactor w(boundary_count);
        for (int i = 0; i < boundary_count; ++i) {
            w[i] = as_number(w0[static_cast<size_t>(i)], "w0[" + std::to_string(i) + "]");
        }
        doc.w0 = w;
    }
    return doc;
}

TargetDocument load_target_document(const std::string& path, int boundary_count) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open target document: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_target_document(buffer.str(), boundary_count);
}

}  // namespace hexflow
