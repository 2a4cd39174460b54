#include "core/surface.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/hexkernel.hpp"
#include "core/trig.hpp"

namespace hexflow {

Metric::Metric(std::vector<double> lengths, bool reference)
    : lengths_(std::move(lengths)), reference_(reference) {
    lch_.reserve(lengths_.size());
    for (size_t i = 0; i < lengths_.size(); ++i) {
        const double l = lengths_[i];
        if (!(l > 0.0) || !std::isfinite(l)) {
            throw DomainError("edge length at index " + std::to_string(i) +
                              " must be positive and finite");
        }
        if (l > kLengthMax) {
            throw RangeError("edge length at index " + std::to_string(i) +
                             " exceeds the length cap");
        }
        lch_.push_back(log_cosh_half(l));
    }
}

Metric Metric::reference(std::vector<double> lengths) { return Metric(std::move(lengths), true); }

Metric Metric::derived(std::vector<double> lengths) { return Metric(std::move(lengths), false); }

double Metric::rho(int idx) const {
    // rho = 2 cosh^2(l/2) = exp(ln 2 + 2 log cosh(l/2))
    return std::exp(0.6931471805599453 + 2.0 * lch_[static_cast<size_t>(idx)]);
}

Surface::Surface(IdealTriangulation tri, Metric reference_metric)
    : tri_(std::move(tri)), l0_(std::move(reference_metric)) {
    ValidationReport report = tri_.validate();
    if (!report.ok) {
        throw ValidationError(report.problems,
                              "invalid ideal triangulation: " + report.problems.front());
    }
    if (l0_.edge_count() != static_cast<int>(tri_.edges().size())) {
        throw UsageError("metric has " + std::to_string(l0_.edge_count()) + " lengths for " +
                         std::to_string(tri_.edges().size()) + " edges");
    }
}

void Surface::check_factor_size(const ConformalFactor& w) const {
    if (w.size() != boundary_count()) {
        throw UsageError("conformal factor has " + std::to_string(w.size()) +
                         " entries, surface has " + std::to_string(boundary_count()) +
                         " boundary components");
    }
}

Eigen::VectorXd Surface::edge_margins(const ConformalFactor& w) const {
    check_factor_size(w);
    Eigen::VectorXd margins(edge_count());
    const auto& edges = tri_.edges();
    for (size_t e = 0; e < edges.size(); ++e) {
        margins[static_cast<Eigen::Index>(e)] =
            w[edges[e].a - 1] + w[edges[e].b - 1] + l0_.wall_offset(static_cast<int>(e));
    }
    return margins;
}

double Surface::admissibility_margin(const ConformalFactor& w) const {
    return edge_margins(w).minCoeff();
}

namespace {

// First edge (in edge order) whose margin is not strictly positive, or -1.
int first_violated(const std::vector<EdgeSpec>& edges, const Eigen::VectorXd& margins) {
    for (Eigen::Index e = 0; e < margins.size(); ++e) {
        if (!(margins[e] > 0.0)) return static_cast<int>(e);
    }
    return -1;
}

[[noreturn]] void throw_inadmissible(const EdgeSpec& edge, double margin) {
    throw AdmissibilityError(edge.id, margin,
                             "inadmissible conformal factor: edge " + std::to_string(edge.id) +
                                 " joining (" + std::to_string(edge.a) + "," +
                                 std::to_string(edge.b) + ") has margin " +
                                 std::to_string(margin));
}

}  // namespace

Metric Surface::apply_conformal(const ConformalFactor& w) const {
    const Eigen::VectorXd margins = edge_margins(w);
    const int bad = first_violated(tri_.edges(), margins);
    if (bad >= 0) throw_inadmissible(tri_.edges()[static_cast<size_t>(bad)], margins[bad]);

    const double margin_cap = log_cosh_half(kLengthMax);
    std::vector<double> lengths(static_cast<size_t>(edge_count()));
    for (Eigen::Index e = 0; e < margins.size(); ++e) {
        if (margins[e] > margin_cap) {
            throw RangeError("edge " + std::to_string(tri_.edges()[static_cast<size_t>(e)].id) +
                             " exceeds the length cap after conformal change");
        }
        const double u = std::expm1(margins[e]);
        lengths[static_cast<size_t>(e)] = 2.0 * std::log1p(u + std::sqrt(u * (u + 2.0)));
    }
    return Metric::derived(std::move(lengths));
}

BoundaryLengths Surface::boundary_lengths(const ConformalFactor& w) const {
    const Eigen::VectorXd margins = edge_margins(w);
    const int bad = first_violated(tri_.edges(), margins);
    if (bad >= 0) throw_inadmissible(tri_.edges()[static_cast<size_t>(bad)], margins[bad]);

    std::vector<hexdetail::SideHyp> hyp(static_cast<size_t>(edge_count()));
    for (Eigen::Index e = 0; e < margins.size(); ++e) {
        hyp[static_cast<size_t>(e)] = hexdetail::side_from_margin(margins[e]);
    }

    BoundaryLengths lengths = BoundaryLengths::Zero(boundary_count());
    for (const auto& f : tri_.faces()) {
        const std::array<hexdetail::SideHyp, 3> opp = {
            hyp[static_cast<size_t>(tri_.edge_index(f.opposite_edges[0]))],
            hyp[static_cast<size_t>(tri_.edge_index(f.opposite_edges[1]))],
            hyp[static_cast<size_t>(tri_.edge_index(f.opposite_edges[2]))],
        };
        const auto arcs = hexdetail::corner_arcs(opp);
        for (int t = 0; t < 3; ++t) {
            lengths[f.corners[t] - 1] += arcs[t];
        }
    }
    return lengths;
}

Eigen::MatrixXd Surface::boundary_jacobian(const ConformalFactor& w) const {
    const Eigen::VectorXd margins = edge_margins(w);
    const int bad = first_violated(tri_.edges(), margins);
    if (bad >= 0) throw_inadmissible(tri_.edges()[static_cast<size_t>(bad)], margins[bad]);

    std::vector<hexdetail::SideHyp> hyp(static_cast<size_t>(edge_count()));
    for (Eigen::Index e = 0; e < margins.size(); ++e) {
        hyp[static_cast<size_t>(e)] = hexdetail::side_from_margin(margins[e]);
    }

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(boundary_count(), boundary_count());
    for (const auto& f : tri_.faces()) {
        const std::array<hexdetail::SideHyp, 3> opp = {
            hyp[static_cast<size_t>(tri_.edge_index(f.opposite_edges[0]))],
            hyp[static_cast<size_t>(tri_.edge_index(f.opposite_edges[1]))],
            hyp[static_cast<size_t>(tri_.edge_index(f.opposite_edges[2]))],
        };
        const Eigen::Matrix3d local = hexdetail::corner_jacobian_slots(opp);
        // Repeated corner labels accumulate every matching slot pair.
        for (int r = 0; r < 3; ++r) {
            for (int s = 0; s < 3; ++s) {
                jac(f.corners[r] - 1, f.corners[s] - 1) += local(r, s);
            }
        }
    }
    return jac;
}

}  // namespace hexflow
