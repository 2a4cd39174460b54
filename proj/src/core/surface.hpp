#pragma once

#include <Eigen/Core>
#include <vector>

#include "core/triangulation.hpp"

namespace hexflow {

using ConformalFactor = Eigen::VectorXd;   // one real per boundary component
using BoundaryLengths = Eigen::VectorXd;   // strictly positive

// Edge lengths indexed like IdealTriangulation::edges(). Carries the
// quantities the conformal machinery reuses: log cosh(l/2) per edge and the
// scale rho = 2 cosh^2(l/2).
class Metric {
public:
    static Metric reference(std::vector<double> lengths);
    static Metric derived(std::vector<double> lengths);

    int edge_count() const { return static_cast<int>(lengths_.size()); }
    double length(int idx) const { return lengths_[static_cast<size_t>(idx)]; }
    const std::vector<double>& lengths() const { return lengths_; }
    // log cosh(l/2) of the edge; the admissibility wall offset.
    double wall_offset(int idx) const { return lch_[static_cast<size_t>(idx)]; }
    double rho(int idx) const;
    bool is_reference() const { return reference_; }

private:
    Metric(std::vector<double> lengths, bool reference);
    std::vector<double> lengths_;
    std::vector<double> lch_;
    bool reference_;
};

// An ideal triangulation together with its reference metric. Immutable after
// construction; every operation is a pure function of (surface, w) and safe
// to call concurrently.
class Surface {
public:
    Surface(IdealTriangulation tri, Metric reference_metric);

    const IdealTriangulation& triangulation() const { return tri_; }
    const Metric& reference_metric() const { return l0_; }
    int boundary_count() const { return tri_.boundary_count(); }
    int edge_count() const { return static_cast<int>(tri_.edges().size()); }
    int face_count() const { return static_cast<int>(tri_.faces().size()); }

    // Signed distance to the admissibility wall: min over edges of
    // w_a + w_b + log cosh(l0/2). w lies in the admissible set iff > 0.
    double admissibility_margin(const ConformalFactor& w) const;

    // Per-edge wall distances in edge order.
    Eigen::VectorXd edge_margins(const ConformalFactor& w) const;

    // The metric w * l0. Throws AdmissibilityError naming the first violated
    // edge.
    Metric apply_conformal(const ConformalFactor& w) const;

    // Total boundary length per component: each face contributes the B-arc
    // at every corner slot carrying that component.
    BoundaryLengths boundary_lengths(const ConformalFactor& w) const;

    // Jacobian L of the boundary lengths with respect to w. Symmetric with
    // negative diagonal and strictly diagonally dominant rows, so -L is
    // positive definite.
    Eigen::MatrixXd boundary_jacobian(const ConformalFactor& w) const;

private:
    void check_factor_size(const ConformalFactor& w) const;

    IdealTriangulation tri_;
    Metric l0_;
};

}  // namespace hexflow
