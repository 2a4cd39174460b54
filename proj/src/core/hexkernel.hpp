#pragma once

#include <Eigen/Core>
#include <array>

namespace hexflow {

// Alternating side lengths of a right-angled hyperbolic hexagon. The three
// remaining sides are the B-arcs at the corners i, j, k; the arc at corner i
// is opposite l_jk and adjacent to l_ki and l_ij.
struct HexSides {
    double l_ij;
    double l_jk;
    double l_ki;
};

struct HexGeometry {
    HexSides sides;
    double theta_i;
    double theta_j;
    double theta_k;
    // A = sinh(theta_i) sinh(l_ki) sinh(l_ij); the sine law makes the same
    // product taken at any corner agree.
    double normalizer;
};

// Entry (r, s) = d theta_r / d w_s over corners ordered (i, j, k).
using CornerJacobian = Eigen::Matrix3d;

// New edge length after the conformal change cosh(l/2) = e^{w_a+w_b} cosh(l0/2).
// Throws AdmissibilityError when w_a + w_b + log cosh(l0/2) <= 0 and
// RangeError when the result would exceed the length cap.
double conformal_edge_length(double w_a, double w_b, double l0);

// B-arc lengths of the hexagon with the given sides (cosine law). Defined for
// every positive side triple; the cosine-law argument always exceeds 1.
HexGeometry barc_lengths(const HexSides& sides);

// Closed-form Jacobian of the B-arc lengths with respect to the conformal
// factors at the three corners, evaluated on the metric w * l0. Symmetric,
// strictly diagonally dominant, negative diagonal.
CornerJacobian corner_jacobian(double w_i, double w_j, double w_k, const HexSides& l0_sides);

// Max pairwise relative spread of the three ratios sinh(theta)/sinh(opposite
// side). Genuine geometries give round-off; a corrupted arc gives O(1).
double sine_law_residual(const HexGeometry& geom);

namespace hexdetail {

// Hyperbolic functions of one side length, with cosh l - 1 kept free of
// cancellation for short sides.
struct SideHyp {
    double l;
    double ch;    // cosh l
    double chm1;  // cosh l - 1
    double sh;    // sinh l
};

SideHyp side_from_length(double l);
// Side defined through the wall distance m = w_a + w_b + log cosh(l0/2) > 0,
// so cosh(l/2) = e^m.
SideHyp side_from_margin(double m);

// Slot convention used by the face assembly: opp[r] is the side opposite
// corner r; the sides adjacent to corner r are opp[(r+1)%3] and opp[(r+2)%3].
std::array<double, 3> corner_arcs(const std::array<SideHyp, 3>& opp);
Eigen::Matrix3d corner_jacobian_slots(const std::array<SideHyp, 3>& opp);

}  // namespace hexdetail

}  // namespace hexflow
