#include "core/hexkernel.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/trig.hpp"

namespace hexflow {

namespace {

void require_side(double l, const char* name) {
    if (!(l > 0.0) || !std::isfinite(l)) {
        throw DomainError(std::string("hexagon side ") + name + " must be positive and finite");
    }
    if (l > kLengthMax) {
        throw RangeError(std::string("hexagon side ") + name + " exceeds the length cap");
    }
}

}  // namespace

namespace hexdetail {

SideHyp side_from_length(double l) {
    SideHyp s;
    s.l = l;
    const double sh_half = std::sinh(0.5 * l);
    s.chm1 = 2.0 * sh_half * sh_half;
    s.ch = 1.0 + s.chm1;
    s.sh = std::sinh(l);
    return s;
}

SideHyp side_from_margin(double m) {
    SideHyp s;
    s.chm1 = 2.0 * std::expm1(2.0 * m);
    s.ch = 1.0 + s.chm1;
    // sinh = sqrt((ch-1)(ch+1)); past 1e150 the direct product would
    // overflow and sinh == cosh to double precision anyway.
    s.sh = s.chm1 > 1e150 ? s.ch : std::sqrt(s.chm1 * (s.chm1 + 2.0));
    s.l = acosh1p(s.chm1);
    return s;
}

std::array<double, 3> corner_arcs(const std::array<SideHyp, 3>& opp) {
    std::array<double, 3> theta{};
    for (int r = 0; r < 3; ++r) {
        const SideHyp& adj1 = opp[(r + 1) % 3];
        const SideHyp& adj2 = opp[(r + 2) % 3];
        const double denom = adj1.sh * adj2.sh;
        if (!std::isfinite(denom)) {
            throw RangeError("sinh product overflow in cosine law");
        }
        // cosh theta - 1 = (cosh opp + cosh(adj1 - adj2)) / (sinh adj1 sinh adj2):
        // strictly positive, so the arc always exists.
        const double q = (opp[r].ch + std::cosh(adj1.l - adj2.l)) / denom;
        if (!std::isfinite(q)) {
            throw RangeError("cosine law argument overflow");
        }
        theta[r] = acosh1p(q);
    }
    return theta;
}

Eigen::Matrix3d corner_jacobian_slots(const std::array<SideHyp, 3>& opp) {
    Eigen::Matrix3d jac;
    for (int r = 0; r < 3; ++r) {
        const SideHyp& adj1 = opp[(r + 1) % 3];
        const SideHyp& adj2 = opp[(r + 2) % 3];
        if (adj1.chm1 < 1e-300 || adj2.chm1 < 1e-300) {
            throw RangeError("1/(cosh l - 1) overflow next to the admissibility wall");
        }
        const double denom = adj1.sh * adj2.sh;
        if (!std::isfinite(denom)) {
            throw RangeError("sinh product overflow in corner Jacobian");
        }
        const double q = (opp[r].ch + std::cosh(adj1.l - adj2.l)) / denom;
        const double sinh_theta = std::sqrt(q * (q + 2.0));
        const double scale = -2.0 / (sinh_theta * denom);

        jac(r, r) = scale * ((adj2.ch + opp[r].ch * adj1.ch) / adj1.chm1 +
                             (adj1.ch + opp[r].ch * adj2.ch) / adj2.chm1);
        for (int s = 0; s < 3; ++s) {
            if (s == r) continue;
            const int t = 3 - r - s;  // edge joining corners r and s
            jac(r, s) = scale * (opp[r].ch + opp[s].ch - opp[t].ch + 1.0) / opp[t].chm1;
        }
    }
    if (!jac.allFinite()) {
        throw RangeError("corner Jacobian overflow");
    }
    return jac;
}

}  // namespace hexdetail

double conformal_edge_length(double w_a, double w_b, double l0) {
    require_side(l0, "l0");
    const double margin = (w_a + w_b) + log_cosh_half(l0);
    if (!(margin > 0.0)) {
        throw AdmissibilityError(-1, margin,
                                 "conformal factor pair inadmissible, margin = " + std::to_string(margin));
    }
    if (margin > log_cosh_half(kLengthMax)) {
        throw RangeError("conformal edge length exceeds the length cap");
    }
    // cosh(l/2) - 1 = e^margin - 1
    const double u = std::expm1(margin);
    return 2.0 * std::log1p(u + std::sqrt(u * (u + 2.0)));
}

HexGeometry barc_lengths(const HexSides& sides) {
    require_side(sides.l_ij, "l_ij");
    require_side(sides.l_jk, "l_jk");
    require_side(sides.l_ki, "l_ki");
    const std::array<hexdetail::SideHyp, 3> opp = {
        hexdetail::side_from_length(sides.l_jk),
        hexdetail::side_from_length(sides.l_ki),
        hexdetail::side_from_length(sides.l_ij),
    };
    const auto theta = hexdetail::corner_arcs(opp);
    HexGeometry geom;
    geom.sides = sides;
    geom.theta_i = theta[0];
    geom.theta_j = theta[1];
    geom.theta_k = theta[2];
    geom.normalizer = std::sinh(theta[0]) * opp[1].sh * opp[2].sh;
    if (!std::isfinite(geom.normalizer)) {
        throw RangeError("hexagon normalizer overflow");
    }
    return geom;
}

CornerJacobian corner_jacobian(double w_i, double w_j, double w_k, const HexSides& l0_sides) {
    require_side(l0_sides.l_ij, "l0_ij");
    require_side(l0_sides.l_jk, "l0_jk");
    require_side(l0_sides.l_ki, "l0_ki");
    const double m_jk = (w_j + w_k) + log_cosh_half(l0_sides.l_jk);
    const double m_ki = (w_k + w_i) + log_cosh_half(l0_sides.l_ki);
    const double m_ij = (w_i + w_j) + log_cosh_half(l0_sides.l_ij);
    const double margin = std::min({m_jk, m_ki, m_ij});
    if (!(margin > 0.0)) {
        throw AdmissibilityError(-1, margin,
                                 "conformal factors inadmissible for this face, margin = " +
                                     std::to_string(margin));
    }
    const std::array<hexdetail::SideHyp, 3> opp = {
        hexdetail::side_from_margin(m_jk),
        hexdetail::side_from_margin(m_ki),
        hexdetail::side_from_margin(m_ij),
    };
    return hexdetail::corner_jacobian_slots(opp);
}

double sine_law_residual(const HexGeometry& geom) {
    const double r0 = std::sinh(geom.theta_i) / std::sinh(geom.sides.l_jk);
    const double r1 = std::sinh(geom.theta_j) / std::sinh(geom.sides.l_ki);
    const double r2 = std::sinh(geom.theta_k) / std::sinh(geom.sides.l_ij);
    const double hi = std::max({r0, r1, r2});
    const double lo = std::min({r0, r1, r2});
    if (!(hi > 0.0)) return 0.0;
    return (hi - lo) / hi;
}

}  // namespace hexflow
