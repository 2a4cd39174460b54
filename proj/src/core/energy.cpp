#include "core/energy.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace hexflow {

namespace {

struct GaussNode {
    double x;
    double weight;
};

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr GaussNode kGauss16[16] = {
    {-0.989400934991649933, 0.0271524594117540949},
    {-0.944575023073232576, 0.0622535239386478929},
    {-0.865631202387831744, 0.0951585116824927848},
    {-0.755404408355003034, 0.124628971255533872},
    {-0.617876244402643748, 0.149595988816576732},
    {-0.458016777657227386, 0.169156519395002538},
    {-0.281603550779258913, 0.182603415044923589},
    {-0.0950125098376374402, 0.189450610455068496},
    {0.0950125098376374402, 0.189450610455068496},
    {0.281603550779258913, 0.182603415044923589},
    {0.458016777657227386, 0.169156519395002538},
    {0.617876244402643748, 0.149595988816576732},
    {0.755404408355003034, 0.124628971255533872},
    {0.865631202387831744, 0.0951585116824927848},
    {0.944575023073232576, 0.0622535239386478929},
    {0.989400934991649933, 0.0271524594117540949},
};

double panels_estimate(const std::function<double(double)>& f, int panels) {
    double total = 0.0;
    const double width = 1.0 / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * width;
        double acc = 0.0;
        for (const auto& node : kGauss16) {
            acc += node.weight * f(mid + 0.5 * width * node.x);
        }
        total += 0.5 * width * acc;
    }
    return total;
}

}  // namespace

double integrate_01(const std::function<double(double)>& f, double rel_tol) {
    constexpr int kMaxPanels = 1 << 10;
    double previous = panels_estimate(f, 1);
    for (int panels = 2; panels <= kMaxPanels; panels *= 2) {
        const double current = panels_estimate(f, panels);
        if (std::abs(current - previous) <= rel_tol * std::max(1.0, std::abs(current))) {
            return current;
        }
        previous = current;
    }
    throw NumericError("quadrature did not converge within the panel budget");
}

double boundary_form_integral(const Surface& surface, const ConformalFactor& from,
                              const ConformalFactor& to, double rel_tol) {
    if (from.size() != to.size() || from.size() != surface.boundary_count()) {
        throw UsageError("segment endpoints must match the boundary count");
    }
    const Eigen::VectorXd delta = to - from;
    if (delta.isZero(0.0)) return 0.0;
    auto integrand = [&](double s) {
        return surface.boundary_lengths(from + s * delta).dot(delta);
    };
    return integrate_01(integrand, rel_tol);
}

double energy_phi(const Surface& surface, const ConformalFactor& base, const ConformalFactor& w,
                  double rel_tol) {
    return -boundary_form_integral(surface, base, w, rel_tol);
}

double energy_psi(const Surface& surface, const ConformalFactor& base, const ConformalFactor& w,
                  const BoundaryLengths& targets, double rel_tol) {
    if (targets.size() != surface.boundary_count()) {
        throw UsageError("target vector must match the boundary count");
    }
    return energy_phi(surface, base, w, rel_tol) + targets.dot(w);
}

double boundary_defect(const BoundaryLengths& lengths, const BoundaryLengths& targets) {
    return (lengths - targets).squaredNorm();
}

DefectLyapunov defect_and_lyapunov(const Surface& surface, const ConformalFactor& base,
                                   const ConformalFactor& w, const BoundaryLengths& targets,
                                   double psi_ref) {
    DefectLyapunov result;
    result.defect = boundary_defect(surface.boundary_lengths(w), targets);
    result.lyapunov = energy_psi(surface, base, w, targets) - psi_ref + result.defect;
    return result;
}

}  // namespace hexflow
